//! Seeded program mutations that preserve the control-flow signature.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::lang::{parse, pretty_print, Ast, BinOp, Kind, Label, Node, UnOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    OperatorSwap,
    ConstantChange,
    StatementDeletion,
    StatementInsertion,
    StatementReorder,
    PredicateFlip,
    VariableMisuse,
}

impl MutationKind {
    pub const ALL: [MutationKind; 7] = [
        MutationKind::OperatorSwap,
        MutationKind::ConstantChange,
        MutationKind::StatementDeletion,
        MutationKind::StatementInsertion,
        MutationKind::StatementReorder,
        MutationKind::PredicateFlip,
        MutationKind::VariableMisuse,
    ];

    /// Statement-level edits needed to undo the mutation. Swapping two
    /// statements takes a deletion and an insertion.
    pub fn edits(self) -> usize {
        match self {
            MutationKind::StatementReorder => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MutationKind::OperatorSwap => "operator swap",
            MutationKind::ConstantChange => "constant change",
            MutationKind::StatementDeletion => "statement deletion",
            MutationKind::StatementInsertion => "statement insertion",
            MutationKind::StatementReorder => "statement reorder",
            MutationKind::PredicateFlip => "predicate flip",
            MutationKind::VariableMisuse => "variable misuse",
        };
        f.write_str(name)
    }
}

const OP_GROUPS: [&[BinOp]; 4] = [
    &[BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod],
    &[BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge],
    &[BinOp::Eq, BinOp::Ne],
    &[BinOp::And, BinOp::Or],
];

fn negated(op: BinOp) -> Option<BinOp> {
    Some(match op {
        BinOp::Lt => BinOp::Ge,
        BinOp::Ge => BinOp::Lt,
        BinOp::Le => BinOp::Gt,
        BinOp::Gt => BinOp::Le,
        BinOp::Eq => BinOp::Ne,
        BinOp::Ne => BinOp::Eq,
        _ => return None,
    })
}

type Path = Vec<usize>;

fn walk(n: &Node, path: &mut Path, f: &mut dyn FnMut(&Node, Option<&Node>, &Path)) {
    walk_in(n, None, path, f)
}

fn walk_in(n: &Node, parent: Option<&Node>, path: &mut Path, f: &mut dyn FnMut(&Node, Option<&Node>, &Path)) {
    f(n, parent, path);
    for (i, c) in n.children.iter().enumerate() {
        path.push(i);
        walk_in(c, Some(n), path, f);
        path.pop();
    }
}

fn at_mut<'a>(mut n: &'a mut Node, path: &[usize]) -> &'a mut Node {
    for &i in path {
        n = &mut n.children[i];
    }
    n
}

fn is_list(n: &Node, script: bool) -> bool {
    n.kind() == Kind::Block || (script && n.kind() == Kind::Program)
}

/// Statement lists with the positions of their non-control statements.
fn lists(ast: &Ast) -> Vec<(Path, Vec<usize>)> {
    let script = ast.entry().is_none();
    let mut out = Vec::new();
    walk(&ast.root, &mut Vec::new(), &mut |n, _, p| {
        if is_list(n, script) {
            let simple = n
                .children
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.kind().is_control())
                .map(|(i, _)| i)
                .collect();
            out.push((p.clone(), simple));
        }
    });
    out
}

/// Paths of nodes satisfying `pred`.
fn find_paths(ast: &Ast, pred: &dyn Fn(&Node, Option<&Node>) -> bool) -> Vec<Path> {
    let mut out = Vec::new();
    walk(&ast.root, &mut Vec::new(), &mut |n, parent, p| {
        if pred(n, parent) {
            out.push(p.clone());
        }
    });
    out
}

fn apply_once(ast: &Ast, kind: MutationKind, rng: &mut impl Rng) -> Option<Node> {
    let mut root = ast.root.clone();
    match kind {
        MutationKind::OperatorSwap => {
            let paths = find_paths(ast, &|n, _| {
                matches!(n.kind(), Kind::BinOp(_))
                    || (n.kind() == Kind::Assign && n.payload().is_some_and(|p| p != "="))
            });
            let path = paths.choose(rng)?;
            let node = at_mut(&mut root, path);
            match node.kind() {
                Kind::BinOp(op) => {
                    let group = OP_GROUPS.iter().find(|g| g.contains(&op))?;
                    let others: Vec<BinOp> = group.iter().copied().filter(|o| *o != op).collect();
                    node.label = Label::new(Kind::BinOp(*others.choose(rng)?));
                }
                _ => {
                    let cur = node.payload().unwrap_or("=").to_owned();
                    let others: Vec<&str> = ["+=", "-=", "*="].into_iter().filter(|o| *o != cur).collect();
                    node.label.payload = Some((*others.choose(rng)?).to_owned());
                }
            }
        }
        MutationKind::ConstantChange => {
            let paths = find_paths(ast, &|n, _| {
                matches!(n.kind(), Kind::IntLit | Kind::StrLit | Kind::BoolLit)
            });
            let path = paths.choose(rng)?;
            let node = at_mut(&mut root, path);
            let old = node.payload().unwrap_or_default().to_owned();
            let new = match node.kind() {
                Kind::IntLit => {
                    let v: i64 = old.parse().ok()?;
                    if v > 0 && rng.gen() { v - 1 } else { v + 1 }.to_string()
                }
                Kind::BoolLit => if old == "true" { "false" } else { "true" }.to_owned(),
                _ => match old.as_str() {
                    "X" => "O".to_owned(),
                    "O" => "X".to_owned(),
                    "" => " ".to_owned(),
                    s => s[..s.len() - s.chars().last().map_or(0, char::len_utf8)].to_owned(),
                },
            };
            node.label.payload = Some(new);
        }
        MutationKind::StatementDeletion => {
            let candidates: Vec<(Path, usize)> = lists(ast)
                .into_iter()
                .flat_map(|(p, idx)| idx.into_iter().map(move |i| (p.clone(), i)))
                .collect();
            let (path, i) = candidates.choose(rng)?;
            at_mut(&mut root, path).children.remove(*i);
        }
        MutationKind::StatementInsertion => {
            let all = lists(ast);
            let donors: Vec<Node> = all
                .iter()
                .flat_map(|(p, idx)| {
                    let list = p.iter().fold(&ast.root, |n, &i| &n.children[i]);
                    idx.iter().map(move |&i| list.children[i].clone())
                })
                .collect();
            let stmt = donors.choose(rng)?.clone();
            let (path, _) = all.choose(rng)?;
            let list = at_mut(&mut root, path);
            let at = rng.gen_range(0..=list.children.len());
            list.children.insert(at, stmt);
        }
        MutationKind::StatementReorder => {
            let candidates: Vec<(Path, usize)> = lists(ast)
                .into_iter()
                .flat_map(|(p, idx)| {
                    idx.windows(2)
                        .filter(|w| w[1] == w[0] + 1)
                        .map(|w| (p.clone(), w[0]))
                        .collect::<Vec<_>>()
                })
                .collect();
            let (path, i) = candidates.choose(rng)?;
            let list = at_mut(&mut root, path);
            if list.children[*i].same_tree(&list.children[i + 1]) {
                return None;
            }
            list.children.swap(*i, i + 1);
        }
        MutationKind::PredicateFlip => {
            let paths = find_paths(ast, &|n, _| matches!(n.kind(), Kind::If | Kind::While | Kind::For));
            let path = paths.choose(rng)?;
            let owner = at_mut(&mut root, path);
            let slot = usize::from(owner.kind() == Kind::For);
            let cond = &mut owner.children[slot];
            if cond.kind() == Kind::Epsilon {
                return None;
            }
            match cond.kind() {
                Kind::BinOp(op) if negated(op).is_some() => {
                    cond.label = Label::new(Kind::BinOp(negated(op)?));
                }
                Kind::UnOp(UnOp::Not) => *cond = cond.children[0].clone(),
                _ => *cond = Node::new(Label::new(Kind::UnOp(UnOp::Not)), vec![cond.clone()]),
            }
        }
        MutationKind::VariableMisuse => {
            let names = ast.vars();
            let paths = find_paths(ast, &|n, parent| {
                n.kind() == Kind::Var && !parent.is_some_and(|p| matches!(p.kind(), Kind::Decl | Kind::Param))
            });
            let path = paths.choose(rng)?;
            let node = at_mut(&mut root, path);
            let cur = node.payload().unwrap_or_default().to_owned();
            let others: Vec<&String> = names.iter().filter(|v| **v != cur).collect();
            node.label.payload = Some((*others.choose(rng)?).clone());
        }
    }
    Some(root)
}

/// Applies one mutation of `kind`, or `None` when the program offers no site
/// for it or the result would not survive printing and re-parsing.
pub fn mutate_with(ast: &Ast, kind: MutationKind, rng: &mut impl Rng) -> Option<Ast> {
    let mutant = Ast::new(apply_once(ast, kind, rng)?);
    if mutant.same_tree(ast) {
        return None;
    }
    let reparsed = parse(&pretty_print(&mutant)).ok()?;
    reparsed.same_tree(&mutant).then_some(reparsed)
}

/// Applies one mutation of a random kind, falling back to other kinds when
/// the first choice has no site.
pub fn mutate(ast: &Ast, rng: &mut impl Rng) -> Option<(Ast, MutationKind)> {
    let mut kinds = MutationKind::ALL;
    kinds.shuffle(rng);
    kinds.into_iter().find_map(|k| mutate_with(ast, k, rng).map(|m| (m, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::cf_signature;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SRC: &str = "func f(n: int) {
    var s = 0;
    var t = 1;
    for (i = 0; i < n; i += 1) {
        if (i % 2 == 0) {
            s = s + i;
        } else {
            t = t * 2;
        }
    }
    print(s);
    print(t);
}";

    #[test]
    fn every_kind_preserves_control_flow() {
        let ast = parse(SRC).unwrap();
        let cf = cf_signature(&ast);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in MutationKind::ALL {
            let mut hit = 0;
            for _ in 0..30 {
                if let Some(m) = mutate_with(&ast, kind, &mut rng) {
                    hit += 1;
                    assert_eq!(cf_signature(&m), cf, "{kind}");
                    assert!(!m.same_tree(&ast));
                }
            }
            assert!(hit > 0, "{kind} never applied");
        }
    }

    #[test]
    fn reorder_swaps_neighbours() {
        let ast = parse("func f() { print(1); print(2); }").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let m = mutate_with(&ast, MutationKind::StatementReorder, &mut rng).unwrap();
        assert_eq!(pretty_print(&m), "func f() {\n    print(2);\n    print(1);\n}\n");
    }

    #[test]
    fn predicate_flip_negates_comparisons() {
        let ast = parse("func f(n: int) { while (n < 3) { n += 1; } }").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let m = mutate_with(&ast, MutationKind::PredicateFlip, &mut rng).unwrap();
        assert!(pretty_print(&m).contains("while (n >= 3)"));
    }
}
