use std::collections::BTreeMap;

use crate::embed::{pacv_forest, Pacv};
use crate::lang::{binarize, Ast, Kind, Node};

/// The non-control statements of a program in program order, with the
/// control headers (branch and loop conditions, `for` init and update)
/// standing in for their constructs. Omitted `for` parts are skipped.
pub fn statement_units(p: &Ast) -> Vec<&Node> {
    let mut out = Vec::new();
    units_in(p.body(), &mut out);
    out
}

fn units_in<'a>(container: &'a Node, out: &mut Vec<&'a Node>) {
    for s in &container.children {
        unit(s, out);
    }
}

fn unit<'a>(s: &'a Node, out: &mut Vec<&'a Node>) {
    match s.kind() {
        Kind::If => {
            out.push(&s.children[0]);
            units_in(&s.children[1], out);
            if let Some(e) = s.children.get(2) {
                match e.children[0].kind() {
                    Kind::If => unit(&e.children[0], out),
                    _ => units_in(&e.children[0], out),
                }
            }
        }
        Kind::While => {
            out.push(&s.children[0]);
            units_in(&s.children[1], out);
        }
        Kind::For => {
            out.extend(s.children[..3].iter().filter(|c| c.kind() != Kind::Epsilon));
            units_in(&s.children[3], out);
        }
        _ => out.push(s),
    }
}

/// The statements featuring one variable.
#[derive(Debug, Clone)]
pub struct UsageSet<'a> {
    pub variable: String,
    pub statements: Vec<&'a Node>,
}

/// A bare `var x;` declares but does not use `x`.
fn features(stmt: &Node, var: &str) -> bool {
    if stmt.kind() == Kind::Decl && stmt.children.len() == 1 {
        return false;
    }
    stmt.mentions(var)
}

/// Usage sets for every variable of `p`, parameters included.
pub fn usage_sets(p: &Ast) -> BTreeMap<String, UsageSet<'_>> {
    let units = statement_units(p);
    p.vars()
        .into_iter()
        .map(|v| {
            let statements = units.iter().copied().filter(|s| features(s, &v)).collect();
            (
                v.clone(),
                UsageSet {
                    variable: v,
                    statements,
                },
            )
        })
        .collect()
}

/// One Pacv for the forest of a usage set's statement trees.
pub fn usage_vector(u: &UsageSet<'_>, q: u32) -> Pacv {
    let trees: Vec<_> = u.statements.iter().map(|s| binarize(s)).collect();
    pacv_forest(&trees, q, Kind::ALPHABET_SIZE)
}
