//! Random program generators and brute-force oracles shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use minifix_core::align::{alpha_conversion, discrepancies};
use minifix_core::interp::passes;
use minifix_core::lang::{cf_signature, parse, BinOp, Kind, Label, Node, UnOp};
use minifix_core::repair::{apply_fixes, gen_fixes, group_fixes, Fix};
use minifix_core::synth::chessboard::{self, Shape};
use minifix_core::synth::mutate;
use minifix_core::{Ast, TestSuite};

const VARS: [&str; 8] = ["a", "b", "c", "d", "e", "x", "y", "z"];
const OPS: [&str; 13] = ["||", "&&", "==", "!=", "<", "<=", ">", ">=", "+", "-", "*", "/", "%"];

struct Gen<'r, R: Rng> {
    rng: &'r mut R,
    vars: Vec<&'static str>,
}

impl<R: Rng> Gen<'_, R> {
    fn var(&mut self) -> &'static str {
        self.vars.choose(self.rng).copied().unwrap_or("a")
    }

    fn expr(&mut self, depth: u32) -> String {
        let leaf = depth == 0 || self.rng.gen_bool(0.4);
        if leaf {
            return match self.rng.gen_range(0..4) {
                0 | 1 => self.var().to_owned(),
                2 => self.rng.gen_range(0..20).to_string(),
                _ => ["true", "false", "\"s\"", "\"\""].choose(self.rng).unwrap().to_string(),
            };
        }
        match self.rng.gen_range(0..6) {
            0..=2 => {
                let op = OPS.choose(self.rng).unwrap();
                format!("({} {op} {})", self.expr(depth - 1), self.expr(depth - 1))
            }
            3 => format!("{}({})", ["!", "-"].choose(self.rng).unwrap(), self.expr(depth - 1)),
            4 => format!("g({})", self.expr(depth - 1)),
            _ => format!("{}[{}]", self.var(), self.expr(depth - 1)),
        }
    }

    fn simple(&mut self) -> String {
        match self.rng.gen_range(0..5) {
            0 => format!("var {} = {}", self.var(), self.expr(2)),
            1 => format!("{} = {}", self.var(), self.expr(2)),
            2 => format!("{} += {}", self.var(), self.expr(1)),
            3 => format!("print({})", self.expr(2)),
            _ => format!("h({})", self.expr(1)),
        }
    }

    fn block(&mut self, depth: u32) -> String {
        let n = self.rng.gen_range(0..=3);
        let body: Vec<String> = (0..n).map(|_| self.stmt(depth)).collect();
        format!("{{ {} }}", body.join(" "))
    }

    fn stmt(&mut self, depth: u32) -> String {
        let control = depth > 0 && self.rng.gen_bool(0.3);
        if !control {
            return format!("{};", self.simple());
        }
        match self.rng.gen_range(0..4) {
            0 => format!("if ({}) {}", self.expr(2), self.block(depth - 1)),
            1 => {
                let els = if self.rng.gen_bool(0.5) {
                    format!("if ({}) {}", self.expr(1), self.block(depth - 1))
                } else {
                    self.block(depth - 1)
                };
                format!("if ({}) {} else {els}", self.expr(2), self.block(depth - 1))
            }
            2 => format!("while ({}) {}", self.expr(2), self.block(depth - 1)),
            _ => {
                let init = match self.rng.gen_range(0..3) {
                    0 => String::new(),
                    1 => format!("var {} = 0", self.var()),
                    _ => format!("{} = 0", self.var()),
                };
                let cond = if self.rng.gen_bool(0.8) {
                    self.expr(1)
                } else {
                    String::new()
                };
                let update = if self.rng.gen_bool(0.8) {
                    format!("{} += 1", self.var())
                } else {
                    String::new()
                };
                format!("for ({init}; {cond}; {update}) {}", self.block(depth - 1))
            }
        }
    }
}

/// Source text of a random, syntactically valid MiniImp program.
pub fn random_source(rng: &mut impl Rng) -> String {
    let mut pool = VARS.to_vec();
    pool.shuffle(rng);
    let nvars = rng.gen_range(1..=6);
    let mut g = Gen {
        rng,
        vars: pool[..nvars].to_vec(),
    };
    let stmts = g.rng.gen_range(1..=5);
    let body: Vec<String> = (0..stmts).map(|_| g.stmt(3)).collect();
    if g.rng.gen_bool(0.7) {
        let nparams = g.rng.gen_range(0..=2.min(nvars));
        let params: Vec<String> = g.vars[..nparams].iter().map(|v| format!("{v}: int")).collect();
        format!("func f({}) {{ {} }}", params.join(", "), body.join(" "))
    } else {
        body.join(" ")
    }
}

pub fn random_program(seed: u64) -> Ast {
    let src = random_source(&mut ChaCha8Rng::seed_from_u64(seed));
    parse(&src).unwrap_or_else(|e| panic!("generator produced invalid source ({e}):\n{src}"))
}

/// Renames every variable of `p` by `rename`.
pub fn renamed(p: &Ast, rename: &dyn Fn(&str) -> Option<String>) -> Ast {
    let mut out = p.clone();
    out.rename_vars(rename);
    out
}

const TREE_LABELS: [(Kind, Option<&str>); 5] = [
    (Kind::Var, Some("a")),
    (Kind::Var, Some("b")),
    (Kind::Block, None),
    (Kind::BinOp(BinOp::Add), None),
    (Kind::UnOp(UnOp::Not), None),
];

/// A random ordered tree with `size` nodes over a five-label alphabet.
pub fn random_tree(rng: &mut impl Rng, size: usize) -> Node {
    // parent[i] < i: node i is appended as the last child of parent[i]; in a
    // pre-order build the parent must be on the current rightmost path.
    let labels: Vec<Label> = (0..size)
        .map(|_| {
            let (kind, payload) = TREE_LABELS[rng.gen_range(0..TREE_LABELS.len())];
            Label {
                kind,
                payload: payload.map(str::to_owned),
            }
        })
        .collect();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); size];
    let mut spine = vec![0usize];
    for i in 1..size {
        let keep = rng.gen_range(1..=spine.len());
        spine.truncate(keep);
        let parent = *spine.last().unwrap();
        children[parent].push(i);
        spine.push(i);
    }
    fn build(i: usize, labels: &[Label], children: &[Vec<usize>]) -> Node {
        Node::new(
            labels[i].clone(),
            children[i].iter().map(|&c| build(c, labels, children)).collect(),
        )
    }
    build(0, &labels, &children)
}

struct Flat {
    labels: Vec<Label>,
    /// ancestor[i][j]: i is a proper ancestor of j.
    ancestor: Vec<Vec<bool>>,
}

fn flatten(root: &Node) -> Flat {
    fn walk(n: &Node, path: &mut Vec<usize>, labels: &mut Vec<Label>, anc: &mut Vec<Vec<usize>>) {
        let me = labels.len();
        labels.push(n.label.clone());
        anc.push(path.clone());
        path.push(me);
        for c in &n.children {
            walk(c, path, labels, anc);
        }
        path.pop();
    }
    let mut labels = Vec::new();
    let mut anc = Vec::new();
    walk(root, &mut Vec::new(), &mut labels, &mut anc);
    let n = labels.len();
    let mut ancestor = vec![vec![false; n]; n];
    for (j, list) in anc.iter().enumerate() {
        for &i in list {
            ancestor[i][j] = true;
        }
    }
    Flat { labels, ancestor }
}

/// Tree edit distance by exhaustive search over all Tai mappings between
/// the two trees' pre-order node lists. Unit costs; relabel costs one when
/// kind or payload differ.
pub fn exhaustive_ted(a: &Node, b: &Node) -> usize {
    let fa = flatten(a);
    let fb = flatten(b);
    let mut used = vec![false; fb.labels.len()];
    let mut pairs = Vec::new();
    let mut best = fa.labels.len() + fb.labels.len();
    fn search(i: usize, fa: &Flat, fb: &Flat, used: &mut [bool], pairs: &mut Vec<(usize, usize)>, best: &mut usize) {
        if i == fa.labels.len() {
            let relabel = pairs.iter().filter(|&&(x, y)| fa.labels[x] != fb.labels[y]).count();
            let cost = relabel + (fa.labels.len() - pairs.len()) + (fb.labels.len() - pairs.len());
            *best = (*best).min(cost);
            return;
        }
        search(i + 1, fa, fb, used, pairs, best);
        for j in 0..fb.labels.len() {
            if used[j] {
                continue;
            }
            let ok = pairs
                .iter()
                .all(|&(x, y)| y < j && fa.ancestor[x][i] == fb.ancestor[y][j]);
            if ok {
                used[j] = true;
                pairs.push((i, j));
                search(i + 1, fa, fb, used, pairs, best);
                pairs.pop();
                used[j] = false;
            }
        }
    }
    search(0, &fa, &fb, &mut used, &mut pairs, &mut best);
    best
}

/// Minimum total cost over all injections of rows into columns.
pub fn brute_force_assignment(cost: &[Vec<f64>]) -> f64 {
    fn go(r: usize, cost: &[Vec<f64>], used: &mut [bool]) -> f64 {
        if r == cost.len() {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                best = best.min(cost[r][c] + go(r + 1, cost, used));
                used[c] = false;
            }
        }
        best
    }
    let cols = cost.first().map_or(0, Vec::len);
    go(0, cost, &mut vec![false; cols])
}

/// Every non-empty subset of `0..n` as a bit mask, smallest first.
pub fn subsets_by_size(n: usize) -> Vec<u32> {
    let mut all: Vec<u32> = (1..(1u32 << n)).collect();
    all.sort_by_key(|m| (m.count_ones(), *m));
    all
}

/// Occurrence heights per pattern, computed straight from the n-ary tree:
/// in the left-child/right-sibling view a node's left link is its first
/// child and its right link its next sibling. Patterns are keyed by their
/// heap-order label indices.
pub fn oracle_pacv(root: &Node, q: u32) -> BTreeMap<Vec<u16>, Vec<u32>> {
    // A binary position is a sibling list plus an index into it.
    type Pos<'a> = Option<(&'a [Node], usize)>;
    fn left(p: Pos<'_>) -> Pos<'_> {
        p.and_then(|(s, i)| (!s[i].children.is_empty()).then_some((s[i].children.as_slice(), 0)))
    }
    fn right(p: Pos<'_>) -> Pos<'_> {
        p.and_then(|(s, i)| (i + 1 < s.len()).then_some((s, i + 1)))
    }
    fn height(p: Pos<'_>) -> u32 {
        match p {
            None => 0,
            Some(_) => 1 + height(left(p)).max(height(right(p))),
        }
    }
    fn symbol(p: Pos<'_>) -> u16 {
        p.map_or(Kind::Epsilon.index(), |(s, i)| s[i].kind().index()) as u16
    }
    fn visit<'a>(p: Pos<'a>, q: u32, out: &mut BTreeMap<Vec<u16>, Vec<u32>>) {
        if p.is_none() {
            return;
        }
        let h = height(p);
        if h >= q {
            let mut level = vec![p];
            let mut labels = Vec::new();
            for _ in 0..q {
                labels.extend(level.iter().map(|&x| symbol(x)));
                level = level.iter().flat_map(|&x| [left(x), right(x)]).collect();
            }
            out.entry(labels).or_default().push(h);
        }
        visit(left(p), q, out);
        visit(right(p), q, out);
    }
    let mut out = BTreeMap::new();
    visit(Some((std::slice::from_ref(root), 0)), q, &mut out);
    for hs in out.values_mut() {
        hs.sort_unstable();
    }
    out
}

/// Per-pattern lists sorted descending, zero-padded to equal length, then
/// Euclidean distance over every entry.
pub fn oracle_pacv_distance(a: &BTreeMap<Vec<u16>, Vec<u32>>, b: &BTreeMap<Vec<u16>, Vec<u32>>) -> f64 {
    let keys: BTreeSet<&Vec<u16>> = a.keys().chain(b.keys()).collect();
    let mut sq = 0.0;
    for k in keys {
        let mut x = a.get(k).cloned().unwrap_or_default();
        let mut y = b.get(k).cloned().unwrap_or_default();
        x.sort_unstable_by(|p, q| q.cmp(p));
        y.sort_unstable_by(|p, q| q.cmp(p));
        let n = x.len().max(y.len());
        x.resize(n, 0);
        y.resize(n, 0);
        sq += x
            .iter()
            .zip(&y)
            .map(|(&p, &q)| (p as f64 - q as f64).powi(2))
            .sum::<f64>();
    }
    sq.sqrt()
}

/// Smallest number of fix groups whose union makes `pe` pass, trying all
/// `2^|groups| - 1` non-empty subsets in order of size.
pub fn exhaustive_min_cardinality(pe: &Ast, fixes: &[Fix], suite: &TestSuite) -> Option<usize> {
    if passes(pe, suite) {
        return Some(0);
    }
    let groups = group_fixes(fixes, pe);
    for mask in subsets_by_size(groups.len()) {
        let chosen = groups
            .iter()
            .enumerate()
            .filter(|(g, _)| mask & (1 << g) != 0)
            .flat_map(|(_, g)| g.members.iter().map(|&m| &fixes[m]));
        if apply_fixes(pe, chosen).is_ok_and(|p| passes(&p, suite)) {
            return Some(mask.count_ones() as usize);
        }
    }
    None
}

/// A broken chessboard program together with the fixes towards a correct
/// one, where the full rewrite passes and the fixes form `groups` groups.
pub struct MinimalityCase {
    pub pe: Ast,
    pub fixes: Vec<Fix>,
    pub groups: usize,
}

/// Cases whose group count lies in `groups`. Each mutates a corpus program
/// a few times and aligns it with a same-shaped, differently written one.
pub fn minimality_cases(count: usize, groups: RangeInclusive<usize>, seed: u64) -> Vec<MinimalityCase> {
    let suite = chessboard::suite();
    let corpus: Vec<Ast> = chessboard::corpus(120, &Shape::ALL, seed, "m")
        .into_iter()
        .map(|s| parse(&s.source).expect("corpus parses"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..count * 200 {
        if out.len() == count {
            break;
        }
        let origin = corpus.choose(&mut rng).unwrap();
        let mut pe = origin.clone();
        for _ in 0..rng.gen_range(1..=4) {
            if let Some((m, _)) = mutate(&pe, &mut rng) {
                pe = m;
            }
        }
        if passes(&pe, &suite) {
            continue;
        }
        let cf = cf_signature(&pe);
        let partners: Vec<&Ast> = corpus.iter().filter(|c| cf_signature(c) == cf).collect();
        let pc = partners.choose(&mut rng).unwrap();
        let (pac, _) = alpha_conversion(&pe, pc, 1);
        let Ok(d) = discrepancies(&pe, &pac) else { continue };
        let fixes = gen_fixes(&pe, &d);
        let n = group_fixes(&fixes, &pe).len();
        if !groups.contains(&n) {
            continue;
        }
        if apply_fixes(&pe, &fixes).is_ok_and(|p| passes(&p, &suite)) {
            out.push(MinimalityCase { pe, fixes, groups: n });
        }
    }
    out
}
