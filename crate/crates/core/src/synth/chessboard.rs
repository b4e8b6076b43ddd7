//! A chessboard exercise: `chessboard(n)` prints `n` rows of `n` cells,
//! `X` where row + column is even and `O` elsewhere.
//!
//! Correct solutions come in several control-flow shapes, each with many
//! surface variants (names, increments, loop bounds, parity tests, branch
//! order, string building).

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::interp::{OutputMatch, TestCase, TestSuite, Value};
use crate::lang::{parse, pretty_print};
use crate::search::Solution;

pub const ENTRY: &str = "chessboard";
pub const SUITE_BUDGET: u64 = 10_000;

/// Expected output for a board of size `n`.
pub fn board(n: i64) -> String {
    let mut out = String::new();
    for r in 0..n {
        for c in 0..n {
            out.push(if (r + c) % 2 == 0 { 'X' } else { 'O' });
        }
        out.push('\n');
    }
    out
}

pub fn suite() -> TestSuite {
    TestSuite {
        entry: ENTRY.into(),
        tests: (0..=5)
            .map(|n| TestCase {
                name: format!("n{n}"),
                args: vec![Value::Int(n)],
                expected_output: board(n),
                expected_return: None,
            })
            .collect(),
        budget: Some(SUITE_BUDGET),
        output_match: OutputMatch::TrimTrailing,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// for / for / if-else, building each row string.
    NestedFor,
    /// for / for / if, with a default cell overwritten on even squares.
    DefaultCell,
    /// while / while / if-else.
    NestedWhile,
    /// while / for with a flipping boolean.
    Flipping,
    /// Two precomputed rows, then one loop choosing between them.
    Precomputed,
    /// One loop over all n·n cells.
    SingleLoop,
}

impl Shape {
    pub const ALL: [Shape; 6] = [
        Shape::NestedFor,
        Shape::DefaultCell,
        Shape::NestedWhile,
        Shape::Flipping,
        Shape::Precomputed,
        Shape::SingleLoop,
    ];
}

/// Surface choices shared by all shapes.
struct Style {
    n: &'static str,
    i: &'static str,
    j: &'static str,
    row: &'static str,
    flag: &'static str,
    plus_eq: bool,
    bound: u8,
    parity: u8,
    append_eq: bool,
    var_init: bool,
    var_loop: bool,
}

const N_NAMES: [&str; 3] = ["n", "size", "m"];
const I_NAMES: [&str; 5] = ["i", "r", "row_i", "y", "a"];
const J_NAMES: [&str; 5] = ["j", "c", "col", "x", "b"];
const ROW_NAMES: [&str; 5] = ["row", "line", "s", "acc", "out"];
const FLAG_NAMES: [&str; 4] = ["ch", "black", "blackWhite", "isX"];

impl Style {
    fn random(rng: &mut impl Rng) -> Style {
        Style {
            n: N_NAMES.choose(rng).unwrap(),
            i: I_NAMES.choose(rng).unwrap(),
            j: J_NAMES.choose(rng).unwrap(),
            row: ROW_NAMES.choose(rng).unwrap(),
            flag: FLAG_NAMES.choose(rng).unwrap(),
            plus_eq: rng.gen(),
            bound: rng.gen_range(0..3),
            parity: rng.gen_range(0..4),
            append_eq: rng.gen(),
            var_init: rng.gen(),
            var_loop: rng.gen(),
        }
    }

    fn inc(&self, v: &str) -> String {
        if self.plus_eq {
            format!("{v} += 1")
        } else {
            format!("{v} = {v} + 1")
        }
    }

    fn below(&self, v: &str, bound: &str) -> String {
        match self.bound {
            0 => format!("{v} < {bound}"),
            1 => format!("{v} <= {bound} - 1"),
            _ => format!("{bound} > {v}"),
        }
    }

    fn for_header(&self, v: &str, bound: &str) -> String {
        let init = if self.var_loop {
            format!("var {v} = 0")
        } else {
            format!("{v} = 0")
        };
        format!("for ({init}; {}; {})", self.below(v, bound), self.inc(v))
    }

    fn init_row(&self, name: &str) -> String {
        if self.var_init {
            format!("var {name} = \"\";")
        } else {
            format!("{name} = \"\";")
        }
    }

    fn append(&self, name: &str, cell: &str) -> String {
        if self.append_eq {
            format!("{name} += \"{cell}\";")
        } else {
            format!("{name} = {name} + \"{cell}\";")
        }
    }

    /// A parity test on `a + b` and the cells for its true and false branches.
    fn parity(&self, a: &str, b: &str) -> (String, &'static str, &'static str) {
        match self.parity {
            0 => (format!("({a} + {b}) % 2 == 0"), "X", "O"),
            1 => (format!("({a} + {b}) % 2 != 0"), "O", "X"),
            2 => (format!("({a} + {b}) % 2 == 1"), "O", "X"),
            _ => (format!("{a} % 2 == {b} % 2"), "X", "O"),
        }
    }

    /// An if-else appending one cell to `row`.
    fn cell_if_else(&self, a: &str, b: &str) -> String {
        let (pred, yes, no) = self.parity(a, b);
        format!(
            "if ({pred}) {{ {} }} else {{ {} }}",
            self.append(self.row, yes),
            self.append(self.row, no)
        )
    }
}

pub fn render(shape: Shape, rng: &mut impl Rng) -> String {
    let s = Style::random(rng);
    let (n, i, j, row) = (s.n, s.i, s.j, s.row);
    let body = match shape {
        Shape::NestedFor => format!(
            "{} {{ {} {} {{ {} }} print({row}); }}",
            s.for_header(i, n),
            s.init_row(row),
            s.for_header(j, n),
            s.cell_if_else(i, j)
        ),
        Shape::DefaultCell => {
            let (pred, yes, _) = s.parity(i, j);
            let other = if yes == "X" { "O" } else { "X" };
            format!(
                "{} {{ {} {} {{ var cell = \"{other}\"; if ({pred}) {{ cell = \"{yes}\"; }} {row} = {row} + cell; }} print({row}); }}",
                s.for_header(i, n),
                s.init_row(row),
                s.for_header(j, n),
            )
        }
        Shape::NestedWhile => format!(
            "var {i} = 0; while ({}) {{ {} var {j} = 0; while ({}) {{ {} {}; }} print({row}); {}; }}",
            s.below(i, n),
            s.init_row(row),
            s.below(j, n),
            s.cell_if_else(i, j),
            s.inc(j),
            s.inc(i)
        ),
        Shape::Flipping => {
            let flag = s.flag;
            let start = match s.parity {
                0 | 3 => format!("{i} % 2 == 0"),
                _ => format!("{i} % 2 != 1"),
            };
            format!(
                "var {i} = 0; while ({}) {{ {} var {flag} = {start}; {} {{ if ({flag}) {{ {} }} else {{ {} }} {flag} = !{flag}; }} print({row}); {}; }}",
                s.below(i, n),
                s.init_row(row),
                s.for_header(j, n),
                s.append(row, "X"),
                s.append(row, "O"),
                s.inc(i)
            )
        }
        Shape::Precomputed => {
            let (even, odd) = ("even", "odd");
            let (pred, yes, no) = s.parity(j, "0");
            let (rpred, ryes, _) = s.parity(i, "0");
            let (first, second) = if ryes == "X" { (even, odd) } else { (odd, even) };
            format!(
                "var {even} = \"\"; var {odd} = \"\"; {} {{ if ({pred}) {{ {even} = {even} + \"{yes}\"; {odd} = {odd} + \"{no}\"; }} else {{ {even} = {even} + \"{no}\"; {odd} = {odd} + \"{yes}\"; }} }} {} {{ if ({rpred}) {{ print({first}); }} else {{ print({second}); }} }}",
                s.for_header(j, n),
                s.for_header(i, n),
            )
        }
        Shape::SingleLoop => {
            let k = "k";
            format!(
                "{} {} {{ var {i} = {k} / {n}; var {j} = {k} % {n}; {} if ({j} == {n} - 1) {{ print({row}); {row} = \"\"; }} }}",
                s.init_row(row),
                s.for_header(k, &format!("{n} * {n}")),
                s.cell_if_else(i, j)
            )
        }
    };
    let src = format!("func {ENTRY}({n}: int) {{ {body} }}");
    pretty_print(&parse(&src).expect("generated source parses"))
}

/// `count` distinct correct solutions cycling through `shapes`, deterministic
/// under `seed`. Program ids are `{prefix}{index:04}`.
pub fn corpus(count: usize, shapes: &[Shape], seed: u64, prefix: &str) -> Vec<Solution> {
    corpus_avoiding(count, shapes, seed, prefix, &BTreeSet::new())
}

/// Like [`corpus`], skipping any source in `exclude`.
pub fn corpus_avoiding(
    count: usize,
    shapes: &[Shape],
    seed: u64,
    prefix: &str,
    exclude: &BTreeSet<String>,
) -> Vec<Solution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = exclude.clone();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < count * 100 {
        let shape = shapes[attempts % shapes.len()];
        attempts += 1;
        let src = render(shape, &mut rng);
        if seen.insert(src.clone()) {
            out.push(Solution::new(format!("{prefix}{:04}", out.len()), src));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::passes;
    use crate::lang::cf_signature;

    #[test]
    fn board_layout() {
        assert_eq!(board(0), "");
        assert_eq!(board(3), "XOX\nOXO\nXOX\n");
    }

    #[test]
    fn every_shape_passes_in_many_styles() {
        let suite = suite();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for shape in Shape::ALL {
            for _ in 0..40 {
                let src = render(shape, &mut rng);
                let ast = parse(&src).unwrap();
                assert!(passes(&ast, &suite), "{shape:?}\n{src}");
            }
        }
    }

    #[test]
    fn shapes_have_distinct_control_flow() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sigs: BTreeSet<String> = Shape::ALL
            .iter()
            .map(|&s| cf_signature(&parse(&render(s, &mut rng)).unwrap()).to_string())
            .collect();
        assert_eq!(sigs.len(), Shape::ALL.len());
    }

    #[test]
    fn corpus_is_deterministic_and_distinct() {
        let a = corpus(60, &Shape::ALL, 7, "p");
        let b = corpus(60, &Shape::ALL, 7, "p");
        assert_eq!(a, b);
        let distinct: BTreeSet<&String> = a.iter().map(|s| &s.source).collect();
        assert_eq!(distinct.len(), 60);
    }
}
