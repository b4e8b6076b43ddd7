//! Corpus indexing and retrieval of the syntactically nearest correct programs.

mod index;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{
    cv_distance, program_pacv, sorted_pacv_distance, tree_edit_distance, CharacteristicVector, Norm, SortedPacv,
};
use crate::lang::{cf_signature, Ast, CfSignature};

pub use index::{build_index, BuildReport, CorpusEntry, CorpusIndex, RejectReason, Rejection, Solution};

pub const DEFAULT_K: usize = 5;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("no corpus program shares the submission's control flow")]
    EmptyCandidates,
    #[error("index i/o")]
    Io(#[from] std::io::Error),
    #[error("index record")]
    Json(#[from] serde_json::Error),
    #[error("index line {line}: {message}")]
    Corrupt { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Pacv,
    Cv,
    Ted,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Pacv, Mode::Cv, Mode::Ted];
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Pacv => "pacv",
            Mode::Cv => "cv",
            Mode::Ted => "ted",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pacv" => Ok(Mode::Pacv),
            "cv" => Ok(Mode::Cv),
            "ted" => Ok(Mode::Ted),
            other => Err(format!("unknown mode `{other}` (expected pacv, cv or ted)")),
        }
    }
}

/// Distance between a submission and a corpus program; infinite across
/// differing control flow.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum SyntacticDistance {
    Finite(f64),
    Infinite,
}

impl SyntacticDistance {
    pub fn is_finite(self) -> bool {
        matches!(self, SyntacticDistance::Finite(_))
    }

    pub fn value(self) -> f64 {
        match self {
            SyntacticDistance::Finite(d) => d,
            SyntacticDistance::Infinite => f64::INFINITY,
        }
    }
}

/// A submission prepared for repeated distance queries.
#[derive(Debug, Clone)]
pub struct Query<'a> {
    pub ast: &'a Ast,
    pub cf: CfSignature,
    sorted: SortedPacv,
    cv: CharacteristicVector,
}

impl<'a> Query<'a> {
    pub fn new(ast: &'a Ast, q: u32) -> Self {
        let pacv = program_pacv(ast, q);
        Query {
            ast,
            cf: cf_signature(ast),
            sorted: pacv.sorted(),
            cv: pacv.to_char_vector(),
        }
    }
}

pub fn syntactic_distance(pe: &Query<'_>, pc: &CorpusEntry, mode: Mode) -> SyntacticDistance {
    if pe.cf != pc.cf {
        return SyntacticDistance::Infinite;
    }
    let d = match mode {
        Mode::Pacv => sorted_pacv_distance(&pe.sorted, &pc.sorted).expect("index and query share q"),
        Mode::Cv => cv_distance(&pe.cv, &pc.cv, Norm::L2).expect("index and query share q"),
        Mode::Ted => tree_edit_distance(&pe.ast.root, &pc.ast.root) as f64,
    };
    SyntacticDistance::Finite(d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    /// Position in the index (insertion order).
    pub entry: usize,
    pub distance: f64,
}

/// The `k` nearest entries sharing the submission's control flow, ascending
/// by distance with ties kept in insertion order.
pub fn top_k(pe: &Query<'_>, index: &CorpusIndex, k: usize, mode: Mode) -> Result<Vec<Hit>, SearchError> {
    let mut hits: Vec<Hit> = index
        .entries
        .par_iter()
        .enumerate()
        .filter(|(_, e)| e.cf == pe.cf)
        .map(|(i, e)| Hit {
            entry: i,
            distance: syntactic_distance(pe, e, mode).value(),
        })
        .collect();
    if hits.is_empty() {
        return Err(SearchError::EmptyCandidates);
    }
    hits.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.entry.cmp(&b.entry)));
    hits.truncate(k.max(1));
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{OutputMatch, TestCase, TestSuite};
    use crate::lang::parse;

    fn suite() -> TestSuite {
        TestSuite {
            entry: "f".into(),
            tests: vec![TestCase {
                name: "three".into(),
                args: vec![crate::Value::Int(3)],
                expected_output: "0\n1\n2\n".into(),
                expected_return: None,
            }],
            budget: None,
            output_match: OutputMatch::default(),
        }
    }

    const GOOD_FOR: &str = "func f(n: int) { for (i = 0; i < n; i += 1) { print(i); } }";
    const GOOD_WHILE: &str = "func f(n: int) { var i = 0; while (i < n) { print(i); i += 1; } }";
    const GOOD_FOR2: &str = "func f(n: int) { for (k = 0; k <= n - 1; k = k + 1) { print(k); } }";
    const BAD: &str = "func f(n: int) { for (i = 1; i < n; i += 1) { print(i); } }";

    fn index() -> BuildReport {
        build_index(
            vec![
                Solution::new("a", GOOD_FOR),
                Solution::new("b", GOOD_WHILE),
                Solution::new("c", GOOD_FOR2),
                Solution::new("d", BAD),
                Solution::new("e", "func f(n: int) {"),
            ],
            &suite(),
            1,
        )
    }

    #[test]
    fn rejects_failing_and_unparsable() {
        let r = index();
        assert_eq!(r.index.len(), 3);
        assert_eq!(r.rejected.len(), 2);
        assert!(matches!(r.rejected[0].reason, RejectReason::Tests(_)));
        assert!(matches!(r.rejected[1].reason, RejectReason::Parse(_)));
    }

    #[test]
    fn exact_copy_ranks_first_in_every_mode() {
        let idx = index().index;
        let ast = parse(GOOD_FOR2).unwrap();
        let q = Query::new(&ast, idx.q);
        for mode in Mode::ALL {
            let hits = top_k(&q, &idx, 5, mode).unwrap();
            assert_eq!(hits.len(), 2, "{mode}");
            assert_eq!(hits[0].entry, 2);
            assert_eq!(hits[0].distance, 0.0);
        }
    }

    #[test]
    fn control_flow_mismatch() {
        let idx = index().index;
        let ast = parse("func f(n: int) { if (n > 0) { print(n); } }").unwrap();
        let q = Query::new(&ast, idx.q);
        assert_eq!(
            syntactic_distance(&q, &idx.entries[0], Mode::Pacv),
            SyntacticDistance::Infinite
        );
        assert!(matches!(
            top_k(&q, &idx, 5, Mode::Pacv),
            Err(SearchError::EmptyCandidates)
        ));
    }

    #[test]
    fn one_constant_is_one_edit() {
        let idx = index().index;
        let ast = parse(BAD).unwrap();
        let q = Query::new(&ast, idx.q);
        assert_eq!(
            syntactic_distance(&q, &idx.entries[0], Mode::Ted),
            SyntacticDistance::Finite(1.0)
        );
    }

    #[test]
    fn ties_keep_insertion_order() {
        let r = build_index(
            vec![Solution::new("x", GOOD_FOR), Solution::new("y", GOOD_FOR)],
            &suite(),
            1,
        );
        let ast = parse(GOOD_FOR).unwrap();
        let hits = top_k(&Query::new(&ast, 1), &r.index, 1, Mode::Pacv).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].entry, 0);
    }

    #[test]
    fn sample_is_deterministic_and_ordered() {
        let idx = index().index;
        let a = idx.sample(0.67, 9);
        let b = idx.sample(0.67, 9);
        assert_eq!(a.len(), 2);
        let ids = |i: &CorpusIndex| i.entries.iter().map(|e| e.program_id.clone()).collect::<Vec<_>>();
        assert_eq!(ids(&a), ids(&b));
        let mut sorted = ids(&a);
        sorted.sort();
        assert_eq!(ids(&a), sorted);
    }
}
