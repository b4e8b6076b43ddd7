//! Shared fixtures for the benchmarks.

use std::collections::BTreeSet;

use minifix_core::lang::parse;
use minifix_core::search::{build_index, CorpusIndex};
use minifix_core::synth::chessboard::{self, Shape};
use minifix_core::synth::gen_benchmark;
use minifix_core::{Ast, TestSuite};

pub struct Fixture {
    pub suite: TestSuite,
    pub index: CorpusIndex,
    /// Broken submissions, mutated from programs outside the index.
    pub submissions: Vec<Ast>,
}

/// An index of `size` chessboard solutions and `count` mutants of programs
/// not in it.
pub fn fixture(size: usize, count: usize, seed: u64) -> Fixture {
    let suite = chessboard::suite();
    let corpus = chessboard::corpus(size, &Shape::ALL, seed, "c");
    let seen: BTreeSet<String> = corpus.iter().map(|s| s.source.clone()).collect();
    let held = chessboard::corpus_avoiding(30, &Shape::ALL, seed + 1, "h", &seen);
    let bench = gen_benchmark(&held, &suite, count, 3, seed + 2);
    Fixture {
        index: build_index(corpus, &suite, 1).index,
        submissions: bench
            .cases
            .iter()
            .map(|c| parse(&c.source).expect("mutants parse"))
            .collect(),
        suite,
    }
}
