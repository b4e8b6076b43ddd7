//! Synthetic exercise data: a generated corpus of correct solutions and
//! mutation-based benchmarks of incorrect ones.

pub mod benchmark;
pub mod chessboard;
pub mod mutate;

pub use benchmark::{gen_benchmark, BenchCase, Benchmark, BenchmarkError};
pub use mutate::{mutate, mutate_with, MutationKind};
