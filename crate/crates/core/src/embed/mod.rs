//! Program embeddings: atomic tree patterns, (position-aware) characteristic
//! vectors, their distances, and tree edit distance.

pub mod distance;
pub mod pattern;
pub mod ted;

use thiserror::Error;

use crate::lang::{binarize, Ast};

pub use distance::{cv_distance, pacv_distance, sorted_pacv_distance, Norm};
pub use pattern::{
    char_vector, decode_pattern, pacv, pacv_forest, pattern_count, CharacteristicVector, Pacv, SortedPacv,
};
pub use ted::{edit_script, tree_edit_distance, EditOp, EditScript};

pub const DEFAULT_Q: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("pattern space |L|={alphabet}, q={q} does not fit in 64 bits")]
    Overflow { alphabet: usize, q: u32 },
    #[error("invalid pattern parameters |L|={alphabet}, q={q}")]
    InvalidParameters { alphabet: usize, q: u32 },
    #[error("vectors differ in (q, |L|): {left:?} vs {right:?}")]
    DimensionMismatch { left: (u32, usize), right: (u32, usize) },
}

/// Pacv of a whole program.
pub fn program_pacv(p: &Ast, q: u32) -> Pacv {
    pacv(&binarize(&p.root), q)
}
