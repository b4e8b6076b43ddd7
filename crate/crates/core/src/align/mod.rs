//! Aligning a correct program with an incorrect one: variable renaming by
//! usage similarity, then basic-block and statement matching.

mod alpha;
pub mod assign;
mod blocks;
mod matching;
mod usage;

use thiserror::Error;

use crate::lang::{cf_signature, Ast};

pub use alpha::{alpha_conversion, alpha_conversion_with, AlphaConfig, VarMapping, VarPair};
pub use blocks::{basic_blocks, header_items, BasicBlock, BlockKind};
pub use matching::{align_sequences, match_statements, Alignment, Discrepancy, Site};
pub use usage::{statement_units, usage_sets, usage_vector, UsageSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignError {
    #[error("programs differ in control-flow structure")]
    CfMismatch,
}

/// Pairs the basic blocks of two programs with equal control flow.
pub fn align_blocks<'a>(pe: &'a Ast, pac: &'a Ast) -> Result<Vec<(BasicBlock<'a>, BasicBlock<'a>)>, AlignError> {
    if cf_signature(pe) != cf_signature(pac) {
        return Err(AlignError::CfMismatch);
    }
    let be = basic_blocks(pe);
    let bc = basic_blocks(pac);
    debug_assert_eq!(be.len(), bc.len());
    Ok(be.into_iter().zip(bc).collect())
}

/// All discrepancies between `pe` and the renamed correct program.
pub fn discrepancies(pe: &Ast, pac: &Ast) -> Result<Vec<Discrepancy>, AlignError> {
    Ok(align_blocks(pe, pac)?
        .iter()
        .flat_map(|(e, c)| match_statements(e, c))
        .collect())
}
