use crate::interp::{coverage, TestSuite};
use crate::lang::Ast;

use super::fix::Fix;

/// Splits fixes into those whose location some test reaches and those it
/// never does. Deletions and modifications need their statement reached;
/// insertions need their enclosing statement list entered.
pub fn reachability_filter(fixes: &[Fix], pe: &Ast, suite: &TestSuite) -> (Vec<Fix>, Vec<Fix>) {
    let cov = coverage(pe, suite);
    fixes.iter().cloned().partition(|f| cov.contains(&f.anchor.site_node()))
}
