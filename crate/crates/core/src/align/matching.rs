use crate::embed::tree_edit_distance;
use crate::lang::{Node, NodeId};

use super::blocks::{BasicBlock, BlockKind};

/// Where a discrepancy sits in the incorrect program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    /// Statement list `container`; `index` is the position of `S_e`, or for
    /// an insertion the position before which `S_c` goes.
    Stmt { container: NodeId, index: usize },
    /// Header item `item` of control statement `owner`.
    Header { owner: NodeId, item: usize },
}

/// An aligned pair `(S_e, S_c)`; at least one side is present.
#[derive(Debug, Clone)]
pub struct Discrepancy {
    pub e: Option<Node>,
    pub c: Option<Node>,
    pub site: Site,
}

/// Aligned index pairs; `None` marks a gap.
pub type Alignment = Vec<(Option<usize>, Option<usize>)>;

/// Order-preserving alignment of two statement sequences minimizing total
/// TED of matched pairs plus the sizes of unmatched statements; equal costs
/// prefer fewer non-identical steps. Returns the optimal cost and the
/// aligned index pairs.
pub fn align_sequences(e: &[&Node], c: &[&Node]) -> (usize, Alignment) {
    let (n, m) = (e.len(), c.len());
    let ted: Vec<Vec<usize>> = e
        .iter()
        .map(|a| c.iter().map(|b| tree_edit_distance(a, b)).collect())
        .collect();
    // (cost, discrepancy count) per prefix pair.
    let mut d = vec![vec![(0usize, 0usize); m + 1]; n + 1];
    let step = |(cost, k): (usize, usize), add: usize| (cost + add, k + usize::from(add > 0));
    for i in 1..=n {
        d[i][0] = step(d[i - 1][0], e[i - 1].size());
    }
    for j in 1..=m {
        d[0][j] = step(d[0][j - 1], c[j - 1].size());
    }
    for i in 1..=n {
        for j in 1..=m {
            d[i][j] = step(d[i - 1][j - 1], ted[i - 1][j - 1])
                .min(step(d[i - 1][j], e[i - 1].size()))
                .min(step(d[i][j - 1], c[j - 1].size()));
        }
    }
    let mut path = Vec::new();
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && d[i][j] == step(d[i - 1][j - 1], ted[i - 1][j - 1]) {
            path.push((Some(i - 1), Some(j - 1)));
            i -= 1;
            j -= 1;
        } else if i > 0 && d[i][j] == step(d[i - 1][j], e[i - 1].size()) {
            path.push((Some(i - 1), None));
            i -= 1;
        } else {
            path.push((None, Some(j - 1)));
            j -= 1;
        }
    }
    path.reverse();
    (d[n][m].0, path)
}

/// Discrepancies between two aligned blocks. Header items pair by position;
/// runs are aligned by [`align_sequences`]. Identical pairs are dropped.
pub fn match_statements(be: &BasicBlock<'_>, bc: &BasicBlock<'_>) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    if be.kind == BlockKind::Header {
        for (item, (e, c)) in be.stmts.iter().zip(&bc.stmts).enumerate() {
            if !e.same_tree(c) {
                out.push(Discrepancy {
                    e: Some((*e).clone()),
                    c: Some((*c).clone()),
                    site: Site::Header {
                        owner: be.owner.id,
                        item,
                    },
                });
            }
        }
        return out;
    }
    let (_, path) = align_sequences(&be.stmts, &bc.stmts);
    let mut consumed = 0;
    for (ei, ci) in path {
        let index = be.start + ei.unwrap_or(consumed);
        let site = Site::Stmt {
            container: be.owner.id,
            index,
        };
        match (ei, ci) {
            (Some(x), Some(y)) => {
                consumed = x + 1;
                if !be.stmts[x].same_tree(bc.stmts[y]) {
                    out.push(Discrepancy {
                        e: Some(be.stmts[x].clone()),
                        c: Some(bc.stmts[y].clone()),
                        site,
                    });
                }
            }
            (Some(x), None) => {
                consumed = x + 1;
                out.push(Discrepancy {
                    e: Some(be.stmts[x].clone()),
                    c: None,
                    site,
                });
            }
            (None, Some(y)) => out.push(Discrepancy {
                e: None,
                c: Some(bc.stmts[y].clone()),
                site,
            }),
            (None, None) => unreachable!("alignment steps consume a statement"),
        }
    }
    out
}
