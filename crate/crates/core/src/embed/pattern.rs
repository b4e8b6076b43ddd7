//! q-level atomic tree patterns over a binary tree.
//!
//! A q-level pattern is a complete binary template of height q. It is
//! identified by the labels at its `2^q - 1` positions taken in heap order
//! (root, left, right, left.left, ...), with ε at positions that have no node.
//! A pattern occurs at node `v` when the subtree under `v` is at least q
//! levels tall, so every occurrence really has height q; each such node
//! anchors exactly one occurrence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lang::BinaryTree;

use super::EmbedError;

/// `|L|^(2^q - 1)`, the number of distinct q-level patterns.
pub fn pattern_count(alphabet: usize, q: u32) -> Result<u64, EmbedError> {
    if alphabet == 0 || q == 0 {
        return Err(EmbedError::InvalidParameters { alphabet, q });
    }
    let positions = 1u32
        .checked_shl(q)
        .and_then(|p| p.checked_sub(1))
        .filter(|_| q < 32)
        .ok_or(EmbedError::Overflow { alphabet, q })?;
    (alphabet as u64)
        .checked_pow(positions)
        .ok_or(EmbedError::Overflow { alphabet, q })
}

/// Index of the q-level pattern anchored at `node`.
pub(crate) fn pattern_at(tree: &BinaryTree, node: u32, q: u32) -> u64 {
    let base = tree.alphabet as u64;
    let eps = tree.epsilon as u64;
    let mut level: Vec<Option<u32>> = vec![Some(node)];
    let mut index = 0u64;
    for depth in 0..q {
        for slot in &level {
            let sym = slot.map_or(eps, |n| tree.nodes[n as usize].symbol as u64);
            index = index * base + sym;
        }
        if depth + 1 < q {
            level = level
                .iter()
                .flat_map(|slot| match slot {
                    Some(n) => {
                        let bn = &tree.nodes[*n as usize];
                        [bn.left, bn.right]
                    }
                    None => [None, None],
                })
                .collect();
        }
    }
    index
}

/// Labels at each template position of pattern `index`, in heap order.
pub fn decode_pattern(index: u64, alphabet: usize, q: u32) -> Vec<u16> {
    let positions = (1usize << q) - 1;
    let mut out = vec![0u16; positions];
    let mut rest = index;
    for slot in out.iter_mut().rev() {
        *slot = (rest % alphabet as u64) as u16;
        rest /= alphabet as u64;
    }
    out
}

/// Per-pattern occurrence counts, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicVector {
    pub q: u32,
    pub alphabet: usize,
    pub counts: BTreeMap<u64, u32>,
}

impl CharacteristicVector {
    pub fn get(&self, pattern: u64) -> u32 {
        self.counts.get(&pattern).copied().unwrap_or(0)
    }

    pub fn dimension(&self) -> Result<u64, EmbedError> {
        pattern_count(self.alphabet, self.q)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().map(|&c| c as u64).sum()
    }

    /// Dense `b_1..b_N`; only sensible for small alphabets and q.
    pub fn to_dense(&self) -> Result<Vec<u32>, EmbedError> {
        let n = self.dimension()?;
        let n = usize::try_from(n).map_err(|_| EmbedError::Overflow {
            alphabet: self.alphabet,
            q: self.q,
        })?;
        let mut dense = vec![0; n];
        for (&i, &c) in &self.counts {
            dense[i as usize] = c;
        }
        Ok(dense)
    }
}

/// Position-aware characteristic vector: per pattern, the heights of the
/// occurrence roots in pre-order discovery order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pacv {
    pub q: u32,
    pub alphabet: usize,
    pub heights: BTreeMap<u64, Vec<u32>>,
}

impl Pacv {
    pub fn empty(q: u32, alphabet: usize) -> Pacv {
        Pacv {
            q,
            alphabet,
            heights: BTreeMap::new(),
        }
    }

    pub fn get(&self, pattern: u64) -> &[u32] {
        self.heights.get(&pattern).map_or(&[], Vec::as_slice)
    }

    /// The characteristic vector is exactly the list lengths.
    pub fn to_char_vector(&self) -> CharacteristicVector {
        CharacteristicVector {
            q: self.q,
            alphabet: self.alphabet,
            counts: self.heights.iter().map(|(&i, h)| (i, h.len() as u32)).collect(),
        }
    }

    /// Appends another vector's lists pattern by pattern.
    pub fn extend(&mut self, other: &Pacv) {
        for (&i, h) in &other.heights {
            self.heights.entry(i).or_default().extend_from_slice(h);
        }
    }

    /// Height lists sorted in descending order, ready for repeated distance queries.
    pub fn sorted(&self) -> SortedPacv {
        SortedPacv {
            q: self.q,
            alphabet: self.alphabet,
            heights: self
                .heights
                .iter()
                .map(|(&i, h)| {
                    let mut h = h.clone();
                    h.sort_unstable_by(|a, b| b.cmp(a));
                    (i, h)
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedPacv {
    pub q: u32,
    pub alphabet: usize,
    /// Sorted by pattern index; each list descending.
    pub heights: Vec<(u64, Vec<u32>)>,
}

pub fn char_vector(tree: &BinaryTree, q: u32) -> CharacteristicVector {
    pacv(tree, q).to_char_vector()
}

pub fn pacv(tree: &BinaryTree, q: u32) -> Pacv {
    assert!(q >= 1, "pattern height must be at least 1");
    let mut out = Pacv::empty(q, tree.alphabet);
    let heights = tree.heights();
    for (node, &h) in heights.iter().enumerate() {
        if h >= q {
            let p = pattern_at(tree, node as u32, q);
            out.heights.entry(p).or_default().push(h);
        }
    }
    out
}

/// Pacv of a forest: lists are concatenated tree by tree, heights measured
/// within each tree.
pub fn pacv_forest<'a>(trees: impl IntoIterator<Item = &'a BinaryTree>, q: u32, alphabet: usize) -> Pacv {
    let mut out = Pacv::empty(q, alphabet);
    for t in trees {
        out.extend(&pacv(t, q));
    }
    out
}
