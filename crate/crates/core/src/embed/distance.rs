use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::pattern::{CharacteristicVector, Pacv, SortedPacv};
use super::EmbedError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    L1,
    L2,
}

fn check(q: (u32, usize), other: (u32, usize)) -> Result<(), EmbedError> {
    if q == other {
        Ok(())
    } else {
        Err(EmbedError::DimensionMismatch { left: q, right: other })
    }
}

pub fn cv_distance(a: &CharacteristicVector, b: &CharacteristicVector, norm: Norm) -> Result<f64, EmbedError> {
    check((a.q, a.alphabet), (b.q, b.alphabet))?;
    let mut l1 = 0u64;
    let mut sq = 0u64;
    let mut diff = |x: u32, y: u32| {
        let d = x.abs_diff(y) as u64;
        l1 += d;
        sq += d * d;
    };
    let mut ia = a.counts.iter().peekable();
    let mut ib = b.counts.iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (Some((ka, va)), Some((kb, vb))) => match ka.cmp(kb) {
                Ordering::Less => {
                    diff(**va, 0);
                    ia.next();
                }
                Ordering::Greater => {
                    diff(0, **vb);
                    ib.next();
                }
                Ordering::Equal => {
                    diff(**va, **vb);
                    ia.next();
                    ib.next();
                }
            },
            (Some((_, va)), None) => {
                diff(**va, 0);
                ia.next();
            }
            (None, Some((_, vb))) => {
                diff(0, **vb);
                ib.next();
            }
            (None, None) => break,
        }
    }
    Ok(match norm {
        Norm::L1 => l1 as f64,
        Norm::L2 => (sq as f64).sqrt(),
    })
}

/// Squared distance between two descending height lists, the shorter
/// padded with zeros.
fn padded_sq(a: &[u32], b: &[u32]) -> u64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            let d = x.abs_diff(y) as u64;
            d * d
        })
        .sum()
}

pub fn pacv_distance(a: &Pacv, b: &Pacv) -> Result<f64, EmbedError> {
    sorted_pacv_distance(&a.sorted(), &b.sorted())
}

pub fn sorted_pacv_distance(a: &SortedPacv, b: &SortedPacv) -> Result<f64, EmbedError> {
    check((a.q, a.alphabet), (b.q, b.alphabet))?;
    let (mut i, mut j) = (0, 0);
    let mut sq = 0u64;
    while i < a.heights.len() || j < b.heights.len() {
        let ka = a.heights.get(i).map(|e| e.0);
        let kb = b.heights.get(j).map(|e| e.0);
        match (ka, kb) {
            (Some(x), Some(y)) if x == y => {
                sq += padded_sq(&a.heights[i].1, &b.heights[j].1);
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                sq += padded_sq(&a.heights[i].1, &[]);
                i += 1;
            }
            (Some(_), None) => {
                sq += padded_sq(&a.heights[i].1, &[]);
                i += 1;
            }
            _ => {
                sq += padded_sq(&[], &b.heights[j].1);
                j += 1;
            }
        }
    }
    Ok((sq as f64).sqrt())
}
