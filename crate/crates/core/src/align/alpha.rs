use std::collections::{BTreeMap, BTreeSet};

use crate::embed::{pacv_distance, Pacv};
use crate::lang::{Ast, Kind};

use super::assign;
use super::usage::{usage_sets, usage_vector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaConfig {
    pub q: u32,
    /// Tukey fence multiplier on the interquartile range.
    pub fence: f64,
    /// A pair is only an outlier when its distance also exceeds this fraction
    /// of the larger usage-vector norm. Zero gives the plain fence.
    pub min_relative: f64,
}

impl Default for AlphaConfig {
    fn default() -> Self {
        AlphaConfig {
            q: crate::embed::DEFAULT_Q,
            fence: 1.5,
            min_relative: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarPair {
    /// Name in the correct program.
    pub c: String,
    /// Name in the incorrect program.
    pub e: String,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VarMapping {
    pub pairs: Vec<VarPair>,
    pub unmatched_c: Vec<String>,
    pub unmatched_e: Vec<String>,
    /// Every renaming applied to the correct program, fresh names included.
    pub renames: BTreeMap<String, String>,
}

impl VarMapping {
    pub fn total_distance(&self) -> f64 {
        self.pairs.iter().map(|p| p.distance).sum()
    }
}

/// Type-7 sample quantile of sorted data.
pub(crate) fn quantile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn norm(p: &Pacv) -> f64 {
    p.heights
        .values()
        .flatten()
        .map(|&h| (h as f64) * (h as f64))
        .sum::<f64>()
        .sqrt()
}

/// Variables in order of first appearance.
fn first_seen(p: &Ast) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for n in p.root.preorder().filter(|n| n.kind() == Kind::Var) {
        if let Some(name) = n.payload() {
            let next = out.len();
            out.entry(name.to_owned()).or_insert(next);
        }
    }
    out
}

fn vectors(p: &Ast, q: u32) -> BTreeMap<String, Pacv> {
    usage_sets(p)
        .values()
        .map(|u| (u.variable.clone(), usage_vector(u, q)))
        .collect()
}

pub fn alpha_conversion(pe: &Ast, pc: &Ast, q: u32) -> (Ast, VarMapping) {
    alpha_conversion_with(
        pe,
        pc,
        &AlphaConfig {
            q,
            ..AlphaConfig::default()
        },
    )
}

/// Renames the variables of `pc` to their counterparts in `pe`.
///
/// Entry parameters pair up by position. The remaining variables are
/// assigned by minimum total usage-vector distance, injecting the smaller
/// set into the larger; exact ties prefer equal names, then similar order
/// of first appearance. Outlying pairs are dropped by the Tukey fence.
pub fn alpha_conversion_with(pe: &Ast, pc: &Ast, cfg: &AlphaConfig) -> (Ast, VarMapping) {
    let vec_e = vectors(pe, cfg.q);
    let vec_c = vectors(pc, cfg.q);
    let dist = |c: &str, e: &str| pacv_distance(&vec_c[c], &vec_e[e]).expect("same q");

    let params_e = pe.params();
    let params_c = pc.params();
    let mut pairs = Vec::new();
    for (c, e) in params_c.iter().zip(&params_e) {
        pairs.push(VarPair {
            c: (*c).to_owned(),
            e: (*e).to_owned(),
            distance: dist(c, e),
        });
    }
    let fixed = pairs.len();
    let rest_c: Vec<&String> = vec_c.keys().filter(|v| !pairs.iter().any(|p| &p.c == *v)).collect();
    let rest_e: Vec<&String> = vec_e.keys().filter(|v| !pairs.iter().any(|p| &p.e == *v)).collect();

    let seen_c = first_seen(pc);
    let seen_e = first_seen(pe);
    let span = (seen_c.len().max(seen_e.len()) + 1) as f64;
    let tie = |c: &str, e: &str| {
        let named = if c == e { 0.0 } else { 1.0 };
        let order = seen_c[c].abs_diff(seen_e[e]) as f64 / span;
        1e-7 * (named + order)
    };
    let c_rows = rest_c.len() <= rest_e.len();
    let (rows, cols) = if c_rows { (&rest_c, &rest_e) } else { (&rest_e, &rest_c) };
    let cost: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            cols.iter()
                .map(|k| {
                    let (c, e) = if c_rows { (r, k) } else { (k, r) };
                    dist(c, e) + tie(c, e)
                })
                .collect()
        })
        .collect();
    for (r, k) in assign::solve(&cost).into_iter().enumerate() {
        let (c, e) = if c_rows { (rows[r], cols[k]) } else { (cols[k], rows[r]) };
        pairs.push(VarPair {
            c: c.clone(),
            e: e.clone(),
            distance: dist(c, e),
        });
    }

    let mut sample: Vec<f64> = pairs[fixed..].iter().map(|p| p.distance).collect();
    sample.sort_by(f64::total_cmp);
    let q1 = quantile(&sample, 0.25);
    let q3 = quantile(&sample, 0.75);
    let limit = q3 + cfg.fence * (q3 - q1);
    let mut kept = pairs[..fixed].to_vec();
    for p in pairs.drain(fixed..) {
        let scale = norm(&vec_c[&p.c]).max(norm(&vec_e[&p.e]));
        if p.distance > limit && p.distance > cfg.min_relative * scale {
            continue;
        }
        kept.push(p);
    }
    kept.sort_by(|a, b| a.c.cmp(&b.c));

    let matched_c: BTreeSet<&str> = kept.iter().map(|p| p.c.as_str()).collect();
    let matched_e: BTreeSet<&str> = kept.iter().map(|p| p.e.as_str()).collect();
    let unmatched_c: Vec<String> = vec_c
        .keys()
        .filter(|v| !matched_c.contains(v.as_str()))
        .cloned()
        .collect();
    let unmatched_e: Vec<String> = vec_e
        .keys()
        .filter(|v| !matched_e.contains(v.as_str()))
        .cloned()
        .collect();

    let mut renames: BTreeMap<String, String> = kept.iter().map(|p| (p.c.clone(), p.e.clone())).collect();
    let mut taken: BTreeSet<String> = vec_e.keys().chain(vec_c.keys()).cloned().collect();
    for v in &unmatched_c {
        if vec_e.contains_key(v) {
            let fresh = (1..)
                .map(|k| format!("{v}_{k}"))
                .find(|n| !taken.contains(n))
                .expect("unbounded supply of names");
            taken.insert(fresh.clone());
            renames.insert(v.clone(), fresh);
        }
    }

    let mut pac = pc.clone();
    pac.rename_vars(&|name| renames.get(name).cloned());
    (
        pac,
        VarMapping {
            pairs: kept,
            unmatched_c,
            unmatched_e,
            renames,
        },
    )
}
