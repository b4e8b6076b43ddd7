use std::sync::atomic::{AtomicUsize, Ordering};

use log::debug;
use rayon::prelude::*;

use crate::interp::{Compiled, TestSuite};
use crate::lang::Ast;

use super::apply::apply_fixes;
use super::fix::{Anchor, Fix};
use super::group::{group_fixes, singleton_groups, FixGroup};
use super::prune::reachability_filter;
use super::RepairError;

pub const DEFAULT_MAX_CARD: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinimizeConfig {
    /// Largest number of groups tried together.
    pub max_card: usize,
    pub prune: bool,
    pub group: bool,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        MinimizeConfig {
            max_card: DEFAULT_MAX_CARD,
            prune: true,
            group: true,
        }
    }
}

/// The smallest passing subset found.
#[derive(Debug, Clone)]
pub struct MinimalFixSet {
    pub fixes: Vec<Fix>,
    /// Groups over `fixes`.
    pub groups: Vec<FixGroup>,
    /// Number of groups.
    pub cardinality: usize,
    pub total_edit_cost: usize,
    /// Subsets executed against the suite.
    pub trials: usize,
}

impl MinimalFixSet {
    fn empty() -> Self {
        MinimalFixSet {
            fixes: Vec::new(),
            groups: Vec::new(),
            cardinality: 0,
            total_edit_cost: 0,
            trials: 0,
        }
    }
}

fn passes(p: &Ast, suite: &TestSuite) -> bool {
    Compiled::new(p).passes(suite)
}

/// All `k`-element combinations of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

struct Search<'a> {
    pe: &'a Ast,
    suite: &'a TestSuite,
    fixes: &'a [Fix],
    groups: Vec<FixGroup>,
    trials: usize,
    /// The test that most recently failed; failing subsets usually fail it too.
    hint: &'a AtomicUsize,
}

impl Search<'_> {
    fn cost(&self, subset: &[usize]) -> usize {
        subset
            .iter()
            .flat_map(|&g| &self.groups[g].members)
            .map(|&m| self.fixes[m].cost)
            .sum()
    }

    fn anchors(&self, subset: &[usize]) -> Vec<Anchor> {
        let mut a: Vec<Anchor> = subset
            .iter()
            .flat_map(|&g| &self.groups[g].members)
            .map(|&m| self.fixes[m].anchor)
            .collect();
        a.sort();
        a
    }

    fn try_subset(&self, subset: &[usize]) -> bool {
        let chosen = subset
            .iter()
            .flat_map(|&g| &self.groups[g].members)
            .map(|&m| &self.fixes[m]);
        let Ok(p) = apply_fixes(self.pe, chosen) else {
            return false;
        };
        match Compiled::new(&p).first_failure(self.suite, self.hint.load(Ordering::Relaxed)) {
            Some(i) => {
                self.hint.store(i, Ordering::Relaxed);
                false
            }
            None => true,
        }
    }

    /// First passing subset by (cardinality, edit cost, anchors).
    fn run(&mut self, max_card: usize) -> Option<Vec<usize>> {
        for card in 1..=max_card.min(self.groups.len()) {
            let mut subsets = combinations(self.groups.len(), card);
            subsets.sort_by_cached_key(|s| (self.cost(s), self.anchors(s)));
            let hit = subsets.par_iter().position_first(|s| self.try_subset(s));
            self.trials += hit.map_or(subsets.len(), |i| i + 1);
            if let Some(i) = hit {
                return Some(subsets.swap_remove(i));
            }
        }
        None
    }

    fn result(&self, subset: &[usize]) -> MinimalFixSet {
        let mut fixes = Vec::new();
        let mut groups = Vec::new();
        for &g in subset {
            let group = &self.groups[g];
            let start = fixes.len();
            fixes.extend(group.members.iter().map(|&m| self.fixes[m].clone()));
            groups.push(FixGroup {
                members: (start..fixes.len()).collect(),
                reason: group.reason,
            });
        }
        MinimalFixSet {
            total_edit_cost: fixes.iter().map(|f| f.cost).sum(),
            cardinality: groups.len(),
            fixes,
            groups,
            trials: self.trials,
        }
    }
}

/// Searches for the smallest group subset of `fixes` that makes `pe` pass.
pub fn minimize(
    pe: &Ast,
    fixes: &[Fix],
    suite: &TestSuite,
    cfg: &MinimizeConfig,
) -> Result<MinimalFixSet, RepairError> {
    let Some(failing) = Compiled::new(pe).first_failure(suite, 0) else {
        return Ok(MinimalFixSet::empty());
    };
    let hint = AtomicUsize::new(failing);
    let full = apply_fixes(pe, fixes)?;
    if !passes(&full, suite) {
        return Err(RepairError::InvalidCandidate);
    }
    let grouping = |fs: &[Fix]| {
        if cfg.group {
            group_fixes(fs, pe)
        } else {
            singleton_groups(fs.len())
        }
    };
    let mut trials = 0;
    if cfg.prune {
        let (kept, excluded) = reachability_filter(fixes, pe, suite);
        let mut search = Search {
            pe,
            suite,
            groups: grouping(&kept),
            fixes: &kept,
            trials: 0,
            hint: &hint,
        };
        if let Some(s) = search.run(cfg.max_card) {
            return Ok(search.result(&s));
        }
        if excluded.is_empty() {
            return Err(RepairError::ExceedsThreshold { max_card: cfg.max_card });
        }
        debug!("pruned search failed; retrying with {} unreached fixes", excluded.len());
        trials = search.trials;
    }
    let mut search = Search {
        pe,
        suite,
        groups: grouping(fixes),
        fixes,
        trials,
        hint: &hint,
    };
    match search.run(cfg.max_card) {
        Some(s) => Ok(search.result(&s)),
        None => Err(RepairError::ExceedsThreshold { max_card: cfg.max_card }),
    }
}
