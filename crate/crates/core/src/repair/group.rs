use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::align::Site;
use crate::lang::{Ast, Kind, Node};

use super::fix::Fix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupReason {
    Singleton,
    SameStatement,
    DefUseDependency,
}

/// Fixes that are applied or withheld together. Members index the fix list
/// the groups were computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixGroup {
    pub members: Vec<usize>,
    pub reason: GroupReason,
}

/// Variables a statement assigns or declares.
fn defined(stmt: &Node) -> Option<&str> {
    match stmt.kind() {
        Kind::Decl | Kind::Assign => {
            let target = &stmt.children[0];
            match target.kind() {
                Kind::Var => target.payload(),
                _ => target.children.first().and_then(Node::payload),
            }
        }
        _ => None,
    }
}

fn definitions(p: &Ast) -> BTreeSet<&str> {
    let mut out: BTreeSet<&str> = p.params().into_iter().collect();
    out.extend(p.root.preorder().filter_map(defined));
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Partitions fixes into co-occurrence groups: header edits of the same
/// control statement, and a fix introducing a definition of a variable the
/// incorrect program never defines together with every fix using it.
/// Groups are ordered by their first member.
pub fn group_fixes(fixes: &[Fix], pe: &Ast) -> Vec<FixGroup> {
    let n = fixes.len();
    let mut uf = UnionFind::new(n);
    let mut same = vec![false; n];
    let mut dep = vec![false; n];
    for i in 0..n {
        for j in i + 1..n {
            if let (Site::Header { owner: a, .. }, Site::Header { owner: b, .. }) = (fixes[i].site, fixes[j].site) {
                if a == b {
                    uf.union(i, j);
                    same[i] = true;
                    same[j] = true;
                }
            }
        }
    }
    let known = definitions(pe);
    for (i, f) in fixes.iter().enumerate() {
        let Some(var) = f.replacement.as_ref().and_then(defined) else {
            continue;
        };
        if known.contains(var) {
            continue;
        }
        for (j, g) in fixes.iter().enumerate() {
            if i != j && g.replacement.as_ref().is_some_and(|r| r.mentions(var)) {
                uf.union(i, j);
                dep[i] = true;
                dep[j] = true;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let root = uf.find(i);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push(i),
            None => groups.push((root, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let reason = if members.len() == 1 {
                GroupReason::Singleton
            } else if members.iter().any(|&m| dep[m]) {
                GroupReason::DefUseDependency
            } else {
                debug_assert!(members.iter().all(|&m| same[m]));
                GroupReason::SameStatement
            };
            FixGroup { members, reason }
        })
        .collect()
}

/// Every fix in its own group.
pub fn singleton_groups(n: usize) -> Vec<FixGroup> {
    (0..n)
        .map(|i| FixGroup {
            members: vec![i],
            reason: GroupReason::Singleton,
        })
        .collect()
}
