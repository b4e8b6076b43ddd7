//! Zhang–Shasha tree edit distance with unit costs.
//!
//! Relabeling compares the whole label, payload included, so `IntLit 1` to
//! `IntLit 2` costs one. The optimal mapping can be recovered and turned
//! into an edit script.

use crate::lang::{Label, Node, NodeId};

/// A tree flattened in post-order with leftmost-leaf descendants.
struct Flat<'a> {
    labels: Vec<&'a Label>,
    ids: Vec<NodeId>,
    lld: Vec<usize>,
    keyroots: Vec<usize>,
}

impl<'a> Flat<'a> {
    fn new(root: &'a Node) -> Self {
        let mut f = Flat {
            labels: Vec::new(),
            ids: Vec::new(),
            lld: Vec::new(),
            keyroots: Vec::new(),
        };
        f.walk(root);
        let n = f.labels.len();
        let mut seen = vec![false; n];
        for i in (0..n).rev() {
            if !seen[f.lld[i]] {
                seen[f.lld[i]] = true;
                f.keyroots.push(i);
            }
        }
        f.keyroots.reverse();
        f
    }

    fn walk(&mut self, node: &'a Node) -> usize {
        let mut first = None;
        for c in &node.children {
            let l = self.walk(c);
            first.get_or_insert(self.lld[l]);
        }
        let me = self.labels.len();
        self.labels.push(&node.label);
        self.ids.push(node.id);
        self.lld.push(first.unwrap_or(me));
        me
    }

    fn len(&self) -> usize {
        self.labels.len()
    }
}

struct Zs<'a> {
    a: Flat<'a>,
    b: Flat<'a>,
    td: Vec<u32>,
    fd: Vec<u32>,
}

impl<'a> Zs<'a> {
    fn new(a: &'a Node, b: &'a Node) -> Self {
        let a = Flat::new(a);
        let b = Flat::new(b);
        let td = vec![0; a.len() * b.len()];
        let fd = vec![0; (a.len() + 1) * (b.len() + 1)];
        let mut zs = Zs { a, b, td, fd };
        for ki in 0..zs.a.keyroots.len() {
            for kj in 0..zs.b.keyroots.len() {
                let (i, j) = (zs.a.keyroots[ki], zs.b.keyroots[kj]);
                zs.forest(i, j);
            }
        }
        zs
    }

    fn cols(&self) -> usize {
        self.b.len() + 1
    }

    /// Fills the forest-distance table for the subtrees rooted at `i` and `j`.
    /// Row `x - li + 1` holds the forest `li..=x`; row 0 is the empty forest.
    fn forest(&mut self, i: usize, j: usize) {
        let (li, lj) = (self.a.lld[i], self.b.lld[j]);
        let cols = self.cols();
        let bn = self.b.len();
        let at = |x: usize, y: usize| x * cols + y;
        self.fd[at(0, 0)] = 0;
        for x in li..=i {
            let r = x - li + 1;
            self.fd[at(r, 0)] = self.fd[at(r - 1, 0)] + 1;
        }
        for y in lj..=j {
            let c = y - lj + 1;
            self.fd[at(0, c)] = self.fd[at(0, c - 1)] + 1;
        }
        for x in li..=i {
            let r = x - li + 1;
            for y in lj..=j {
                let c = y - lj + 1;
                let del = self.fd[at(r - 1, c)] + 1;
                let ins = self.fd[at(r, c - 1)] + 1;
                let best = if self.a.lld[x] == li && self.b.lld[y] == lj {
                    let relabel = u32::from(self.a.labels[x] != self.b.labels[y]);
                    let v = del.min(ins).min(self.fd[at(r - 1, c - 1)] + relabel);
                    self.td[x * bn + y] = v;
                    v
                } else {
                    let pr = self.a.lld[x] - li;
                    let pc = self.b.lld[y] - lj;
                    del.min(ins).min(self.fd[at(pr, pc)] + self.td[x * bn + y])
                };
                self.fd[at(r, c)] = best;
            }
        }
    }

    fn distance(&self) -> usize {
        match (self.a.len(), self.b.len()) {
            (0, m) => m,
            (n, 0) => n,
            (n, m) => self.td[(n - 1) * m + (m - 1)] as usize,
        }
    }

    /// Post-order index pairs of an optimal mapping.
    fn mapping(&mut self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if self.a.len() == 0 || self.b.len() == 0 {
            return out;
        }
        let cols = self.cols();
        let at = |x: usize, y: usize| x * cols + y;
        let mut stack = vec![(self.a.len() - 1, self.b.len() - 1)];
        while let Some((i, j)) = stack.pop() {
            self.forest(i, j);
            let (li, lj) = (self.a.lld[i], self.b.lld[j]);
            // Row/column counts remaining in the forests li..x and lj..y.
            let (mut r, mut c) = (i + 1 - li, j + 1 - lj);
            while r > 0 || c > 0 {
                let here = self.fd[at(r, c)];
                if r > 0 && here == self.fd[at(r - 1, c)] + 1 {
                    r -= 1;
                } else if c > 0 && here == self.fd[at(r, c - 1)] + 1 {
                    c -= 1;
                } else {
                    let (x, y) = (li + r - 1, lj + c - 1);
                    if self.a.lld[x] == li && self.b.lld[y] == lj {
                        out.push((x, y));
                        r -= 1;
                        c -= 1;
                    } else {
                        stack.push((x, y));
                        r = self.a.lld[x] - li;
                        c = self.b.lld[y] - lj;
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

pub fn tree_edit_distance(a: &Node, b: &Node) -> usize {
    Zs::new(a, b).distance()
}

/// One unit-cost tree operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditOp {
    /// Relabel a node of the source tree.
    Relabel { node: NodeId, to: Label },
    /// Delete a node of the source tree, promoting its children.
    Delete { node: NodeId },
    /// Insert the target-tree node `node`.
    Insert { node: NodeId, label: Label },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditScript {
    pub distance: usize,
    /// Matched (source, target) node ids.
    pub mapping: Vec<(NodeId, NodeId)>,
    pub ops: Vec<EditOp>,
}

pub fn edit_script(a: &Node, b: &Node) -> EditScript {
    let mut zs = Zs::new(a, b);
    let distance = zs.distance();
    let pairs = zs.mapping();
    let mut mapped_a = vec![false; zs.a.len()];
    let mut mapped_b = vec![false; zs.b.len()];
    let mut ops = Vec::new();
    let mut mapping = Vec::with_capacity(pairs.len());
    for &(x, y) in &pairs {
        mapped_a[x] = true;
        mapped_b[y] = true;
        mapping.push((zs.a.ids[x], zs.b.ids[y]));
        if zs.a.labels[x] != zs.b.labels[y] {
            ops.push(EditOp::Relabel {
                node: zs.a.ids[x],
                to: zs.b.labels[y].clone(),
            });
        }
    }
    for (x, hit) in mapped_a.iter().enumerate() {
        if !hit {
            ops.push(EditOp::Delete { node: zs.a.ids[x] });
        }
    }
    for (y, hit) in mapped_b.iter().enumerate() {
        if !hit {
            ops.push(EditOp::Insert {
                node: zs.b.ids[y],
                label: zs.b.labels[y].clone(),
            });
        }
    }
    debug_assert_eq!(ops.len(), distance);
    EditScript { distance, mapping, ops }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, Kind};

    fn t(label: &str, children: Vec<Node>) -> Node {
        Node::new(Label::with_payload(Kind::Var, label), children)
    }

    #[test]
    fn identical_trees() {
        let a = parse("x = 1; y = x + 2;").unwrap();
        assert_eq!(tree_edit_distance(&a.root, &a.root), 0);
    }

    #[test]
    fn payload_change_costs_one() {
        let a = parse("x = 1;").unwrap();
        let b = parse("x = 2;").unwrap();
        assert_eq!(tree_edit_distance(&a.root, &b.root), 1);
        let s = edit_script(&a.root, &b.root);
        assert_eq!(s.ops.len(), 1);
        assert!(matches!(s.ops[0], EditOp::Relabel { .. }));
    }

    #[test]
    fn classic_example() {
        // f(d(a, c(b)), e) vs f(c(d(a, b)), e): distance 2.
        let a = t(
            "f",
            vec![
                t("d", vec![t("a", vec![]), t("c", vec![t("b", vec![])])]),
                t("e", vec![]),
            ],
        );
        let b = t(
            "f",
            vec![
                t("c", vec![t("d", vec![t("a", vec![]), t("b", vec![])])]),
                t("e", vec![]),
            ],
        );
        assert_eq!(tree_edit_distance(&a, &b), 2);
        assert_eq!(tree_edit_distance(&b, &a), 2);
        assert_eq!(edit_script(&a, &b).ops.len(), 2);
    }

    #[test]
    fn script_length_matches_distance() {
        let a = parse("for (i = 0; i < n; i += 1) { print(i); }").unwrap();
        let b = parse("for (j = 1; j <= n; j = j + 1) { if (j > 2) { print(j * 2); } }").unwrap();
        let s = edit_script(&a.root, &b.root);
        assert_eq!(s.ops.len(), s.distance);
        assert_eq!(s.distance, tree_edit_distance(&a.root, &b.root));
    }
}
