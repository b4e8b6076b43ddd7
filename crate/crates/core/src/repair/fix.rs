use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::align::{Discrepancy, Site};
use crate::embed::{edit_script, EditOp};
use crate::lang::{Ast, Node, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixKind {
    Insertion,
    Deletion,
    Modification,
}

impl fmt::Display for FixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixKind::Insertion => "insertion",
            FixKind::Deletion => "deletion",
            FixKind::Modification => "modification",
        })
    }
}

/// The location a fix acts on in the incorrect program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Anchor {
    /// An existing statement or header item.
    Node(NodeId),
    /// A gap in statement list `container` before position `index`; `seq`
    /// orders several insertions into the same gap.
    Slot {
        container: NodeId,
        index: usize,
        seq: usize,
    },
}

impl Anchor {
    /// The node whose execution makes this location reachable.
    pub fn site_node(&self) -> NodeId {
        match *self {
            Anchor::Node(id) => id,
            Anchor::Slot { container, .. } => container,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fix {
    pub kind: FixKind,
    pub anchor: Anchor,
    pub site: Site,
    /// `S_e`, absent for insertions.
    pub original: Option<Node>,
    /// `S_c`, absent for deletions.
    pub replacement: Option<Node>,
    /// Tree operations turning `original` into `replacement` (modifications only).
    pub script: Vec<EditOp>,
    /// Unit edit cost: TED for modifications, statement size otherwise.
    pub cost: usize,
    /// Source line the fix refers to.
    pub line: u32,
}

fn insertion_line(pe: &Ast, container: NodeId, index: usize) -> u32 {
    let Some(c) = pe.find(container) else {
        return 1;
    };
    match c.children.get(index) {
        Some(next) => next.span.start.line,
        None => c.span.end.line,
    }
    .max(1)
}

/// One fix per discrepancy.
pub fn gen_fixes(pe: &Ast, d: &[Discrepancy]) -> Vec<Fix> {
    let mut seq: BTreeMap<(NodeId, usize), usize> = BTreeMap::new();
    d.iter()
        .map(|disc| {
            let owner_line = |node: &Node| match disc.site {
                Site::Header { owner, .. } if node.span.start.line == 0 => {
                    pe.find(owner).map_or(1, |o| o.span.start.line)
                }
                _ => node.span.start.line,
            };
            match (&disc.e, &disc.c) {
                (None, Some(c)) => {
                    let Site::Stmt { container, index } = disc.site else {
                        unreachable!("header items never go unmatched")
                    };
                    let n = seq.entry((container, index)).or_insert(0);
                    let anchor = Anchor::Slot {
                        container,
                        index,
                        seq: *n,
                    };
                    *n += 1;
                    Fix {
                        kind: FixKind::Insertion,
                        anchor,
                        site: disc.site,
                        original: None,
                        replacement: Some(c.clone()),
                        script: Vec::new(),
                        cost: c.size(),
                        line: insertion_line(pe, container, index),
                    }
                }
                (Some(e), None) => Fix {
                    kind: FixKind::Deletion,
                    anchor: Anchor::Node(e.id),
                    site: disc.site,
                    original: Some(e.clone()),
                    replacement: None,
                    script: Vec::new(),
                    cost: e.size(),
                    line: owner_line(e),
                },
                (Some(e), Some(c)) => {
                    let script = edit_script(e, c);
                    Fix {
                        kind: FixKind::Modification,
                        anchor: Anchor::Node(e.id),
                        site: disc.site,
                        original: Some(e.clone()),
                        replacement: Some(c.clone()),
                        cost: script.distance,
                        script: script.ops,
                        line: owner_line(e),
                    }
                }
                (None, None) => unreachable!("a discrepancy has at least one side"),
            }
        })
        .collect()
}
