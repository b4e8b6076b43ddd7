use std::collections::{BTreeMap, HashMap, HashSet};

use crate::lang::{Ast, Kind, Label, Node, NodeId};

use super::fix::{Anchor, Fix, FixKind};
use super::RepairError;

struct Plan<'a> {
    replace: HashMap<NodeId, &'a Node>,
    delete: HashSet<NodeId>,
    insert: BTreeMap<(NodeId, usize), Vec<(usize, &'a Node)>>,
}

impl<'a> Plan<'a> {
    fn new(fixes: &[&'a Fix]) -> Result<Plan<'a>, RepairError> {
        let mut seen = HashSet::new();
        let mut plan = Plan {
            replace: HashMap::new(),
            delete: HashSet::new(),
            insert: BTreeMap::new(),
        };
        for f in fixes {
            if !seen.insert(f.anchor) {
                return Err(RepairError::ConflictingFixes(f.anchor));
            }
            match (f.kind, f.anchor) {
                (FixKind::Modification, Anchor::Node(id)) => {
                    plan.replace
                        .insert(id, f.replacement.as_ref().expect("modification carries S_c"));
                }
                (FixKind::Deletion, Anchor::Node(id)) => {
                    plan.delete.insert(id);
                }
                (FixKind::Insertion, Anchor::Slot { container, index, seq }) => plan
                    .insert
                    .entry((container, index))
                    .or_default()
                    .push((seq, f.replacement.as_ref().expect("insertion carries S_c"))),
                _ => return Err(RepairError::ConflictingFixes(f.anchor)),
            }
        }
        for list in plan.insert.values_mut() {
            list.sort_by_key(|(seq, _)| *seq);
        }
        Ok(plan)
    }

    fn rebuild(&self, node: &Node) -> Node {
        if let Some(r) = self.replace.get(&node.id) {
            return (*r).clone();
        }
        let mut children = Vec::with_capacity(node.children.len());
        let mut touched = false;
        for (i, child) in node.children.iter().enumerate() {
            if let Some(list) = self.insert.get(&(node.id, i)) {
                children.extend(list.iter().map(|(_, s)| (*s).clone()));
                touched = true;
            }
            if self.delete.contains(&child.id) {
                touched = true;
                continue;
            }
            children.push(self.rebuild(child));
        }
        if let Some(list) = self.insert.get(&(node.id, node.children.len())) {
            children.extend(list.iter().map(|(_, s)| (*s).clone()));
            touched = true;
        }
        let mut out = Node {
            label: node.label.clone(),
            children,
            id: node.id,
            span: node.span,
        };
        // An `else if` that gained or lost statements becomes an `else` block.
        if touched && node.kind() == Kind::Else {
            let mut block = Node::new(Label::new(Kind::Block), std::mem::take(&mut out.children));
            block.span = node.span;
            out.children = vec![block];
        }
        out
    }
}

/// Applies a conflict-free set of fixes to `pe`. Node ids of the result are
/// renumbered.
pub fn apply_fixes<'a>(pe: &Ast, subset: impl IntoIterator<Item = &'a Fix>) -> Result<Ast, RepairError> {
    let fixes: Vec<&Fix> = subset.into_iter().collect();
    if fixes.is_empty() {
        return Ok(pe.clone());
    }
    let plan = Plan::new(&fixes)?;
    Ok(Ast::new(plan.rebuild(&pe.root)))
}
