use super::ast::{Kind, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryNode {
    /// Symbol index into the tree's alphabet.
    pub symbol: u16,
    pub left: Option<u32>,
    pub right: Option<u32>,
}

/// A binary tree over a finite alphabet; absent children stand for ε.
///
/// Nodes are stored in pre-order, so index 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryTree {
    pub nodes: Vec<BinaryNode>,
    pub alphabet: usize,
    pub epsilon: u16,
}

impl BinaryTree {
    pub fn empty(alphabet: usize, epsilon: u16) -> Self {
        BinaryTree {
            nodes: Vec::new(),
            alphabet,
            epsilon,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> Option<u32> {
        (!self.nodes.is_empty()).then_some(0)
    }

    /// Heights of every node: leaves are 1, otherwise 1 + the taller child.
    pub fn heights(&self) -> Vec<u32> {
        let mut h = vec![0u32; self.nodes.len()];
        // Pre-order storage means children come after parents.
        for i in (0..self.nodes.len()).rev() {
            let n = &self.nodes[i];
            let l = n.left.map_or(0, |c| h[c as usize]);
            let r = n.right.map_or(0, |c| h[c as usize]);
            h[i] = 1 + l.max(r);
        }
        h
    }
}

/// Incremental builder that keeps pre-order storage.
#[derive(Debug)]
pub struct BinaryTreeBuilder {
    tree: BinaryTree,
}

impl BinaryTreeBuilder {
    pub fn new(alphabet: usize, epsilon: u16) -> Self {
        BinaryTreeBuilder {
            tree: BinaryTree::empty(alphabet, epsilon),
        }
    }

    pub fn push(&mut self, symbol: u16) -> u32 {
        assert!((symbol as usize) < self.tree.alphabet, "symbol outside alphabet");
        self.tree.nodes.push(BinaryNode {
            symbol,
            left: None,
            right: None,
        });
        (self.tree.nodes.len() - 1) as u32
    }

    pub fn set_left(&mut self, parent: u32, child: u32) {
        self.tree.nodes[parent as usize].left = Some(child);
    }

    pub fn set_right(&mut self, parent: u32, child: u32) {
        self.tree.nodes[parent as usize].right = Some(child);
    }

    pub fn finish(self) -> BinaryTree {
        self.tree
    }
}

/// Left-child/right-sibling encoding of an n-ary tree.
pub fn binarize(root: &Node) -> BinaryTree {
    let mut b = BinaryTreeBuilder::new(Kind::ALPHABET_SIZE, Kind::Epsilon.index() as u16);
    encode(root, &mut b);
    b.finish()
}

fn encode(node: &Node, b: &mut BinaryTreeBuilder) -> u32 {
    let me = b.push(node.kind().index() as u16);
    let mut prev: Option<u32> = None;
    for child in &node.children {
        let c = encode(child, b);
        match prev {
            None => b.set_left(me, c),
            Some(p) => b.set_right(p, c),
        }
        prev = Some(c);
    }
    me
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::ast::Label;

    #[test]
    fn single_leaf() {
        let t = binarize(&Node::leaf(Kind::Var, "x"));
        assert_eq!(t.len(), 1);
        assert_eq!(t.nodes[0].left, None);
        assert_eq!(t.nodes[0].right, None);
        assert_eq!(t.heights(), vec![1]);
    }

    #[test]
    fn three_children_chain_through_right_links() {
        let parent = Node::new(
            Label::new(Kind::Block),
            vec![
                Node::leaf(Kind::Var, "a"),
                Node::leaf(Kind::Var, "b"),
                Node::leaf(Kind::Var, "c"),
            ],
        );
        let t = binarize(&parent);
        let c1 = t.nodes[0].left.unwrap();
        let c2 = t.nodes[c1 as usize].right.unwrap();
        let c3 = t.nodes[c2 as usize].right.unwrap();
        assert_eq!(t.nodes[c3 as usize].right, None);
        assert_eq!(t.len(), 4);
        // Sibling chains add height in the binary form.
        assert_eq!(t.heights(), vec![4, 3, 2, 1]);
    }
}
