use crate::lang::{Ast, Kind, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// A maximal run of non-control statements inside one statement list.
    Run,
    /// The predicate or header items of one control statement.
    Header,
}

#[derive(Debug, Clone)]
pub struct BasicBlock<'a> {
    pub kind: BlockKind,
    /// For a run, the statement list holding it; for a header, the control statement.
    pub owner: &'a Node,
    /// For a run, the index in `owner.children` where the run begins.
    pub start: usize,
    pub stmts: Vec<&'a Node>,
}

/// Header items of a control statement, `Epsilon` placeholders included.
pub fn header_items(s: &Node) -> &[Node] {
    match s.kind() {
        Kind::If | Kind::While => &s.children[..1],
        Kind::For => &s.children[..3],
        _ => &[],
    }
}

/// Basic blocks in program order. Every statement list yields a leading run
/// and, after each control statement, that statement's header, the blocks
/// of its nested lists and a trailing run. Runs may be empty, so the block
/// sequence depends only on the control-flow structure.
pub fn basic_blocks(p: &Ast) -> Vec<BasicBlock<'_>> {
    let mut out = Vec::new();
    list(p.body(), &mut out);
    out
}

fn list<'a>(container: &'a Node, out: &mut Vec<BasicBlock<'a>>) {
    let mut run = BasicBlock {
        kind: BlockKind::Run,
        owner: container,
        start: 0,
        stmts: Vec::new(),
    };
    for (i, s) in container.children.iter().enumerate() {
        if !s.kind().is_control() {
            run.stmts.push(s);
            continue;
        }
        out.push(run);
        out.push(BasicBlock {
            kind: BlockKind::Header,
            owner: s,
            start: 0,
            stmts: header_items(s).iter().collect(),
        });
        match s.kind() {
            Kind::If => {
                list(&s.children[1], out);
                if let Some(e) = s.children.get(2) {
                    match e.children[0].kind() {
                        Kind::If => list(e, out),
                        _ => list(&e.children[0], out),
                    }
                }
            }
            Kind::While => list(&s.children[1], out),
            _ => list(&s.children[3], out),
        }
        run = BasicBlock {
            kind: BlockKind::Run,
            owner: container,
            start: i + 1,
            stmts: Vec::new(),
        };
    }
    out.push(run);
}
