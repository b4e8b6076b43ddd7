use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::{Ast, Kind, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CfSymbol {
    #[serde(rename = "If_start")]
    IfStart,
    #[serde(rename = "If_end")]
    IfEnd,
    #[serde(rename = "Else_start")]
    ElseStart,
    #[serde(rename = "Else_end")]
    ElseEnd,
    #[serde(rename = "While_start")]
    WhileStart,
    #[serde(rename = "While_end")]
    WhileEnd,
    #[serde(rename = "For_start")]
    ForStart,
    #[serde(rename = "For_end")]
    ForEnd,
}

impl CfSymbol {
    pub fn is_start(self) -> bool {
        matches!(
            self,
            CfSymbol::IfStart | CfSymbol::ElseStart | CfSymbol::WhileStart | CfSymbol::ForStart
        )
    }

    fn closer(self) -> Option<CfSymbol> {
        match self {
            CfSymbol::IfStart => Some(CfSymbol::IfEnd),
            CfSymbol::ElseStart => Some(CfSymbol::ElseEnd),
            CfSymbol::WhileStart => Some(CfSymbol::WhileEnd),
            CfSymbol::ForStart => Some(CfSymbol::ForEnd),
            _ => None,
        }
    }
}

impl fmt::Display for CfSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CfSymbol::IfStart => "If_start",
            CfSymbol::IfEnd => "If_end",
            CfSymbol::ElseStart => "Else_start",
            CfSymbol::ElseEnd => "Else_end",
            CfSymbol::WhileStart => "While_start",
            CfSymbol::WhileEnd => "While_end",
            CfSymbol::ForStart => "For_start",
            CfSymbol::ForEnd => "For_end",
        };
        f.write_str(s)
    }
}

/// The control-flow structure of a program: start/end symbols of every
/// control construct in pre-order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CfSignature(pub Vec<CfSymbol>);

impl CfSignature {
    pub fn symbols(&self) -> &[CfSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Stack scan: every start has a matching later end, properly nested.
    pub fn is_balanced(&self) -> bool {
        let mut stack = Vec::new();
        for sym in &self.0 {
            if let Some(close) = sym.closer() {
                stack.push(close);
            } else if stack.pop() != Some(*sym) {
                return false;
            }
        }
        stack.is_empty()
    }
}

impl fmt::Display for CfSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

pub fn cf_signature(ast: &Ast) -> CfSignature {
    let mut out = Vec::new();
    emit(&ast.root, &mut out);
    CfSignature(out)
}

fn emit(node: &Node, out: &mut Vec<CfSymbol>) {
    match node.kind() {
        Kind::If => {
            out.push(CfSymbol::IfStart);
            emit(&node.children[1], out);
            out.push(CfSymbol::IfEnd);
            if let Some(els) = node.children.get(2) {
                out.push(CfSymbol::ElseStart);
                emit(&els.children[0], out);
                out.push(CfSymbol::ElseEnd);
            }
        }
        Kind::While => {
            out.push(CfSymbol::WhileStart);
            emit(&node.children[1], out);
            out.push(CfSymbol::WhileEnd);
        }
        Kind::For => {
            out.push(CfSymbol::ForStart);
            emit(&node.children[3], out);
            out.push(CfSymbol::ForEnd);
        }
        Kind::Program | Kind::FuncDecl | Kind::Block => {
            for child in &node.children {
                emit(child, out);
            }
        }
        // Expressions and simple statements hold no control constructs.
        _ => {}
    }
}
