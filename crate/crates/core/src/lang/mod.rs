//! MiniImp: the subject language. Parsing, printing, control-flow
//! signatures and binarization.

pub mod ast;
pub mod binary;
pub mod cf;
mod lexer;
pub mod parser;
pub mod printer;

use thiserror::Error;

pub use ast::{Ast, BinOp, Kind, Label, Node, NodeId, Pos, Span, UnOp};
pub use binary::{binarize, BinaryNode, BinaryTree, BinaryTreeBuilder};
pub use cf::{cf_signature, CfSignature, CfSymbol};
pub use parser::parse;
pub use printer::{expr_to_string, pretty_print, simple_to_string};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{col}: {message}")]
pub struct SyntaxError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl SyntaxError {
    pub(crate) fn new(at: Pos, message: impl Into<String>) -> Self {
        SyntaxError {
            line: at.line,
            col: at.col,
            message: message.into(),
        }
    }
}
