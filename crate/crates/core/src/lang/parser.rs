//! Recursive-descent parser for MiniImp.
//!
//! Node layout (children in order):
//!
//! | kind       | payload      | children                                   |
//! |------------|--------------|--------------------------------------------|
//! | `Program`  | -            | one `FuncDecl`, or a bare statement list   |
//! | `FuncDecl` | name         | `Param`*, `Block`                          |
//! | `Param`    | type, if any | `Var`                                      |
//! | `Decl`     | -            | `Var`, optional initializer                |
//! | `Assign`   | `=` `+=` ... | lvalue (`Var` or `Index`), value           |
//! | `If`       | -            | cond, `Block`, optional `Else`             |
//! | `Else`     | -            | `Block` or `If`                            |
//! | `While`    | -            | cond, `Block`                              |
//! | `For`      | -            | init, cond, update, `Block` (`Epsilon` when omitted) |
//! | `Return`   | -            | optional value                             |
//! | `Print`    | -            | value                                      |
//! | `Call`     | callee       | arguments                                  |
//! | `Index`    | -            | `Var`, index expression                    |
//!
//! An expression statement is stored as the bare expression node.

use super::ast::{Ast, BinOp, Kind, Label, Node, Pos, Span, UnOp};
use super::lexer::{tokenize, Tok, Token};
use super::SyntaxError;

pub fn parse(source: &str) -> Result<Ast, SyntaxError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, pos: 0 };
    let root = parser.program()?;
    Ok(Ast::new(root))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, SyntaxError>;

fn node(kind: Kind, payload: Option<String>, children: Vec<Node>, span: Span) -> Node {
    let mut n = Node::new(Label { kind, payload }, children);
    n.span = span;
    n
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].tok
    }

    fn start(&self) -> Pos {
        self.tokens[self.pos].start
    }

    fn last_end(&self) -> Pos {
        self.tokens[self.pos.saturating_sub(1)].end
    }

    fn span_from(&self, start: Pos) -> Span {
        Span::new(start, self.last_end())
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        let found = match self.peek() {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(v) => format!("integer `{v}`"),
            Tok::Str(_) => "string literal".to_owned(),
            Tok::Kw(k) => format!("`{k}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_owned(),
        };
        Err(SyntaxError::new(
            self.start(),
            format!("{}, found {found}", message.into()),
        ))
    }

    fn is_sym(&self, sym: &str) -> bool {
        matches!(self.peek(), Tok::Sym(s) if *s == sym)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Kw(k) if *k == kw)
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        if self.is_sym(sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, sym: &str) -> PResult<()> {
        if self.eat_sym(sym) {
            Ok(())
        } else {
            self.error(format!("expected `{sym}`"))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{kw}`"))
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let t = self.bump();
                Ok((name, Span::new(t.start, t.end)))
            }
            _ => self.error("expected identifier"),
        }
    }

    fn var(&mut self) -> PResult<Node> {
        let (name, span) = self.ident()?;
        Ok(node(Kind::Var, Some(name), Vec::new(), span))
    }

    fn program(&mut self) -> PResult<Node> {
        let start = self.start();
        let children = if self.is_kw("func") {
            vec![self.func()?]
        } else {
            let mut stmts = Vec::new();
            while *self.peek() != Tok::Eof {
                stmts.push(self.stmt()?);
            }
            stmts
        };
        if *self.peek() != Tok::Eof {
            return self.error("expected end of input");
        }
        let end = self.tokens.last().map(|t| t.end).unwrap_or(start);
        let span = children.iter().fold(Span::new(start, end), |acc, c| acc.cover(&c.span));
        Ok(node(Kind::Program, None, children, span))
    }

    fn func(&mut self) -> PResult<Node> {
        let start = self.start();
        self.expect_kw("func")?;
        let (name, _) = self.ident()?;
        self.expect_sym("(")?;
        let mut children = Vec::new();
        if !self.is_sym(")") {
            loop {
                children.push(self.param()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        children.push(self.block()?);
        Ok(node(Kind::FuncDecl, Some(name), children, self.span_from(start)))
    }

    fn param(&mut self) -> PResult<Node> {
        let start = self.start();
        let var = self.var()?;
        let ty = if self.eat_sym(":") {
            let base = match self.peek() {
                Tok::Kw(k @ ("int" | "bool" | "str")) => *k,
                _ => return self.error("expected a type"),
            };
            self.bump();
            if base == "int" && self.is_sym("[") {
                self.bump();
                self.expect_sym("]")?;
                Some("int[]".to_owned())
            } else {
                Some(base.to_owned())
            }
        } else {
            None
        };
        Ok(node(Kind::Param, ty, vec![var], self.span_from(start)))
    }

    fn block(&mut self) -> PResult<Node> {
        let start = self.start();
        self.expect_sym("{")?;
        let mut stmts = Vec::new();
        while !self.is_sym("}") {
            if *self.peek() == Tok::Eof {
                return self.error("expected `}`");
            }
            stmts.push(self.stmt()?);
        }
        self.bump();
        Ok(node(Kind::Block, None, stmts, self.span_from(start)))
    }

    fn stmt(&mut self) -> PResult<Node> {
        let start = self.start();
        match self.peek() {
            Tok::Kw("var") => {
                let decl = self.decl()?;
                self.expect_sym(";")?;
                Ok(self.respan(decl, start))
            }
            Tok::Kw("if") => self.if_stmt(),
            Tok::Kw("while") => {
                self.bump();
                self.expect_sym("(")?;
                let cond = self.expr()?;
                self.expect_sym(")")?;
                let body = self.block()?;
                Ok(node(Kind::While, None, vec![cond, body], self.span_from(start)))
            }
            Tok::Kw("for") => self.for_stmt(),
            Tok::Kw("return") => {
                self.bump();
                let children = if self.is_sym(";") {
                    Vec::new()
                } else {
                    vec![self.expr()?]
                };
                self.expect_sym(";")?;
                Ok(node(Kind::Return, None, children, self.span_from(start)))
            }
            Tok::Kw("print") => {
                self.bump();
                self.expect_sym("(")?;
                let value = self.expr()?;
                self.expect_sym(")")?;
                self.expect_sym(";")?;
                Ok(node(Kind::Print, None, vec![value], self.span_from(start)))
            }
            _ => {
                let s = self.simple()?;
                self.expect_sym(";")?;
                Ok(self.respan(s, start))
            }
        }
    }

    fn respan(&self, mut n: Node, start: Pos) -> Node {
        n.span = self.span_from(start);
        n
    }

    fn decl(&mut self) -> PResult<Node> {
        let start = self.start();
        self.expect_kw("var")?;
        let mut children = vec![self.var()?];
        if self.eat_sym("=") {
            children.push(self.expr()?);
        }
        Ok(node(Kind::Decl, None, children, self.span_from(start)))
    }

    /// Assignment or expression statement, without the trailing `;`.
    fn simple(&mut self) -> PResult<Node> {
        let start = self.start();
        let target = self.expr()?;
        let aop = match self.peek() {
            Tok::Sym(s @ ("=" | "+=" | "-=" | "*=")) => *s,
            _ => return Ok(target),
        };
        if !matches!(target.kind(), Kind::Var | Kind::Index) {
            return self.error("invalid assignment target");
        }
        self.bump();
        let value = self.expr()?;
        Ok(node(
            Kind::Assign,
            Some(aop.to_owned()),
            vec![target, value],
            self.span_from(start),
        ))
    }

    fn assign_only(&mut self) -> PResult<Node> {
        let s = self.simple()?;
        if s.kind() == Kind::Assign {
            Ok(s)
        } else {
            Err(SyntaxError::new(s.span.start, "expected an assignment"))
        }
    }

    fn if_stmt(&mut self) -> PResult<Node> {
        let start = self.start();
        self.expect_kw("if")?;
        self.expect_sym("(")?;
        let cond = self.expr()?;
        self.expect_sym(")")?;
        let then = self.block()?;
        let mut children = vec![cond, then];
        if self.is_kw("else") {
            let else_start = self.start();
            self.bump();
            let inner = if self.is_kw("if") {
                self.if_stmt()?
            } else {
                self.block()?
            };
            children.push(node(Kind::Else, None, vec![inner], self.span_from(else_start)));
        }
        Ok(node(Kind::If, None, children, self.span_from(start)))
    }

    fn epsilon_here(&self) -> Node {
        let p = self.start();
        node(Kind::Epsilon, None, Vec::new(), Span::new(p, p))
    }

    fn for_stmt(&mut self) -> PResult<Node> {
        let start = self.start();
        self.expect_kw("for")?;
        self.expect_sym("(")?;
        let init = if self.is_sym(";") {
            self.epsilon_here()
        } else if self.is_kw("var") {
            self.decl()?
        } else {
            self.assign_only()?
        };
        self.expect_sym(";")?;
        let cond = if self.is_sym(";") {
            self.epsilon_here()
        } else {
            self.expr()?
        };
        self.expect_sym(";")?;
        let update = if self.is_sym(")") {
            self.epsilon_here()
        } else {
            self.assign_only()?
        };
        self.expect_sym(")")?;
        let body = self.block()?;
        Ok(node(
            Kind::For,
            None,
            vec![init, cond, update, body],
            self.span_from(start),
        ))
    }

    pub fn expr(&mut self) -> PResult<Node> {
        self.binary(1)
    }

    fn binop_here(&self) -> Option<BinOp> {
        match self.peek() {
            Tok::Sym(s) => BinOp::ALL.iter().copied().find(|op| op.symbol() == *s),
            _ => None,
        }
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Node> {
        let start = self.start();
        let mut lhs = self.unary()?;
        while let Some(op) = self.binop_here() {
            if op.precedence() < min_prec {
                break;
            }
            self.bump();
            let rhs = self.binary(op.precedence() + 1)?;
            lhs = node(Kind::BinOp(op), None, vec![lhs, rhs], self.span_from(start));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Node> {
        let start = self.start();
        let op = if self.is_sym("!") {
            Some(UnOp::Not)
        } else if self.is_sym("-") {
            Some(UnOp::Neg)
        } else {
            None
        };
        match op {
            Some(op) => {
                self.bump();
                let operand = self.unary()?;
                Ok(node(Kind::UnOp(op), None, vec![operand], self.span_from(start)))
            }
            None => self.postfix(),
        }
    }

    fn postfix(&mut self) -> PResult<Node> {
        let start = self.start();
        match self.peek().clone() {
            Tok::Ident(name) => {
                if matches!(self.peek_at(1), Tok::Sym("(")) {
                    self.bump();
                    self.bump();
                    let mut args = Vec::new();
                    if !self.is_sym(")") {
                        loop {
                            args.push(self.expr()?);
                            if !self.eat_sym(",") {
                                break;
                            }
                        }
                    }
                    self.expect_sym(")")?;
                    return Ok(node(Kind::Call, Some(name), args, self.span_from(start)));
                }
                let var = self.var()?;
                if self.eat_sym("[") {
                    let index = self.expr()?;
                    self.expect_sym("]")?;
                    return Ok(node(Kind::Index, None, vec![var, index], self.span_from(start)));
                }
                Ok(var)
            }
            Tok::Int(v) => {
                self.bump();
                Ok(node(
                    Kind::IntLit,
                    Some(v.to_string()),
                    Vec::new(),
                    self.span_from(start),
                ))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(node(Kind::StrLit, Some(s), Vec::new(), self.span_from(start)))
            }
            Tok::Kw(b @ ("true" | "false")) => {
                self.bump();
                Ok(node(
                    Kind::BoolLit,
                    Some(b.to_owned()),
                    Vec::new(),
                    self.span_from(start),
                ))
            }
            Tok::Sym("(") => {
                self.bump();
                let inner = self.expr()?;
                self.expect_sym(")")?;
                Ok(inner)
            }
            _ => self.error("expected an expression"),
        }
    }
}
