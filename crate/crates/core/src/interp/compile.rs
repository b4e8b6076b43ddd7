//! Lowers an [`Ast`] into a slot-resolved tree that the executor walks.
//! Every executable site keeps a coverage slot pointing back at its node id.

use std::collections::HashMap;

use crate::lang::{Ast, BinOp, Kind, Node, NodeId, UnOp};

use super::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Builtin {
    Len,
    Array,
    Abs,
    Min,
    Max,
}

impl Builtin {
    fn lookup(name: &str) -> Option<Builtin> {
        match name {
            "len" => Some(Builtin::Len),
            "array" => Some(Builtin::Array),
            "abs" => Some(Builtin::Abs),
            "min" => Some(Builtin::Min),
            "max" => Some(Builtin::Max),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Expr {
    Lit(Value),
    Var(u32),
    Index(u32, Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Un(UnOp, Box<Expr>),
    Call(Builtin, Vec<Expr>),
    /// Unknown callee or malformed node; fails with a type mismatch when evaluated.
    Invalid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum AssignOp {
    Set,
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone)]
pub(crate) enum Target {
    Var(u32),
    Index(u32, Expr),
}

#[derive(Debug, Clone)]
pub(crate) struct Body {
    pub cov: u32,
    /// The `Else` node wrapping this block, if any.
    pub else_cov: Option<u32>,
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone)]
pub(crate) struct Stmt {
    pub cov: u32,
    pub kind: StmtKind,
}

#[derive(Debug, Clone)]
pub(crate) enum StmtKind {
    Decl(u32, Option<Expr>),
    Assign(Target, AssignOp, Expr),
    If {
        cond: Expr,
        cond_cov: u32,
        then: Body,
        els: Option<Body>,
    },
    While {
        cond: Expr,
        cond_cov: u32,
        body: Body,
    },
    For {
        init: Option<Box<Stmt>>,
        cond: Option<(Expr, u32)>,
        update: Option<Box<Stmt>>,
        /// Coverage slots of omitted header parts, marked when the loop starts.
        omitted: Vec<u32>,
        body: Body,
    },
    Return(Option<Expr>),
    Print(Expr),
    Eval(Expr),
    Block(Body),
}

#[derive(Debug, Clone)]
pub(crate) struct Param {
    pub slot: u32,
    pub ty: Option<String>,
}

/// An executable form of a program.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub(crate) params: Vec<Param>,
    pub(crate) body: Body,
    pub(crate) root_cov: u32,
    pub(crate) slots: usize,
    pub(crate) cov_ids: Vec<NodeId>,
}

impl Compiled {
    pub fn new(ast: &Ast) -> Compiled {
        let mut cx = Lowering::default();
        let root_cov = cx.cov(&ast.root);
        let mut params = Vec::new();
        if let Some(func) = ast.entry() {
            for p in func.children.iter().filter(|c| c.kind() == Kind::Param) {
                let name = p.children[0].payload().unwrap_or_default();
                params.push(Param {
                    slot: cx.slot(name),
                    ty: p.payload().map(str::to_owned),
                });
            }
        }
        let body = cx.body(ast.body());
        Compiled {
            params,
            body,
            root_cov,
            slots: cx.slots.len(),
            cov_ids: cx.cov_ids,
        }
    }
}

#[derive(Default)]
struct Lowering {
    slots: HashMap<String, u32>,
    cov_ids: Vec<NodeId>,
}

impl Lowering {
    fn slot(&mut self, name: &str) -> u32 {
        let next = self.slots.len() as u32;
        *self.slots.entry(name.to_owned()).or_insert(next)
    }

    fn cov(&mut self, node: &Node) -> u32 {
        self.cov_ids.push(node.id);
        (self.cov_ids.len() - 1) as u32
    }

    fn body(&mut self, container: &Node) -> Body {
        let cov = self.cov(container);
        let stmts = container.children.iter().map(|s| self.stmt(s)).collect();
        Body {
            cov,
            else_cov: None,
            stmts,
        }
    }

    fn stmt(&mut self, s: &Node) -> Stmt {
        let cov = self.cov(s);
        let kind = match s.kind() {
            Kind::Decl => {
                let slot = self.slot(s.children[0].payload().unwrap_or_default());
                StmtKind::Decl(slot, s.children.get(1).map(|e| self.expr(e)))
            }
            Kind::Assign => {
                let target = match s.children[0].kind() {
                    Kind::Index => {
                        let arr = self.slot(s.children[0].children[0].payload().unwrap_or_default());
                        Target::Index(arr, self.expr(&s.children[0].children[1]))
                    }
                    _ => Target::Var(self.slot(s.children[0].payload().unwrap_or_default())),
                };
                let op = match s.payload() {
                    Some("+=") => AssignOp::Add,
                    Some("-=") => AssignOp::Sub,
                    Some("*=") => AssignOp::Mul,
                    _ => AssignOp::Set,
                };
                StmtKind::Assign(target, op, self.expr(&s.children[1]))
            }
            Kind::If => {
                let cond_cov = self.cov(&s.children[0]);
                let cond = self.expr(&s.children[0]);
                let then = self.body(&s.children[1]);
                let els = s.children.get(2).map(|e| {
                    let inner = &e.children[0];
                    let else_cov = self.cov(e);
                    if inner.kind() == Kind::Block {
                        Body {
                            else_cov: Some(else_cov),
                            ..self.body(inner)
                        }
                    } else {
                        Body {
                            cov: else_cov,
                            else_cov: None,
                            stmts: vec![self.stmt(inner)],
                        }
                    }
                });
                StmtKind::If {
                    cond,
                    cond_cov,
                    then,
                    els,
                }
            }
            Kind::While => {
                let cond_cov = self.cov(&s.children[0]);
                StmtKind::While {
                    cond: self.expr(&s.children[0]),
                    cond_cov,
                    body: self.body(&s.children[1]),
                }
            }
            Kind::For => {
                let mut omitted = Vec::new();
                let init = match s.children[0].kind() {
                    Kind::Epsilon => {
                        omitted.push(self.cov(&s.children[0]));
                        None
                    }
                    _ => Some(Box::new(self.stmt(&s.children[0]))),
                };
                let cond = match s.children[1].kind() {
                    Kind::Epsilon => {
                        omitted.push(self.cov(&s.children[1]));
                        None
                    }
                    _ => {
                        let c = self.cov(&s.children[1]);
                        Some((self.expr(&s.children[1]), c))
                    }
                };
                let update = match s.children[2].kind() {
                    Kind::Epsilon => {
                        omitted.push(self.cov(&s.children[2]));
                        None
                    }
                    _ => Some(Box::new(self.stmt(&s.children[2]))),
                };
                StmtKind::For {
                    init,
                    cond,
                    update,
                    omitted,
                    body: self.body(&s.children[3]),
                }
            }
            Kind::Return => StmtKind::Return(s.children.first().map(|e| self.expr(e))),
            Kind::Print => StmtKind::Print(self.expr(&s.children[0])),
            Kind::Block => {
                // A nested block shares its node with the statement.
                self.cov_ids.pop();
                let b = self.body(s);
                return Stmt {
                    cov: b.cov,
                    kind: StmtKind::Block(b),
                };
            }
            _ => StmtKind::Eval(self.expr(s)),
        };
        Stmt { cov, kind }
    }

    fn expr(&mut self, e: &Node) -> Expr {
        match e.kind() {
            Kind::IntLit => e
                .payload()
                .and_then(|p| p.parse().ok())
                .map_or(Expr::Invalid, |v| Expr::Lit(Value::Int(v))),
            Kind::BoolLit => Expr::Lit(Value::Bool(e.payload() == Some("true"))),
            Kind::StrLit => Expr::Lit(Value::Str(e.payload().unwrap_or_default().to_owned())),
            Kind::Var => Expr::Var(self.slot(e.payload().unwrap_or_default())),
            Kind::Index if e.children.len() == 2 && e.children[0].kind() == Kind::Var => {
                let arr = self.slot(e.children[0].payload().unwrap_or_default());
                Expr::Index(arr, Box::new(self.expr(&e.children[1])))
            }
            Kind::BinOp(op) if e.children.len() == 2 => Expr::Bin(
                op,
                Box::new(self.expr(&e.children[0])),
                Box::new(self.expr(&e.children[1])),
            ),
            Kind::UnOp(op) if e.children.len() == 1 => Expr::Un(op, Box::new(self.expr(&e.children[0]))),
            Kind::Call => match e.payload().and_then(Builtin::lookup) {
                Some(b) => Expr::Call(b, e.children.iter().map(|a| self.expr(a)).collect()),
                None => Expr::Invalid,
            },
            _ => Expr::Invalid,
        }
    }
}
