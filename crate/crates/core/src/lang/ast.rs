use std::fmt;

/// Binary operator tags. Each tag is its own label kind for pattern counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

impl BinOp {
    pub const ALL: [BinOp; 13] = [
        BinOp::Or,
        BinOp::And,
        BinOp::Eq,
        BinOp::Ne,
        BinOp::Lt,
        BinOp::Le,
        BinOp::Gt,
        BinOp::Ge,
        BinOp::Add,
        BinOp::Sub,
        BinOp::Mul,
        BinOp::Div,
        BinOp::Mod,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Or => "||",
            BinOp::And => "&&",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
        }
    }

    /// Binding strength; larger binds tighter. All binary operators are left-associative.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul | BinOp::Div | BinOp::Mod => 6,
        }
    }

    fn ordinal(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnOp {
    Not,
    Neg,
}

impl UnOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnOp::Not => "!",
            UnOp::Neg => "-",
        }
    }
}

/// The finite label alphabet. Identifier names and literal values live in
/// [`Label::payload`] and never take part in pattern identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Program,
    FuncDecl,
    Param,
    Block,
    Assign,
    Decl,
    If,
    Else,
    While,
    For,
    Return,
    Print,
    Call,
    Index,
    BinOp(BinOp),
    UnOp(UnOp),
    Var,
    IntLit,
    BoolLit,
    StrLit,
    Epsilon,
}

const PLAIN_KINDS: [Kind; 19] = [
    Kind::Program,
    Kind::FuncDecl,
    Kind::Param,
    Kind::Block,
    Kind::Assign,
    Kind::Decl,
    Kind::If,
    Kind::Else,
    Kind::While,
    Kind::For,
    Kind::Return,
    Kind::Print,
    Kind::Call,
    Kind::Index,
    Kind::Var,
    Kind::IntLit,
    Kind::BoolLit,
    Kind::StrLit,
    Kind::Epsilon,
];

impl Kind {
    /// |L|: 19 plain kinds, 13 binary operator tags, 2 unary operator tags.
    pub const ALPHABET_SIZE: usize = 34;

    /// Dense index into the alphabet, `0..ALPHABET_SIZE`.
    pub fn index(self) -> usize {
        match self {
            Kind::BinOp(op) => PLAIN_KINDS.len() + op.ordinal(),
            Kind::UnOp(UnOp::Not) => PLAIN_KINDS.len() + 13,
            Kind::UnOp(UnOp::Neg) => PLAIN_KINDS.len() + 14,
            plain => PLAIN_KINDS.iter().position(|k| *k == plain).expect("plain kind listed"),
        }
    }

    pub fn from_index(index: usize) -> Option<Kind> {
        let plain = PLAIN_KINDS.len();
        match index {
            i if i < plain => Some(PLAIN_KINDS[i]),
            i if i < plain + 13 => Some(Kind::BinOp(BinOp::ALL[i - plain])),
            i if i == plain + 13 => Some(Kind::UnOp(UnOp::Not)),
            i if i == plain + 14 => Some(Kind::UnOp(UnOp::Neg)),
            _ => None,
        }
    }

    /// Control constructs contribute to the control-flow signature.
    pub fn is_control(self) -> bool {
        matches!(self, Kind::If | Kind::While | Kind::For)
    }

    pub fn is_expr(self) -> bool {
        matches!(
            self,
            Kind::Call
                | Kind::Index
                | Kind::BinOp(_)
                | Kind::UnOp(_)
                | Kind::Var
                | Kind::IntLit
                | Kind::BoolLit
                | Kind::StrLit
        )
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::BinOp(op) => write!(f, "BinOp({})", op.symbol()),
            Kind::UnOp(op) => write!(f, "UnOp({})", op.symbol()),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Label {
    pub kind: Kind,
    pub payload: Option<String>,
}

impl Label {
    pub fn new(kind: Kind) -> Self {
        Label { kind, payload: None }
    }

    pub fn with_payload(kind: Kind, payload: impl Into<String>) -> Self {
        Label {
            kind,
            payload: Some(payload.into()),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Some(p) => write!(f, "{} {p}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

impl Span {
    pub fn new(start: Pos, end: Pos) -> Self {
        Span { start, end }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn cover(&self, other: &Span) -> Span {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Node {
    pub label: Label,
    pub children: Vec<Node>,
    pub id: NodeId,
    pub span: Span,
}

impl Node {
    pub fn new(label: Label, children: Vec<Node>) -> Self {
        Node {
            label,
            children,
            id: NodeId::default(),
            span: Span::default(),
        }
    }

    pub fn leaf(kind: Kind, payload: impl Into<String>) -> Self {
        Node::new(Label::with_payload(kind, payload), Vec::new())
    }

    pub fn epsilon() -> Self {
        Node::new(Label::new(Kind::Epsilon), Vec::new())
    }

    pub fn kind(&self) -> Kind {
        self.label.kind
    }

    pub fn payload(&self) -> Option<&str> {
        self.label.payload.as_deref()
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Node::size).sum::<usize>()
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Node::depth).max().unwrap_or(0)
    }

    pub fn preorder(&self) -> Preorder<'_> {
        Preorder { stack: vec![self] }
    }

    pub fn find(&self, id: NodeId) -> Option<&Node> {
        self.preorder().find(|n| n.id == id)
    }

    /// Label- and shape-equality, ignoring node ids and spans.
    pub fn same_tree(&self, other: &Node) -> bool {
        self.label == other.label
            && self.children.len() == other.children.len()
            && self.children.iter().zip(&other.children).all(|(a, b)| a.same_tree(b))
    }

    pub fn is_var(&self, name: &str) -> bool {
        self.kind() == Kind::Var && self.payload() == Some(name)
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.preorder().any(|n| n.is_var(name))
    }

    pub fn rename_vars(&mut self, rename: &dyn Fn(&str) -> Option<String>) {
        if self.kind() == Kind::Var {
            if let Some(new) = self.payload().and_then(rename) {
                self.label.payload = Some(new);
            }
        }
        for child in &mut self.children {
            child.rename_vars(rename);
        }
    }

    /// Assigns fresh pre-order ids starting at `next`; returns the next free id.
    pub fn renumber_from(&mut self, next: u32) -> u32 {
        self.id = NodeId(next);
        let mut next = next + 1;
        for child in &mut self.children {
            next = child.renumber_from(next);
        }
        next
    }
}

pub struct Preorder<'a> {
    stack: Vec<&'a Node>,
}

impl<'a> Iterator for Preorder<'a> {
    type Item = &'a Node;

    fn next(&mut self) -> Option<&'a Node> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children.iter().rev());
        Some(node)
    }
}

/// A parsed MiniImp program. The root is always a `Program` node whose
/// children are either a single `FuncDecl` or a bare statement list.
#[derive(Debug, Clone)]
pub struct Ast {
    pub root: Node,
}

impl Ast {
    pub fn new(mut root: Node) -> Self {
        root.renumber_from(0);
        Ast { root }
    }

    pub fn size(&self) -> usize {
        self.root.size()
    }

    pub fn same_tree(&self, other: &Ast) -> bool {
        self.root.same_tree(&other.root)
    }

    pub fn entry(&self) -> Option<&Node> {
        self.root.children.first().filter(|n| n.kind() == Kind::FuncDecl)
    }

    /// Parameter names of the entry function, in order.
    pub fn params(&self) -> Vec<&str> {
        self.entry()
            .map(|f| {
                f.children
                    .iter()
                    .filter(|c| c.kind() == Kind::Param)
                    .filter_map(|p| p.children.first().and_then(Node::payload))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// The top-level statement container: the entry body block, or the root
    /// itself for script-form programs.
    pub fn body(&self) -> &Node {
        match self.entry() {
            Some(f) => f.children.last().expect("function has a body"),
            None => &self.root,
        }
    }

    /// Every variable name in the program (parameters included), sorted.
    pub fn vars(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .root
            .preorder()
            .filter(|n| n.kind() == Kind::Var)
            .filter_map(|n| n.payload().map(str::to_owned))
            .collect();
        names.sort();
        names.dedup();
        names
    }

    pub fn find(&self, id: NodeId) -> Option<&Node> {
        self.root.find(id)
    }

    pub fn rename_vars(&mut self, rename: &dyn Fn(&str) -> Option<String>) {
        self.root.rename_vars(rename);
    }
}
