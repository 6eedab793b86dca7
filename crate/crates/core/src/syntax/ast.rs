use std::fmt;
use std::rc::Rc;

/// 1-based source location of a token or expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
}

/// An expression together with the location it was parsed from.
///
/// Equality ignores spans so that re-parsed pretty-printed programs compare
/// equal to their originals.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Var(String),
    Const(Literal),
    Pair(Box<Expr>, Box<Expr>),
    Fun(String, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Let(String, Box<Expr>, Box<Expr>),
    /// Rules are shared with the runtime transformation values built from them.
    Trans(Rc<[Rule]>),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    pub fn var(name: impl Into<String>, span: Span) -> Self {
        Expr::new(ExprKind::Var(name.into()), span)
    }

    pub fn app(f: Expr, arg: Expr, span: Span) -> Self {
        Expr::new(ExprKind::App(Box::new(f), Box::new(arg)), span)
    }

    /// `op a b`, the desugaring of an infix operator.
    pub fn binop(op: &str, lhs: Expr, rhs: Expr, span: Span) -> Self {
        let f = Expr::app(Expr::var(op, span), lhs, span);
        Expr::app(f, rhs, span)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub pattern: Pattern,
    pub body: Expr,
}

/// A path pattern: elementary patterns joined by comma or direction links.
/// The first item never has an incoming link.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub items: Vec<PatternItem>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternItem {
    pub link: Option<Link>,
    pub elem: ElemPattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    Comma,
    Direction(Direction),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ElemPattern {
    Plain(String),
    Guarded(String, Expr),
    Star(String),
}

impl ElemPattern {
    pub fn name(&self) -> &str {
        match self {
            ElemPattern::Plain(n) | ElemPattern::Guarded(n, _) | ElemPattern::Star(n) => n,
        }
    }

    pub fn guard(&self) -> Option<&Expr> {
        match self {
            ElemPattern::Guarded(_, g) => Some(g),
            _ => None,
        }
    }

    pub fn is_star(&self) -> bool {
        matches!(self, ElemPattern::Star(_))
    }
}

impl Pattern {
    pub fn elems(&self) -> impl Iterator<Item = &ElemPattern> {
        self.items.iter().map(|i| &i.elem)
    }

    /// The single unguarded variable of a default rule, if this is one.
    pub fn bare_var(&self) -> Option<&str> {
        match self.items.as_slice() {
            [PatternItem { elem: ElemPattern::Plain(n), .. }] => Some(n),
            _ => None,
        }
    }
}

/// Topology-specific neighborhood operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
    North,
    South,
    East,
    West,
}

impl Direction {
    pub const ALL: [Direction; 6] =
        [Direction::Left, Direction::Right, Direction::North, Direction::South, Direction::East, Direction::West];

    pub fn from_name(name: &str) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| d.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Left => "left",
            Direction::Right => "right",
            Direction::North => "north",
            Direction::South => "south",
            Direction::East => "east",
            Direction::West => "west",
        }
    }

    pub fn is_seq(self) -> bool {
        matches!(self, Direction::Left | Direction::Right)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Binding { name: String, expr: Expr },
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub items: Vec<Item>,
}
