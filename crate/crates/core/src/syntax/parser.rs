use std::collections::BTreeSet;
use std::rc::Rc;

use super::ast::*;
use super::lexer::{Lexer, Tok, RESERVED};
use super::SyntaxError;

/// Operators that take a pattern variable as first argument and consult its
/// position rather than its value.
pub const POSITIONAL_OPS: &[&str] = &[
    "left", "right", "is_left", "is_right", "north", "south", "east", "west", "is_north", "is_south", "is_east",
    "is_west",
];

type PResult<T> = Result<T, SyntaxError>;

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    /// Number of enclosing rules; `self` is legal only when positive.
    rule_depth: usize,
}

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser { toks: Lexer::new(src).tokenize()?, pos: 0, rule_depth: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, what: &str) -> SyntaxError {
        SyntaxError::new(format!("expected {what}, found {}", self.peek().describe()), self.span())
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.advance();
                Ok(name)
            }
            tok => match reserved_word(&tok) {
                Some(word) => Err(SyntaxError::new(format!("reserved word `{word}` cannot be used as {what}"), span)),
                None => Err(self.unexpected(what)),
            },
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut items = Vec::new();
        while *self.peek() != Tok::Eof {
            items.push(self.item()?);
        }
        Ok(Program { items })
    }

    fn item(&mut self) -> PResult<Item> {
        if *self.peek() == Tok::Let {
            let span = self.span();
            self.advance();
            let name = self.ident("a binding name")?;
            self.expect(Tok::Eq, "`=`")?;
            let bound = self.expr()?;
            if self.eat(&Tok::In) {
                let body = self.expr()?;
                let e = Expr::new(ExprKind::Let(name, Box::new(bound), Box::new(body)), span);
                self.expect(Tok::SemiSemi, "`;;`")?;
                return Ok(Item::Expr(e));
            }
            self.expect(Tok::SemiSemi, "`;;` or `in`")?;
            return Ok(Item::Binding { name, expr: bound });
        }
        let e = self.expr()?;
        self.expect(Tok::SemiSemi, "`;;`")?;
        Ok(Item::Expr(e))
    }

    fn expr(&mut self) -> PResult<Expr> {
        let span = self.span();
        match self.peek() {
            Tok::Fun => {
                self.advance();
                let param = self.ident("a parameter name")?;
                self.expect(Tok::Arrow, "`->`")?;
                let body = self.expr()?;
                Ok(Expr::new(ExprKind::Fun(param, Box::new(body)), span))
            }
            Tok::Let => {
                self.advance();
                let name = self.ident("a binding name")?;
                self.expect(Tok::Eq, "`=`")?;
                let bound = self.expr()?;
                self.expect(Tok::In, "`in`")?;
                let body = self.expr()?;
                Ok(Expr::new(ExprKind::Let(name, Box::new(bound), Box::new(body)), span))
            }
            _ => self.or_expr(),
        }
    }

    fn or_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.and_expr()?;
        while *self.peek() == Tok::OrOr {
            let span = self.span();
            self.advance();
            let rhs = self.and_expr()?;
            lhs = Expr::binop("||", lhs, rhs, span);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.cmp_expr()?;
        while *self.peek() == Tok::AndAnd {
            let span = self.span();
            self.advance();
            let rhs = self.cmp_expr()?;
            lhs = Expr::binop("&&", lhs, rhs, span);
        }
        Ok(lhs)
    }

    fn cmp_expr(&mut self) -> PResult<Expr> {
        let lhs = self.cons_expr()?;
        let op = match self.peek() {
            Tok::Eq => "=",
            Tok::Lt => "<",
            Tok::Gt => ">",
            _ => return Ok(lhs),
        };
        let span = self.span();
        self.advance();
        let rhs = self.cons_expr()?;
        if matches!(self.peek(), Tok::Eq | Tok::Lt | Tok::Gt) {
            return Err(SyntaxError::new("comparison operators are not associative; add parentheses", self.span()));
        }
        Ok(Expr::binop(op, lhs, rhs, span))
    }

    fn cons_expr(&mut self) -> PResult<Expr> {
        let lhs = self.add_expr()?;
        if *self.peek() == Tok::ColonColon {
            let span = self.span();
            self.advance();
            let rhs = self.cons_expr()?;
            return Ok(Expr::binop("::", lhs, rhs, span));
        }
        Ok(lhs)
    }

    fn add_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.mul_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => "+",
                Tok::Minus => "-",
                Tok::PlusDot => "+.",
                Tok::MinusDot => "-.",
                _ => return Ok(lhs),
            };
            let span = self.span();
            self.advance();
            let rhs = self.mul_expr()?;
            lhs = Expr::binop(op, lhs, rhs, span);
        }
    }

    fn mul_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.app_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Star => "*",
                Tok::Slash => "/",
                Tok::Mod => "mod",
                Tok::StarDot => "*.",
                Tok::SlashDot => "/.",
                _ => return Ok(lhs),
            };
            let span = self.span();
            self.advance();
            let rhs = self.app_expr()?;
            lhs = Expr::binop(op, lhs, rhs, span);
        }
    }

    fn app_expr(&mut self) -> PResult<Expr> {
        if matches!(self.peek(), Tok::Fun | Tok::Let) {
            return self.expr();
        }
        let mut f = self.atom()?;
        while starts_atom(self.peek()) {
            let span = f.span;
            let arg = self.atom()?;
            f = Expr::app(f, arg, span);
        }
        Ok(f)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Int(n) => ExprKind::Const(Literal::Int(n)),
            Tok::Float(x) => ExprKind::Const(Literal::Float(x)),
            Tok::Str(s) => ExprKind::Const(Literal::Str(s)),
            Tok::True => ExprKind::Const(Literal::Bool(true)),
            Tok::False => ExprKind::Const(Literal::Bool(false)),
            Tok::Ident(name) => ExprKind::Var(name),
            Tok::SelfKw => {
                if self.rule_depth == 0 {
                    return Err(SyntaxError::new("`self` is only bound inside the rules of a transformation", span));
                }
                ExprKind::Var("self".to_string())
            }
            Tok::LParen => {
                self.advance();
                let first = self.expr()?;
                if self.eat(&Tok::Comma) {
                    let second = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Expr::new(ExprKind::Pair(Box::new(first), Box::new(second)), span));
                }
                self.expect(Tok::RParen, "`)` or `,`")?;
                return Ok(first);
            }
            Tok::LBracket => {
                // `[e]` is shorthand for `e :: empty_seq`
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RBracket, "`]`")?;
                return Ok(Expr::binop("::", e, Expr::var("empty_seq", span), span));
            }
            Tok::Trans => {
                self.advance();
                return self.trans(span);
            }
            _ => return Err(self.unexpected("an expression")),
        };
        self.advance();
        Ok(Expr::new(kind, span))
    }

    fn trans(&mut self, span: Span) -> PResult<Expr> {
        self.expect(Tok::LBracket, "`[` after `trans`")?;
        let mut rules = vec![self.rule()?];
        while self.eat(&Tok::Semi) {
            rules.push(self.rule()?);
        }
        self.expect(Tok::RBracket, "`;` or `]`")?;
        let last = rules.last().expect("at least one rule");
        if last.pattern.bare_var().is_none() {
            return Err(SyntaxError::new("the last rule of a transformation must be a bare variable pattern", span));
        }
        Ok(Expr::new(ExprKind::Trans(Rc::from(rules)), span))
    }

    fn rule(&mut self) -> PResult<Rule> {
        self.rule_depth += 1;
        let result = (|| {
            let pattern = self.pattern()?;
            self.expect(Tok::FatArrow, "`=>`")?;
            let body = self.expr()?;
            Ok(Rule { pattern, body })
        })();
        self.rule_depth -= 1;
        result
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        let start = self.span();
        let mut items = Vec::new();
        let mut link = None;
        loop {
            let elem_span = self.span();
            let elem = self.elem_pattern()?;
            if items.iter().any(|i: &PatternItem| i.elem.name() == elem.name()) {
                return Err(SyntaxError::new(format!("pattern variable `{}` is bound twice", elem.name()), elem_span));
            }
            items.push(PatternItem { link, elem });
            link = match self.peek() {
                Tok::Comma => {
                    self.advance();
                    Some(Link::Comma)
                }
                Tok::Pipe => {
                    self.advance();
                    let span = self.span();
                    let name = self.ident("a direction name")?;
                    let dir = Direction::from_name(&name)
                        .ok_or_else(|| SyntaxError::new(format!("unknown direction `{name}`"), span))?;
                    self.expect(Tok::Gt, "`>` closing the direction")?;
                    Some(Link::Direction(dir))
                }
                _ => break,
            };
        }
        if items.iter().all(|i| i.elem.is_star()) {
            return Err(SyntaxError::new("a pattern needs at least one element that is not a star", start));
        }
        Ok(Pattern { items })
    }

    fn elem_pattern(&mut self) -> PResult<ElemPattern> {
        if self.eat(&Tok::Star) {
            self.expect(Tok::As, "`as` after `*`")?;
            let name = self.ident("a pattern variable")?;
            if *self.peek() == Tok::Slash {
                return Err(SyntaxError::new("guard on star", self.span()));
            }
            return Ok(ElemPattern::Star(name));
        }
        let name = self.ident("a pattern variable")?;
        if self.eat(&Tok::Slash) {
            let guard = self.expr()?;
            return Ok(ElemPattern::Guarded(name, guard));
        }
        Ok(ElemPattern::Plain(name))
    }
}

fn reserved_word(tok: &Tok) -> Option<&'static str> {
    Some(match tok {
        Tok::Let => "let",
        Tok::In => "in",
        Tok::Fun => "fun",
        Tok::Trans => "trans",
        Tok::As => "as",
        Tok::Mod => "mod",
        Tok::True => "true",
        Tok::False => "false",
        Tok::SelfKw => "self",
        _ => return None,
    })
}

fn starts_atom(tok: &Tok) -> bool {
    matches!(
        tok,
        Tok::Int(_)
            | Tok::Float(_)
            | Tok::Str(_)
            | Tok::True
            | Tok::False
            | Tok::Ident(_)
            | Tok::SelfKw
            | Tok::LParen
            | Tok::LBracket
            | Tok::Trans
    )
}

pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

/// Parses a whole program of `;;`-terminated items.
pub fn parse_program(src: &str) -> PResult<Program> {
    parse_program_with(src, &BTreeSet::new())
}

/// Like [`parse_program`], with `globals` naming identifiers already bound by
/// earlier input (they shadow builtins for the positional-operator check).
pub fn parse_program_with(src: &str, globals: &BTreeSet<String>) -> PResult<Program> {
    let program = Parser::new(src)?.program()?;
    let mut shadowed = globals.clone();
    for item in &program.items {
        match item {
            Item::Binding { name, expr } => {
                check_positional(expr, &shadowed)?;
                shadowed.insert(name.clone());
            }
            Item::Expr(e) => check_positional(e, &shadowed)?,
        }
    }
    Ok(program)
}

/// Parses a single expression, optionally followed by `;;`.
pub fn parse_expr(src: &str) -> PResult<Expr> {
    parse_expr_with(src, &BTreeSet::new())
}

pub fn parse_expr_with(src: &str, globals: &BTreeSet<String>) -> PResult<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.eat(&Tok::SemiSemi);
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    check_positional(&e, globals)?;
    Ok(e)
}

/// Parses a standalone rule pattern. Guards may mention `self`.
pub fn parse_pattern(src: &str) -> PResult<Pattern> {
    let mut p = Parser::new(src)?;
    p.rule_depth = 1;
    let pat = p.pattern()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of pattern"));
    }
    Ok(pat)
}

/// Positional operators may only be applied to a pattern variable of an
/// enclosing rule. `shadowed` holds names bound outside rules.
pub fn check_positional(e: &Expr, shadowed: &BTreeSet<String>) -> PResult<()> {
    Scope { pattern_vars: Vec::new(), shadowed: shadowed.iter().cloned().collect() }.check(e)
}

#[derive(Clone)]
struct Scope {
    pattern_vars: Vec<String>,
    shadowed: Vec<String>,
}

impl Scope {
    fn is_positional(&self, name: &str) -> bool {
        POSITIONAL_OPS.contains(&name) && !self.shadowed.iter().any(|s| s == name)
    }

    fn bind(&self, name: &str) -> Scope {
        let mut s = self.clone();
        s.pattern_vars.retain(|v| v != name);
        s.shadowed.push(name.to_string());
        s
    }

    fn check(&self, e: &Expr) -> PResult<()> {
        match &e.kind {
            ExprKind::Var(name) if self.is_positional(name) => Err(SyntaxError::new(
                format!("`{name}` must be applied to a pattern variable inside a transformation"),
                e.span,
            )),
            ExprKind::Var(_) | ExprKind::Const(_) => Ok(()),
            ExprKind::App(f, arg) => {
                if let ExprKind::Var(op) = &f.kind {
                    if self.is_positional(op) {
                        return match &arg.kind {
                            ExprKind::Var(x) if self.pattern_vars.contains(x) => Ok(()),
                            _ => Err(SyntaxError::new(
                                format!("the first argument of `{op}` must be a pattern variable"),
                                arg.span,
                            )),
                        };
                    }
                }
                self.check(f)?;
                self.check(arg)
            }
            ExprKind::Pair(a, b) => {
                self.check(a)?;
                self.check(b)
            }
            ExprKind::Fun(x, body) => self.bind(x).check(body),
            ExprKind::Let(x, bound, body) => {
                self.check(bound)?;
                self.bind(x).check(body)
            }
            ExprKind::Trans(rules) => {
                for rule in rules.iter() {
                    // `self` is rebound by every transformation
                    let mut scope = self.bind("self");
                    scope.pattern_vars.clear();
                    for elem in rule.pattern.elems() {
                        scope = scope.bind(elem.name());
                        if !elem.is_star() {
                            scope.pattern_vars.push(elem.name().to_string());
                        }
                        if let Some(g) = elem.guard() {
                            scope.check(g)?;
                        }
                    }
                    scope.check(&rule.body)?;
                }
                Ok(())
            }
        }
    }
}
