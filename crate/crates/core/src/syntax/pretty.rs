//! Printing of the abstract syntax back to parseable source.

use std::fmt::{self, Write};

use super::ast::*;

const LVL_TOP: u8 = 0;
const LVL_OR: u8 = 1;
const LVL_AND: u8 = 2;
const LVL_CMP: u8 = 3;
const LVL_CONS: u8 = 4;
const LVL_ADD: u8 = 5;
const LVL_MUL: u8 = 6;
const LVL_APP: u8 = 7;
const LVL_ATOM: u8 = 8;

enum Assoc {
    Left,
    Right,
    None,
}

fn infix(op: &str) -> Option<(u8, Assoc)> {
    Some(match op {
        "||" => (LVL_OR, Assoc::Left),
        "&&" => (LVL_AND, Assoc::Left),
        "=" | "<" | ">" => (LVL_CMP, Assoc::None),
        "::" => (LVL_CONS, Assoc::Right),
        "+" | "-" | "+." | "-." => (LVL_ADD, Assoc::Left),
        "*" | "/" | "mod" | "*." | "/." => (LVL_MUL, Assoc::Left),
        _ => return None,
    })
}

fn as_infix(e: &Expr) -> Option<(&str, &Expr, &Expr)> {
    let ExprKind::App(f, rhs) = &e.kind else { return None };
    let ExprKind::App(op, lhs) = &f.kind else { return None };
    let ExprKind::Var(op) = &op.kind else { return None };
    infix(op).map(|_| (op.as_str(), &**lhs, &**rhs))
}

fn write_expr(out: &mut String, e: &Expr, ctx: u8) {
    if let Some((op, lhs, rhs)) = as_infix(e) {
        let (lvl, assoc) = infix(op).expect("infix operator");
        let (l, r) = match assoc {
            Assoc::Left => (lvl, lvl + 1),
            Assoc::Right => (lvl + 1, lvl),
            Assoc::None => (lvl + 1, lvl + 1),
        };
        paren(out, lvl < ctx, |out| {
            write_expr(out, lhs, l);
            let _ = write!(out, " {op} ");
            write_expr(out, rhs, r);
        });
        return;
    }
    match &e.kind {
        ExprKind::Var(name) => out.push_str(name),
        ExprKind::Const(lit) => write_literal(out, lit),
        ExprKind::Pair(a, b) => {
            out.push('(');
            write_expr(out, a, LVL_TOP);
            out.push_str(", ");
            write_expr(out, b, LVL_TOP);
            out.push(')');
        }
        ExprKind::App(f, arg) => paren(out, LVL_APP < ctx, |out| {
            write_expr(out, f, LVL_APP);
            out.push(' ');
            write_expr(out, arg, LVL_ATOM);
        }),
        ExprKind::Fun(x, body) => paren(out, ctx > LVL_TOP, |out| {
            let _ = write!(out, "fun {x} -> ");
            write_expr(out, body, LVL_TOP);
        }),
        ExprKind::Let(x, bound, body) => paren(out, ctx > LVL_TOP, |out| {
            let _ = write!(out, "let {x} = ");
            write_expr(out, bound, LVL_TOP);
            out.push_str(" in ");
            write_expr(out, body, LVL_TOP);
        }),
        ExprKind::Trans(rules) => {
            out.push_str("trans [ ");
            for (i, rule) in rules.iter().enumerate() {
                if i > 0 {
                    out.push_str(" ; ");
                }
                write_pattern(out, &rule.pattern);
                out.push_str(" => ");
                write_expr(out, &rule.body, LVL_TOP);
            }
            out.push_str(" ]");
        }
    }
}

fn paren(out: &mut String, wrap: bool, body: impl FnOnce(&mut String)) {
    if wrap {
        out.push('(');
    }
    body(out);
    if wrap {
        out.push(')');
    }
}

fn write_literal(out: &mut String, lit: &Literal) {
    match lit {
        Literal::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Literal::Float(x) => out.push_str(&float_text(*x)),
        Literal::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Literal::Str(s) => out.push_str(&quote_str(s)),
    }
}

/// Float text that always contains a decimal point.
pub fn float_text(x: f64) -> String {
    let s = format!("{x:?}");
    if s.contains('.') || !x.is_finite() {
        return s;
    }
    match s.find('e') {
        Some(i) => format!("{}.0{}", &s[..i], &s[i..]),
        None => format!("{s}.0"),
    }
}

pub fn quote_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn write_pattern(out: &mut String, p: &Pattern) {
    for item in &p.items {
        match item.link {
            None => {}
            Some(Link::Comma) => out.push_str(", "),
            Some(Link::Direction(d)) => {
                let _ = write!(out, " |{d}> ");
            }
        }
        match &item.elem {
            ElemPattern::Plain(x) => out.push_str(x),
            ElemPattern::Star(x) => {
                let _ = write!(out, "* as {x}");
            }
            ElemPattern::Guarded(x, g) => {
                let _ = write!(out, "{x}/");
                write_expr(out, g, LVL_ATOM);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self, LVL_TOP);
        f.write_str(&s)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_pattern(&mut s, self);
        f.write_str(&s)
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Binding { name, expr } => write!(f, "let {name} = {expr};;"),
            Item::Expr(e) => write!(f, "{e};;"),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(f, "{item}")?;
        }
        Ok(())
    }
}
