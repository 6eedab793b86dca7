//! Concrete syntax: lexer, parser, abstract syntax and printer.

mod ast;
mod lexer;
mod parser;
mod pretty;

use std::fmt;

pub use ast::*;
pub use parser::{
    check_positional, is_reserved, parse_expr, parse_expr_with, parse_pattern, parse_program, parse_program_with,
    POSITIONAL_OPS,
};
pub use pretty::{float_text, quote_str};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SyntaxError {
    pub message: String,
    pub span: Span,
}

impl SyntaxError {
    pub fn new(message: impl Into<String>, span: Span) -> Self {
        SyntaxError { message: message.into(), span }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at {}: {}", self.span, self.message)
    }
}
