use super::ast::Span;
use super::SyntaxError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Int(i64),
    Float(f64),
    Str(String),
    Ident(String),
    // keywords
    Let,
    In,
    Fun,
    Trans,
    As,
    Mod,
    True,
    False,
    SelfKw,
    // symbols
    Arrow,
    FatArrow,
    Eq,
    Lt,
    Gt,
    Plus,
    Minus,
    Star,
    Slash,
    PlusDot,
    MinusDot,
    StarDot,
    SlashDot,
    ColonColon,
    AndAnd,
    OrOr,
    Pipe,
    Comma,
    Semi,
    SemiSemi,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Float(x) => format!("float `{x:?}`"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Let => "let",
            Tok::In => "in",
            Tok::Fun => "fun",
            Tok::Trans => "trans",
            Tok::As => "as",
            Tok::Mod => "mod",
            Tok::True => "true",
            Tok::False => "false",
            Tok::SelfKw => "self",
            Tok::Arrow => "->",
            Tok::FatArrow => "=>",
            Tok::Eq => "=",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::PlusDot => "+.",
            Tok::MinusDot => "-.",
            Tok::StarDot => "*.",
            Tok::SlashDot => "/.",
            Tok::ColonColon => "::",
            Tok::AndAnd => "&&",
            Tok::OrOr => "||",
            Tok::Pipe => "|",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::SemiSemi => ";;",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Int(_) | Tok::Float(_) | Tok::Str(_) | Tok::Ident(_) | Tok::Eof => "",
        }
    }
}

pub const RESERVED: &[&str] = &["let", "in", "fun", "trans", "as", "mod", "true", "false", "self"];

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "let" => Tok::Let,
        "in" => Tok::In,
        "fun" => Tok::Fun,
        "trans" => Tok::Trans,
        "as" => Tok::As,
        "mod" => Tok::Mod,
        "true" => Tok::True,
        "false" => Tok::False,
        "self" => Tok::SelfKw,
        _ => return None,
    })
}

pub struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer { chars: src.chars().collect(), pos: 0, line: 1, col: 1, _src: src }
    }

    pub fn tokenize(mut self) -> Result<Vec<(Tok, Span)>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia()?;
            let span = Span::new(self.line, self.col);
            let Some(c) = self.peek() else {
                out.push((Tok::Eof, span));
                return Ok(out);
            };
            let tok = if c.is_ascii_digit() {
                self.number(span)?
            } else if c.is_alphabetic() || c == '_' {
                let word = self.take_while(|c| c.is_alphanumeric() || c == '_' || c == '\'');
                keyword(&word).unwrap_or(Tok::Ident(word))
            } else if c == '"' {
                self.string(span)?
            } else {
                self.symbol(span)?
            };
            out.push((tok, span));
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            s.push(c);
            self.bump();
        }
        s
    }

    fn skip_trivia(&mut self) -> Result<(), SyntaxError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('(') if self.peek_at(1) == Some('*') => self.comment()?,
                _ => return Ok(()),
            }
        }
    }

    /// Nested `(* ... *)` comment.
    fn comment(&mut self) -> Result<(), SyntaxError> {
        let start = Span::new(self.line, self.col);
        let mut depth = 0usize;
        loop {
            match (self.peek(), self.peek_at(1)) {
                (Some('('), Some('*')) => {
                    self.bump();
                    self.bump();
                    depth += 1;
                }
                (Some('*'), Some(')')) => {
                    self.bump();
                    self.bump();
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                (Some(_), _) => {
                    self.bump();
                }
                (None, _) => return Err(SyntaxError::new("unterminated comment", start)),
            }
        }
    }

    fn number(&mut self, span: Span) -> Result<Tok, SyntaxError> {
        let mut text = self.take_while(|c| c.is_ascii_digit());
        let is_float = self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit());
        if !is_float {
            return text
                .parse()
                .map(Tok::Int)
                .map_err(|_| SyntaxError::new(format!("integer literal `{text}` out of range"), span));
        }
        self.bump();
        text.push('.');
        text.push_str(&self.take_while(|c| c.is_ascii_digit()));
        if matches!(self.peek(), Some('e' | 'E')) {
            let sign = self.peek_at(1).filter(|c| matches!(c, '+' | '-'));
            let digit_at = if sign.is_some() { 2 } else { 1 };
            if self.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                text.push('e');
                self.bump();
                if let Some(s) = sign {
                    text.push(s);
                    self.bump();
                }
                text.push_str(&self.take_while(|c| c.is_ascii_digit()));
            }
        }
        text.parse().map(Tok::Float).map_err(|_| SyntaxError::new(format!("malformed float literal `{text}`"), span))
    }

    fn string(&mut self, span: Span) -> Result<Tok, SyntaxError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(SyntaxError::new("unterminated string literal", span)),
                Some('"') => return Ok(Tok::Str(s)),
                Some('\\') => {
                    let esc = self.bump();
                    s.push(match esc {
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('\\') => '\\',
                        Some('"') => '"',
                        _ => {
                            return Err(SyntaxError::new(
                                "unknown escape sequence in string literal",
                                Span::new(self.line, self.col),
                            ))
                        }
                    });
                }
                Some(c) => s.push(c),
            }
        }
    }

    fn symbol(&mut self, span: Span) -> Result<Tok, SyntaxError> {
        let c = self.peek().unwrap_or('\0');
        let next = self.peek_at(1);
        let (tok, len) = match (c, next) {
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('=', Some('>')) => (Tok::FatArrow, 2),
            (':', Some(':')) => (Tok::ColonColon, 2),
            ('&', Some('&')) => (Tok::AndAnd, 2),
            ('|', Some('|')) => (Tok::OrOr, 2),
            (';', Some(';')) => (Tok::SemiSemi, 2),
            ('+', Some('.')) => (Tok::PlusDot, 2),
            ('-', Some('.')) => (Tok::MinusDot, 2),
            ('*', Some('.')) => (Tok::StarDot, 2),
            ('/', Some('.')) => (Tok::SlashDot, 2),
            ('=', _) => (Tok::Eq, 1),
            ('<', _) => (Tok::Lt, 1),
            ('>', _) => (Tok::Gt, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            ('|', _) => (Tok::Pipe, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            _ => return Err(SyntaxError::new(format!("unexpected character `{c}`"), span)),
        };
        for _ in 0..len {
            self.bump();
        }
        Ok(tok)
    }
}
