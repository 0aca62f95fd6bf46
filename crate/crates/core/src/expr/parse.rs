//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)* ;
//! term   := factor (('*'|'/') factor)* ;
//! factor := ('-')? power ;
//! power  := atom ('^' factor)? ;        // right-associative
//! atom   := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')' ;
//! FUNC   := 'sin'|'cos'|'exp'|'ln'|'sqrt' ;
//! ```
//!
//! `^` binds tightest; unary minus binds below it, so `-x^2` is `-(x^2)`.
//! The exponent must reduce to a finite constant at parse time (it may be
//! written as e.g. `-0.5` or `(1/2)` but may not contain `x`).

use super::Expr;

/// Parse failure with the byte offset of the offending input and the set
/// of tokens that would have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {offset}: expected {}, found {found}", .expected.join(" | "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

const ATOM_STARTS: &[&str] = &["number", "x", "sin", "cos", "exp", "ln", "sqrt", "("];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    X,
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    offset: usize,
    text: String,
}

fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = tok {
            i += 1;
            toks.push(Spanned { tok, offset: start, text: c.to_string() });
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &input[start..i];
            let value: f64 = text.parse().map_err(|_| ParseError {
                offset: start,
                expected: vec!["number"],
                found: text.to_string(),
            })?;
            toks.push(Spanned { tok: Tok::Num(value), offset: start, text: text.to_string() });
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic() {
                i += 1;
            }
            let text = &input[start..i];
            let tok = match text {
                "x" => Tok::X,
                "sin" => Tok::Sin,
                "cos" => Tok::Cos,
                "exp" => Tok::Exp,
                "ln" => Tok::Ln,
                "sqrt" => Tok::Sqrt,
                _ => {
                    return Err(ParseError {
                        offset: start,
                        expected: ATOM_STARTS.to_vec(),
                        found: text.to_string(),
                    })
                }
            };
            toks.push(Spanned { tok, offset: start, text: text.to_string() });
            continue;
        }
        return Err(ParseError {
            offset: start,
            expected: ATOM_STARTS.to_vec(),
            found: c.to_string(),
        });
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: Tok) -> bool {
        if self.peek().map(|t| t.tok) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        match self.peek() {
            Some(t) => ParseError {
                offset: t.offset,
                expected: expected.to_vec(),
                found: t.text.clone(),
            },
            None => ParseError {
                offset: self.end,
                expected: expected.to_vec(),
                found: "end of input".to_string(),
            },
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(Tok::Plus) {
                let rhs = self.term()?;
                lhs = Expr::add(lhs, rhs);
            } else if self.eat(Tok::Minus) {
                let rhs = self.term()?;
                lhs = Expr::sub(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(Tok::Star) {
                let rhs = self.factor()?;
                lhs = Expr::mul(lhs, rhs);
            } else if self.eat(Tok::Slash) {
                let rhs = self.factor()?;
                lhs = Expr::div(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(Tok::Minus) {
            let inner = self.power()?;
            // A negated literal becomes a negative constant; anything else
            // is multiplication by -1 (printing restores the `-` form).
            return Ok(match inner {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::mul(Expr::Const(-1.0), other),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().map(|t| t.tok) != Some(Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let exp_offset = self.peek().map(|t| t.offset).unwrap_or(self.end);
        let exp_text = self.peek().map(|t| t.text.clone());
        let exponent = self.factor()?;
        match exponent.const_value() {
            Some(v) => Ok(Expr::pow(base, v)),
            None => Err(ParseError {
                offset: exp_offset,
                expected: vec!["constant exponent"],
                found: exp_text.unwrap_or_else(|| "end of input".to_string()),
            }),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.error(ATOM_STARTS)),
        };
        match t.tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Expr::Const(v))
            }
            Tok::X => {
                self.pos += 1;
                Ok(Expr::Var)
            }
            Tok::Sin | Tok::Cos | Tok::Exp | Tok::Ln | Tok::Sqrt => {
                self.pos += 1;
                if !self.eat(Tok::LParen) {
                    return Err(self.error(&["("]));
                }
                let arg = self.expr()?;
                if !self.eat(Tok::RParen) {
                    return Err(self.error(&[")"]));
                }
                Ok(match t.tok {
                    Tok::Sin => Expr::sin(arg),
                    Tok::Cos => Expr::cos(arg),
                    Tok::Exp => Expr::exp(arg),
                    Tok::Ln => Expr::ln(arg),
                    Tok::Sqrt => Expr::sqrt(arg),
                    _ => unreachable!(),
                })
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(Tok::RParen) {
                    return Err(self.error(&[")"]));
                }
                Ok(inner)
            }
            _ => Err(self.error(ATOM_STARTS)),
        }
    }
}

/// Parses `text` into an [`Expr`]. Whitespace between tokens is
/// insignificant.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.error(&["+", "-", "*", "/", "end of input"]));
    }
    Ok(e)
}
