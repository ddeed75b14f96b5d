//! Recursive-descent parser for even polynomials in `x`.
//!
//! ```text
//! expr  := named | term ('+' term)*
//! term  := number '*' power | power | number
//! power := 'x' '^' integer | 'x'
//! named := ident '(' number (',' number)* ')'
//! ```
//!
//! `^` binds tighter than `*`; whitespace is ignored. Positions in errors are
//! byte offsets into the source text.

use crate::error::{Error, Result};

use super::{Shape, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64, String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, pos: start });
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lexeme = &text[start..i];
            let value: f64 = lexeme
                .parse()
                .map_err(|_| syntax(start, format!("malformed number '{lexeme}'")))?;
            out.push(Token {
                tok: Tok::Number(value, lexeme.to_string()),
                pos: start,
            });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(text[start..i].to_string()),
                pos: start,
            });
        } else {
            let ch = text[start..].chars().next().unwrap_or('?');
            return Err(syntax(start, format!("unexpected character '{ch}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    at: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.at)
    }

    fn pos(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.at);
        self.at += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().map(|t| &t.tok) == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Shape> {
        if let (
            Some(Token {
                tok: Tok::Ident(name),
                pos,
            }),
            Some(Token {
                tok: Tok::LParen, ..
            }),
        ) = (self.tokens.first(), self.tokens.get(1))
        {
            return self.named(name, *pos);
        }
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                None => break,
                Some(Token { tok: Tok::Plus, .. }) => {
                    self.at += 1;
                    terms.push(self.term()?);
                }
                Some(Token {
                    tok: Tok::Minus,
                    pos,
                }) => {
                    return Err(Error::NegativeCoefficient { position: *pos });
                }
                Some(t) => return Err(syntax(t.pos, "expected '+' or end of input")),
            }
        }
        Ok(Shape::Polynomial(collect(terms)))
    }

    fn term(&mut self) -> Result<Term> {
        let pos = self.pos();
        match self.peek().map(|t| &t.tok) {
            Some(Tok::Minus) => Err(Error::NegativeCoefficient { position: pos }),
            Some(Tok::Number(value, _)) => {
                self.at += 1;
                if self.eat(&Tok::Star) {
                    let exponent = self.power()?;
                    Ok(Term {
                        coefficient: *value,
                        exponent,
                    })
                } else {
                    // a bare number is an x^0 term
                    Err(Error::BadExponent {
                        position: pos,
                        exponent: 0,
                    })
                }
            }
            Some(Tok::Ident(_)) => Ok(Term {
                coefficient: 1.0,
                exponent: self.power()?,
            }),
            Some(_) => Err(syntax(pos, "expected a number or 'x'")),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }

    fn power(&mut self) -> Result<u32> {
        let pos = self.pos();
        match self.bump().map(|t| &t.tok) {
            Some(Tok::Ident(name)) if name == "x" => {}
            Some(Tok::Ident(name)) => {
                return Err(Error::UnknownIdentifier {
                    position: pos,
                    name: name.clone(),
                })
            }
            _ => return Err(syntax(pos, "expected 'x'")),
        }
        if !self.eat(&Tok::Caret) {
            return Err(Error::BadExponent {
                position: pos,
                exponent: 1,
            });
        }
        let epos = self.pos();
        let negative = self.eat(&Tok::Minus);
        let exponent = match self.bump().map(|t| &t.tok) {
            Some(Tok::Number(_, lexeme)) if lexeme.bytes().all(|b| b.is_ascii_digit()) => lexeme
                .parse::<i64>()
                .map_err(|_| syntax(epos, format!("exponent '{lexeme}' out of range")))?,
            _ => return Err(syntax(epos, "expected an integer exponent")),
        };
        let exponent = if negative { -exponent } else { exponent };
        if exponent <= 0 || exponent % 2 != 0 || exponent > i32::MAX as i64 {
            return Err(Error::BadExponent {
                position: epos,
                exponent,
            });
        }
        Ok(exponent as u32)
    }

    fn named(&mut self, name: &str, pos: usize) -> Result<Shape> {
        self.at = 2;
        let mut args = Vec::new();
        loop {
            let apos = self.pos();
            if self.eat(&Tok::Minus) {
                return Err(Error::NegativeCoefficient { position: apos });
            }
            match self.bump().map(|t| &t.tok) {
                Some(Tok::Number(v, lexeme)) => args.push((*v, lexeme.clone(), apos)),
                _ => return Err(syntax(apos, "expected a numeric argument")),
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::RParen, "')'")?;
        if let Some(t) = self.peek() {
            return Err(syntax(t.pos, "trailing input after ')'"));
        }
        match (name, args.as_slice()) {
            ("harmonic", [(omega, _, _)]) => Ok(Shape::Harmonic { omega: *omega }),
            ("power", [(_, n, npos), (v0, _, _)]) => {
                let n: u32 = n
                    .parse()
                    .ok()
                    .filter(|n| *n >= 1 && *n <= (i32::MAX / 2) as u32)
                    .ok_or_else(|| {
                        syntax(
                            *npos,
                            format!("power order must be a positive integer, got '{n}'"),
                        )
                    })?;
                Ok(Shape::PowerLaw { n, v0: *v0 })
            }
            ("harmonic", _) => Err(syntax(pos, "harmonic takes one argument: harmonic(w)")),
            ("power", _) => Err(syntax(pos, "power takes two arguments: power(n, v0)")),
            _ => Err(Error::UnknownIdentifier {
                position: pos,
                name: name.to_string(),
            }),
        }
    }
}

/// Sums coefficients of equal exponents; result is sorted by exponent.
fn collect(terms: Vec<Term>) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.iter_mut().find(|o| o.exponent == t.exponent) {
            Some(o) => o.coefficient += t.coefficient,
            None => out.push(t),
        }
    }
    out.sort_by_key(|t| t.exponent);
    out
}

pub(super) fn parse_shape(text: &str) -> Result<Shape> {
    let tokens = lex(text)?;
    if tokens.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut parser = Parser {
        tokens: &tokens,
        at: 0,
        end: text.len(),
    };
    parser.expr()
}
