//! Text syntax for operators in the algebra K\[x,y\]<Dx,Dy>.
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' uint)?
//! base     := rational | 'x' | 'y' | 'Dx' | 'Dy' | '(' expr ')'
//! rational := uint ['/' uint]
//! ```
//!
//! Everything evaluates in the operator algebra, so `Dx*x` normalizes to
//! `x*Dx + 1` while `x*Dx` stays put, and the printed form of any operator
//! parses back to the same operator. `/` only joins two integer literals:
//! coefficients are exact rationals, never divisions of operators. Errors
//! carry the byte offset of the offending token.

use std::fmt;
use std::str::FromStr;

use biweyl::{Operator, Poly, Rational, Var};

/// Syntax error with the byte position where parsing stopped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, message: message.into() })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tok {
    Num,
    X,
    Y,
    Dx,
    Dy,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    kind: Tok,
    pos: usize,
    text: &'a str,
}

fn lex(src: &str) -> Result<Vec<Token<'_>>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let kind = match bytes[i] {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token { kind: Tok::Num, pos: start, text: &src[start..i] });
                continue;
            }
            b'D' => {
                if src[i..].starts_with("Dx") {
                    i += 2;
                    Tok::Dx
                } else if src[i..].starts_with("Dy") {
                    i += 2;
                    Tok::Dy
                } else {
                    return err(start, "expected `Dx` or `Dy` after `D`");
                }
            }
            b'x' => {
                i += 1;
                Tok::X
            }
            b'y' => {
                i += 1;
                Tok::Y
            }
            b'+' => {
                i += 1;
                Tok::Plus
            }
            b'-' => {
                i += 1;
                Tok::Minus
            }
            b'*' => {
                i += 1;
                Tok::Star
            }
            b'^' => {
                i += 1;
                Tok::Caret
            }
            b'/' => {
                i += 1;
                Tok::Slash
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            _ => {
                let c = src[start..].chars().next().unwrap();
                return err(start, format!("unexpected character `{c}`"));
            }
        };
        out.push(Token { kind, pos: start, text: &src[start..i] });
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token<'a>>,
    cursor: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok> {
        self.tokens.get(self.cursor).map(|t| t.kind)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.cursor).map_or(self.end, |t| t.pos)
    }

    fn advance(&mut self) -> Token<'a> {
        let t = self.tokens[self.cursor];
        self.cursor += 1;
        t
    }

    fn eat(&mut self, kind: Tok) -> bool {
        if self.peek() == Some(kind) {
            self.cursor += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Operator, ParseError> {
        let negate = self.eat(Tok::Minus);
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            if self.eat(Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Operator, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(Tok::Star) {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Operator, ParseError> {
        let base = self.base()?;
        if self.eat(Tok::Caret) {
            let e = self.exponent()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let pos = self.pos();
        if self.peek() != Some(Tok::Num) {
            return err(pos, "expected an integer exponent after `^`");
        }
        let tok = self.advance();
        tok.text
            .parse::<u32>()
            .or_else(|_| err(tok.pos, format!("exponent `{}` is out of range", tok.text)))
    }

    fn base(&mut self) -> Result<Operator, ParseError> {
        let pos = self.pos();
        let Some(kind) = self.peek() else {
            return err(pos, "expected a number, `x`, `y`, `Dx`, `Dy`, or `(`");
        };
        match kind {
            Tok::Num => {
                let numer = self.advance();
                let text = if self.eat(Tok::Slash) {
                    let dpos = self.pos();
                    if self.peek() != Some(Tok::Num) {
                        return err(dpos, "expected an integer denominator after `/`");
                    }
                    let denom = self.advance();
                    format!("{}/{}", numer.text, denom.text)
                } else {
                    numer.text.to_string()
                };
                match Rational::from_str(&text) {
                    Ok(q) => Ok(Operator::from_poly(Poly::constant(q))),
                    Err(e) => err(numer.pos, format!("bad rational `{text}`: {e}")),
                }
            }
            Tok::X => {
                self.advance();
                Ok(Operator::from_poly(Poly::var(Var::X)))
            }
            Tok::Y => {
                self.advance();
                Ok(Operator::from_poly(Poly::var(Var::Y)))
            }
            Tok::Dx => {
                self.advance();
                Ok(Operator::dx())
            }
            Tok::Dy => {
                self.advance();
                Ok(Operator::dy())
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                if !self.eat(Tok::RParen) {
                    return err(self.pos(), "expected `)`");
                }
                Ok(inner)
            }
            _ => err(pos, "expected a number, `x`, `y`, `Dx`, `Dy`, or `(`"),
        }
    }
}

/// Parse an operator expression.
pub fn parse_operator(src: &str) -> Result<Operator, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, cursor: 0, end: src.len() };
    let op = p.expr()?;
    if p.cursor != p.tokens.len() {
        return err(p.pos(), "unexpected trailing input");
    }
    Ok(op)
}
