//! Text syntax for polynomials.
//!
//! Grammar (whitespace insignificant, no implicit multiplication):
//!
//! ```text
//! expr   := [-] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' integer)?
//! base   := integer ('/' integer)? | identifier | '(' expr ')' | '-' base
//! ```
//!
//! Identifiers must match a ring variable; integers are unbounded; `a/b`
//! rational literals require both sides to be integer literals. Every error
//! carries the byte offset where parsing failed.

use super::{Polynomial, Rational, Ring};
use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::Arc;

/// A parse failure, with the byte offset into the input where it occurred.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } => *offset,
            ParseError::UnknownVariable { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token plus the byte offset where it starts.
    fn next(&mut self) -> Result<Option<(Tok, usize)>, ParseError> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let b = self.src[self.pos];
        let tok = match b {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'/' => {
                self.pos += 1;
                Tok::Slash
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Tok::Int(text.parse::<BigInt>().unwrap())
            }
            b'_' | b'a'..=b'z' | b'A'..=b'Z' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos] == b'_' || self.src[self.pos].is_ascii_alphanumeric())
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Tok::Ident(text.to_string())
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        };
        Ok(Some((tok, start)))
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    end: usize,
    ring: &'a Arc<Ring>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.idx)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut negate_first = false;
        if let Some((Tok::Minus, _)) = self.peek() {
            self.bump();
            negate_first = true;
        }
        let mut acc = self.term()?;
        if negate_first {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some((Tok::Plus, _)) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some((Tok::Minus, _)) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while let Some((Tok::Star, _)) = self.peek() {
            self.bump();
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.base()?;
        if let Some((Tok::Caret, _)) = self.peek() {
            self.bump();
            let off = self.here();
            match self.bump() {
                Some((Tok::Int(e), _)) => {
                    let e = u32::try_from(&e).map_err(|_| ParseError::Syntax {
                        offset: off,
                        message: "exponent too large".into(),
                    })?;
                    Ok(base.pow(e))
                }
                _ => Err(ParseError::Syntax {
                    offset: off,
                    message: "`^` must be followed by a non-negative integer literal".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        let off = self.here();
        match self.bump() {
            Some((Tok::Int(n), _)) => {
                // Optional `/ integer` forms an exact rational literal.
                if let Some((Tok::Slash, _)) = self.peek() {
                    self.bump();
                    let doff = self.here();
                    match self.bump() {
                        Some((Tok::Int(d), _)) => {
                            if d.is_zero() {
                                return Err(ParseError::Syntax {
                                    offset: doff,
                                    message: "zero denominator".into(),
                                });
                            }
                            Ok(Polynomial::constant(self.ring, Rational::new(n, d)))
                        }
                        _ => Err(ParseError::Syntax {
                            offset: doff,
                            message: "`/` must sit between two integer literals".into(),
                        }),
                    }
                } else {
                    Ok(Polynomial::constant(self.ring, Rational::from(n)))
                }
            }
            Some((Tok::Ident(name), o)) => match self.ring.var_index(&name) {
                Some(i) => Ok(Polynomial::variable(self.ring, i)),
                None => Err(ParseError::UnknownVariable { offset: o, name }),
            },
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    other => Err(ParseError::Syntax {
                        offset: other.map(|(_, o)| o).unwrap_or(self.end),
                        message: "expected `)`".into(),
                    }),
                }
            }
            Some((Tok::Minus, _)) => {
                let inner = self.base()?;
                Ok(-&inner)
            }
            _ => Err(ParseError::Syntax {
                offset: off,
                message: "expected a number, variable, or parenthesized expression".into(),
            }),
        }
    }
}

/// Parses `text` as a polynomial over `ring`.
pub fn parse_polynomial(text: &str, ring: &Arc<Ring>) -> Result<Polynomial, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    while let Some(t) = lexer.next()? {
        toks.push(t);
    }
    let mut parser = Parser { toks, idx: 0, end: text.len(), ring };
    let poly = parser.expr()?;
    if let Some((tok, off)) = parser.peek() {
        return Err(ParseError::Syntax {
            offset: *off,
            message: format!("unexpected trailing token {tok:?} (note: multiplication must be explicit)"),
        });
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn ring() -> Arc<Ring> {
        Ring::new(["x1", "x2", "x3"])
    }

    #[test]
    fn parses_spec_shapes() {
        let r = ring();
        let p = parse_polynomial("x1^2 - x2", &r).unwrap();
        assert_eq!(p.to_string(), "x1^2 - x2");
        let z = parse_polynomial("0", &r).unwrap();
        assert!(z.is_zero());
        let q = parse_polynomial("3/2*x1*x3 + x2^2", &r).unwrap();
        assert_eq!(q.num_terms(), 2);
        let lead = q.terms().find(|(m, _)| m.exps() == [1, 0, 1]).unwrap();
        assert_eq!(lead.1, &rat(3, 2));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let r = ring();
        let err = parse_polynomial("2x1", &r).unwrap_err();
        match err {
            ParseError::Syntax { offset, .. } => assert_eq!(offset, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_variable_is_named() {
        let r = ring();
        let err = parse_polynomial("x1 + y7", &r).unwrap_err();
        match err {
            ParseError::UnknownVariable { offset, name } => {
                assert_eq!(offset, 5);
                assert_eq!(name, "y7");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_byte_offsets() {
        let r = ring();
        let err = parse_polynomial("x1 + ", &r).unwrap_err();
        assert_eq!(err.offset(), 5);
        let err = parse_polynomial("x1 ^ x2", &r).unwrap_err();
        assert_eq!(err.offset(), 5);
        let err = parse_polynomial("(x1 + x2", &r).unwrap_err();
        assert_eq!(err.offset(), 8);
    }

    #[test]
    fn unary_minus_and_parens() {
        let r = ring();
        assert_eq!(
            parse_polynomial("-x1 + 1", &r).unwrap(),
            parse_polynomial("1 - x1", &r).unwrap()
        );
        assert_eq!(
            parse_polynomial("(x1 + x2)^2", &r).unwrap(),
            parse_polynomial("x1^2 + 2*x1*x2 + x2^2", &r).unwrap()
        );
        assert_eq!(
            parse_polynomial("2*-x1", &r).unwrap(),
            parse_polynomial("-2*x1", &r).unwrap()
        );
    }

    #[test]
    fn whitespace_is_insignificant() {
        let r = ring();
        assert_eq!(
            parse_polynomial(" x1 ^2\t-  x2 ", &r).unwrap(),
            parse_polynomial("x1^2-x2", &r).unwrap()
        );
    }
}
