//! Recursive-descent parser for polynomial expressions over declared
//! variables. Multiplication is always explicit (`2*x`, never `2x`), `^`
//! takes a nonnegative integer literal, and coefficients may be arbitrarily
//! large. The declaration order of the variables fixes the coordinate order
//! of every exponent vector produced.

use num_bigint::BigInt;
use num_traits::Zero;

use super::IntegerPolynomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(text: &'a str) -> Result<Vec<(Token, usize)>> {
        let mut lx = Lexer {
            bytes: text.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        while let Some(tok) = lx.next_token()? {
            out.push(tok);
        }
        Ok(out)
    }

    fn next_token(&mut self) -> Result<Option<(Token, usize)>> {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.bytes.len() {
            return Ok(None);
        }
        let start = self.pos;
        let b = self.bytes[self.pos];
        let tok = match b {
            b'+' => {
                self.pos += 1;
                Token::Plus
            }
            b'-' => {
                self.pos += 1;
                Token::Minus
            }
            b'*' => {
                self.pos += 1;
                Token::Star
            }
            b'^' => {
                self.pos += 1;
                Token::Caret
            }
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.bytes.len() && self.bytes[end].is_ascii_digit() {
                    end += 1;
                }
                let digits = std::str::from_utf8(&self.bytes[self.pos..end]).unwrap();
                self.pos = end;
                Token::Int(digits.parse::<BigInt>().unwrap())
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut end = self.pos;
                while end < self.bytes.len()
                    && (self.bytes[end].is_ascii_alphanumeric() || self.bytes[end] == b'_')
                {
                    end += 1;
                }
                let name = std::str::from_utf8(&self.bytes[self.pos..end]).unwrap().to_string();
                self.pos = end;
                Token::Ident(name)
            }
            _ => {
                return Err(Error::Parse {
                    position: start,
                    message: format!("unexpected character {:?}", b as char),
                })
            }
        };
        Ok(Some((tok, start)))
    }
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    cursor: usize,
    vars: &'a [&'a str],
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Token, usize)> {
        self.tokens.get(self.cursor)
    }

    fn bump(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<IntegerPolynomial> {
        let nvars = self.vars.len();
        let mut negate = false;
        if let Some((tok, _)) = self.peek() {
            match tok {
                Token::Plus => {
                    self.bump();
                }
                Token::Minus => {
                    self.bump();
                    negate = true;
                }
                _ => {}
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some((tok, _)) = self.peek() {
            match tok {
                Token::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Token::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        let _ = nvars;
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntegerPolynomial> {
        let mut acc = self.factor()?;
        while let Some((Token::Star, _)) = self.peek() {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<IntegerPolynomial> {
        let base = self.atom()?;
        if let Some((Token::Caret, _)) = self.peek() {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some((Token::Int(k), _)) => {
                    let exp = u32::try_from(&k).map_err(|_| Error::Parse {
                        position: pos,
                        message: format!("exponent {k} out of range"),
                    })?;
                    return Ok(base.pow(exp));
                }
                Some((tok, p)) => {
                    return Err(Error::Parse {
                        position: p,
                        message: format!("exponent must be a nonnegative integer, got {tok:?}"),
                    })
                }
                None => {
                    return Err(Error::Parse {
                        position: pos,
                        message: "exponent must be a nonnegative integer".to_string(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntegerPolynomial> {
        let nvars = self.vars.len();
        let pos = self.here();
        match self.bump() {
            Some((Token::Int(n), _)) => Ok(IntegerPolynomial::constant(nvars, n)),
            Some((Token::Ident(name), p)) => {
                let Some(idx) = self.vars.iter().position(|v| *v == name) else {
                    return Err(Error::UnknownVariable { name, position: p });
                };
                Ok(IntegerPolynomial::variable(nvars, idx))
            }
            Some((Token::LParen, _)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((Token::RParen, _)) => Ok(inner),
                    other => Err(Error::Parse {
                        position: other.map(|(_, p)| p).unwrap_or(self.end),
                        message: "expected `)`".to_string(),
                    }),
                }
            }
            Some((tok, p)) => Err(Error::Parse {
                position: p,
                message: format!("expected a number, variable or `(`, got {tok:?}"),
            }),
            None => Err(Error::Parse {
                position: pos,
                message: "unexpected end of input".to_string(),
            }),
        }
    }
}

/// Parse an expression in the declared variables into expanded canonical
/// form. Implicit multiplication is a syntax error.
pub fn parse_polynomial(text: &str, variables: &[&str]) -> Result<IntegerPolynomial> {
    let tokens = Lexer::tokenize(text)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        vars: variables,
        end: text.len(),
    };
    let poly = parser.expr()?;
    if let Some((tok, p)) = parser.peek() {
        return Err(Error::Parse {
            position: *p,
            message: format!("expected an operator, got {tok:?}"),
        });
    }
    debug_assert!(poly.terms().all(|(_, c)| !c.is_zero()));
    Ok(poly)
}
