//! Parser for the element string grammar.
//!
//! Elements are written as arithmetic expressions over integer literals
//! and the descriptor's named generators: `a` for a number-field or
//! finite-field generator, the function-field variable (usually `x`), and
//! the extension generator (usually `b`) for algebraic function fields.
//! Examples: `5/6`, `1/2*a^2 + 3`, `(x^2 - 1)/(x - 1)`, `(x+1)*b + (2/3)`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{FieldDescriptor, FieldElement};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
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

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad integer literal '{}'", text)))?;
                out.push(Token::Int(n));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character '{}' at position {}",
                    other, i
                )))
            }
        }
    }
    Ok(out)
}

/// Named generators visible in element expressions over `field`, with their
/// values embedded into the top field.
fn variables(field: &FieldDescriptor) -> Vec<(String, FieldElement)> {
    match field {
        FieldDescriptor::Rationals => Vec::new(),
        FieldDescriptor::NumberField { .. } => {
            vec![("a".to_string(), field.generator().unwrap())]
        }
        FieldDescriptor::FiniteField { .. } => match field.generator() {
            Some(g) => vec![("a".to_string(), g)],
            None => Vec::new(),
        },
        FieldDescriptor::FunctionField { base, var } => {
            let mut vars = vec![(var.clone(), field.generator().unwrap())];
            for (name, value) in variables(base) {
                // embed a base element as a constant rational function
                let embedded = FieldElement::RatFunc {
                    num: super::Polynomial::constant(value, base),
                    den: super::Polynomial::one(base),
                };
                vars.push((name, embedded));
            }
            vars
        }
        FieldDescriptor::AlgFunctionField { base, var, min_poly } => {
            let e = min_poly.len() - 1;
            let mut vars = vec![(var.clone(), field.generator().unwrap())];
            for (name, value) in variables(base) {
                let mut coords = vec![base.zero(); e];
                coords[0] = value;
                vars.push((name, FieldElement::AlgFunc(coords)));
            }
            vars
        }
    }
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    field: &'a Arc<FieldDescriptor>,
    vars: Vec<(String, FieldElement)>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_expr(&mut self, min_bp: u8) -> Result<FieldElement> {
        let mut lhs = self.parse_atom()?;
        loop {
            let (l_bp, r_bp) = match self.peek() {
                Some(Token::Plus) | Some(Token::Minus) => (1, 2),
                Some(Token::Star) | Some(Token::Slash) => (3, 4),
                _ => break,
            };
            if l_bp < min_bp {
                break;
            }
            let op = self.next().unwrap();
            let rhs = self.parse_expr(r_bp)?;
            lhs = match op {
                Token::Plus => self.field.add(&lhs, &rhs),
                Token::Minus => self.field.sub(&lhs, &rhs),
                Token::Star => self.field.mul(&lhs, &rhs),
                Token::Slash => self
                    .field
                    .div(&lhs, &rhs)
                    .map_err(|_| Error::Parse("division by zero in element expression".into()))?,
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn parse_atom(&mut self) -> Result<FieldElement> {
        let tok = self
            .next()
            .ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        let mut value = match tok {
            Token::Int(n) => self.field.from_bigint(&n),
            Token::Ident(name) => self
                .vars
                .iter()
                .find(|(v, _)| *v == name)
                .map(|(_, e)| e.clone())
                .ok_or_else(|| {
                    Error::Parse(format!("unknown symbol '{}' for field {}", name, self.field))
                })?,
            Token::Minus => {
                let inner = self.parse_expr(3)?;
                self.field.neg(&inner)
            }
            Token::LParen => {
                let inner = self.parse_expr(0)?;
                match self.next() {
                    Some(Token::RParen) => inner,
                    _ => return Err(Error::Parse("missing closing parenthesis".into())),
                }
            }
            other => {
                return Err(Error::Parse(format!("unexpected token {:?}", other)));
            }
        };
        while matches!(self.peek(), Some(Token::Caret)) {
            self.next();
            match self.next() {
                Some(Token::Int(e)) => {
                    let exp: u64 = e
                        .try_into()
                        .map_err(|_| Error::Parse("exponent must be a small non-negative integer".into()))?;
                    value = self.field.pow(&value, exp);
                }
                _ => return Err(Error::Parse("exponent must be an integer literal".into())),
            }
        }
        Ok(value)
    }
}

/// Parses an element expression and returns its canonical value in `field`.
pub fn parse_element(s: &str, field: &Arc<FieldDescriptor>) -> Result<FieldElement> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty element expression".into()));
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        field,
        vars: variables(field),
    };
    let value = parser.parse_expr(0)?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input after position {} in element expression",
            parser.pos
        )));
    }
    Ok(value)
}
