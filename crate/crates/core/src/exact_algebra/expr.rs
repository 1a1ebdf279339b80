//! Parser for polynomial expressions over a graded-commutative algebra.
//!
//! Grammar: sums of products, `*` for products, `^` for nonnegative powers,
//! rational literals (`3`, `-2/5`), parentheses, and identifiers resolved by the caller.
//! Products are taken in the written order, so Koszul signs follow the text.

use super::graded::{Elem, GcAlgebra};
use super::poly::MultiPoly;
use super::rational::Rational;
use super::ExactError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symbol {
    Var(usize),
    Gen(usize),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(num_bigint::BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, ExactError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push((Tok::Plus, col));
                i += 1
            }
            '-' => {
                out.push((Tok::Minus, col));
                i += 1
            }
            '*' => {
                out.push((Tok::Star, col));
                i += 1
            }
            '/' => {
                out.push((Tok::Slash, col));
                i += 1
            }
            '^' => {
                out.push((Tok::Caret, col));
                i += 1
            }
            '(' => {
                out.push((Tok::LParen, col));
                i += 1
            }
            ')' => {
                out.push((Tok::RParen, col));
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push((Tok::Num(text.parse().expect("digits")), col));
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.' || chars[i] == '\'') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            other => {
                return Err(ExactError::Parse {
                    column: col,
                    message: format!("unexpected character '{}'", other),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a, F: Fn(&str) -> Option<Symbol>> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    alg: &'a GcAlgebra,
    resolve: F,
    end_col: usize,
}

impl<'a, F: Fn(&str) -> Option<Symbol>> Parser<'a, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn err(&self, msg: impl Into<String>) -> ExactError {
        ExactError::Parse {
            column: self.col(),
            message: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<Elem, ExactError> {
        let mut acc = Elem::zero();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    false
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if negative { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Elem, ExactError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = self.alg.mul(&acc, &f);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(n)) if n != 0.into() => {
                            self.pos += 1;
                            acc = acc.scale(&Rational::new(1.into(), n));
                        }
                        _ => return Err(self.err("division is only allowed by a nonzero integer literal")),
                    }
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Elem, ExactError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    return Ok(self.alg.pow(&base, k));
                }
                _ => return Err(self.err("expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Elem, ExactError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Elem::scalar(Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                let col = self.col();
                self.pos += 1;
                match (self.resolve)(&name) {
                    Some(Symbol::Var(i)) => Ok(Elem::from_poly(MultiPoly::var(i))),
                    Some(Symbol::Gen(j)) => Ok(self.alg.gen(j)),
                    None => Err(ExactError::Parse {
                        column: col,
                        message: format!("unknown identifier '{}'", name),
                    }),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("expected ')'")),
                }
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.atom()?.neg())
            }
            _ => Err(self.err("expected a number, identifier or '('")),
        }
    }
}

/// Parses `text` into an element of `alg`, resolving identifiers with `resolve`.
pub fn parse_elem(alg: &GcAlgebra, text: &str, resolve: impl Fn(&str) -> Option<Symbol>) -> Result<Elem, ExactError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ExactError::Parse {
            column: 1,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        alg,
        resolve,
        end_col: text.chars().count() + 1,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses a polynomial in the coordinates `names`.
pub fn parse_poly(text: &str, names: &[String]) -> Result<MultiPoly, ExactError> {
    let alg = GcAlgebra::new(names.to_vec(), Vec::new());
    let e = parse_elem(&alg, text, |s| names.iter().position(|n| n == s).map(Symbol::Var))?;
    Ok(e.coeff(&[]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rational::qf;

    #[test]
    fn polynomials() {
        let names = vec!["x".to_string(), "y".to_string()];
        let p = parse_poly("3/2*x^2*y - 1/2 + (x+y)^2", &names).unwrap();
        let x = MultiPoly::var(0);
        let y = MultiPoly::var(1);
        let expect = x
            .pow(2)
            .mul(&y)
            .scale(&qf(3, 2))
            .sub(&MultiPoly::constant(qf(1, 2)))
            .add(&x.add(&y).pow(2));
        assert_eq!(p, expect);
    }

    #[test]
    fn errors_are_located() {
        let names = vec!["x".to_string()];
        match parse_poly("x + z", &names) {
            Err(ExactError::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{:?}", other),
        }
        assert!(parse_poly("x +", &names).is_err());
        assert!(parse_poly("x $ 1", &names).is_err());
    }
}
