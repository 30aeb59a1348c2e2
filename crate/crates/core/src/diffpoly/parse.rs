//! Parser for the textual polynomial/operator syntax.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := power (('*'|'/')? power)*        juxtaposition multiplies
//! power   := postfix ('^' exponent)?
//! postfix := primary "'"*                      primes differentiate
//! primary := number | ident ['^(' n ')'] | '(' expr ')'
//! ```
//!
//! `u^(k)` directly after a field name is the k-th derivative (as in `u^{(k)}`);
//! any other `^` is a power. `D` is reserved for the operator `∂` and accepts
//! negative exponents, e.g. `D^-1` or `D^(-2)`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{DiffPoly, FieldRegistry, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    /// Field name with derivative order.
    Jet(String, u32),
    /// The operator `∂`.
    D,
    Add(Vec<Expr>),
    Neg(Box<Expr>),
    Mul(Vec<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Deriv(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Prime,
    Caret,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
                continue;
            }
            'a'..='z' | 'A'..='Z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            '\'' => out.push((i, Tok::Prime)),
            '^' => out.push((i, Tok::Caret)),
            '(' | '{' => out.push((i, Tok::LParen)),
            ')' | '}' => out.push((i, Tok::RParen)),
            '+' => out.push((i, Tok::Plus)),
            '-' => out.push((i, Tok::Minus)),
            '*' => out.push((i, Tok::Star)),
            '/' => out.push((i, Tok::Slash)),
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let first_neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let t = self.term()?;
        terms.push(if first_neg { Expr::Neg(Box::new(t)) } else { t });
        loop {
            if self.eat(&Tok::Plus) {
                terms.push(self.term()?);
            } else if self.eat(&Tok::Minus) {
                terms.push(Expr::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Add(terms)
        })
    }

    fn starts_primary(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.power()?;
        loop {
            if self.eat(&Tok::Star) {
                let rhs = self.power()?;
                acc = mul(acc, rhs);
            } else if self.eat(&Tok::Slash) {
                let rhs = self.power()?;
                acc = Expr::Div(Box::new(acc), Box::new(rhs));
            } else if self.starts_primary() {
                let rhs = self.power()?;
                acc = mul(acc, rhs);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat(&Tok::LParen);
        let neg = self.eat(&Tok::Minus);
        let n = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                n
            }
            _ => return self.err("expected integer exponent"),
        };
        if paren && !self.eat(&Tok::RParen) {
            return self.err("expected ')'");
        }
        let n = n.to_i64().ok_or_else(|| Error::Parse {
            pos: self.offset(),
            msg: "exponent too large".into(),
        })?;
        Ok(if neg { -n } else { n })
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.postfix()?;
        if self.eat(&Tok::Caret) {
            let e = self.exponent()?;
            if e < 0 && base != Expr::D {
                return self.err("negative exponents are only allowed on D");
            }
            Ok(Expr::Pow(Box::new(base), e))
        } else {
            Ok(base)
        }
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut base = self.primary()?;
        let mut primes = 0;
        while self.eat(&Tok::Prime) {
            primes += 1;
        }
        if primes > 0 {
            base = match base {
                Expr::Jet(name, k) => Expr::Jet(name, k + primes),
                Expr::D => return self.err("cannot differentiate D"),
                other => Expr::Deriv(Box::new(other), primes),
            };
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "D" {
                    return Ok(Expr::D);
                }
                // `u^(k)` is a derivative, not a power
                if self.peek() == Some(&Tok::Caret)
                    && self.peek_at(1) == Some(&Tok::LParen)
                    && matches!(self.peek_at(2), Some(Tok::Num(_)))
                    && self.peek_at(3) == Some(&Tok::RParen)
                {
                    let Some(Tok::Num(k)) = self.peek_at(2).cloned() else {
                        unreachable!()
                    };
                    self.pos += 4;
                    let k = k.to_u32().ok_or_else(|| Error::Parse {
                        pos: self.offset(),
                        msg: "derivative order too large".into(),
                    })?;
                    return Ok(Expr::Jet(name, k));
                }
                Ok(Expr::Jet(name, 0))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match a {
        Expr::Mul(mut v) => {
            v.push(b);
            Expr::Mul(v)
        }
        a => Expr::Mul(vec![a, b]),
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Evaluates in the commutative coefficient ring; `D` is rejected.
    pub fn to_diffpoly(&self, registry: &FieldRegistry) -> Result<DiffPoly> {
        Ok(match self {
            Expr::Num(c) => DiffPoly::constant(c.clone()),
            Expr::Jet(name, k) => DiffPoly::jet(registry.field(name)?.jet(*k)),
            Expr::D => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: "operator D in a polynomial".into(),
                })
            }
            Expr::Add(v) => {
                let mut acc = DiffPoly::zero();
                for e in v {
                    acc += e.to_diffpoly(registry)?;
                }
                acc
            }
            Expr::Neg(e) => -e.to_diffpoly(registry)?,
            Expr::Mul(v) => {
                let mut acc = DiffPoly::one();
                for e in v {
                    acc = &acc * &e.to_diffpoly(registry)?;
                }
                acc
            }
            Expr::Div(a, b) => {
                let num = a.to_diffpoly(registry)?;
                let den = b.to_diffpoly(registry)?;
                match den.as_constant() {
                    Some(c) if !c.is_zero() => num.scale(&c.recip()),
                    _ => {
                        return Err(Error::Parse {
                            pos: 0,
                            msg: "division by a non-constant or zero".into(),
                        })
                    }
                }
            }
            Expr::Pow(b, e) => {
                debug_assert!(!e.is_negative());
                b.to_diffpoly(registry)?.pow(*e as u32)
            }
            Expr::Deriv(e, k) => e.to_diffpoly(registry)?.nth_derivative(*k),
        })
    }

    pub fn mentions_d(&self) -> bool {
        match self {
            Expr::D => true,
            Expr::Num(_) | Expr::Jet(..) => false,
            Expr::Add(v) | Expr::Mul(v) => v.iter().any(Expr::mentions_d),
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Deriv(e, _) => e.mentions_d(),
            Expr::Div(a, b) => a.mentions_d() || b.mentions_d(),
        }
    }
}
