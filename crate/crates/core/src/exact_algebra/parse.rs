//! Text grammar for polynomials: integers, rationals, `x1..xN`, `p1..pN`
//! (phase space only), `theta`, the literal `i`, `+ - * / ^` and parentheses.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Scalar, ThetaPoly, VarSpace};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Op(c) => write!(f, "`{c}`"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        if c.is_ascii_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            out.push((start, Tok::Num(src[start..k].parse().unwrap())));
        } else if c.is_ascii_alphabetic() {
            let start = k;
            while k < bytes.len() && bytes[k].is_ascii_alphanumeric() {
                k += 1;
            }
            out.push((start, Tok::Ident(src[start..k].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((k, Tok::Op(c)));
            k += 1;
        } else {
            return Err(Error::Parse { position: k, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    space: VarSpace,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |(o, _)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { position: self.offset(), message: message.into() })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ThetaPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ThetaPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.offset();
                let d = self.unary()?;
                let c = d.as_constant().ok_or(Error::Parse {
                    position: at,
                    message: "division by a non-constant".into(),
                })?;
                let inv = c.inv().ok_or(Error::DivisionByZero)?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ThetaPoly> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<ThetaPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                Ok(base.pow(e))
            }
            _ => self.err("exponent must be a non-negative integer literal"),
        }
    }

    fn atom(&mut self) -> Result<ThetaPoly> {
        let space = self.space;
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(ThetaPoly::constant(space, Scalar::real(BigRational::from_integer(n))))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                let v = self.ident(&name)?;
                self.pos += 1;
                Ok(v)
            }
            Some(t) => self.err(format!("unexpected token {t}")),
            None => self.err("unexpected end of input"),
        }
    }

    fn ident(&self, name: &str) -> Result<ThetaPoly> {
        let space = self.space;
        match name {
            "i" => return Ok(ThetaPoly::constant(space, Scalar::i())),
            "theta" => return Ok(ThetaPoly::theta_power(space, 1)),
            _ => {}
        }
        let (kind, idx) = name.split_at(1);
        let k: usize = match idx.parse() {
            Ok(k) if k >= 1 => k,
            _ => return self.err(format!("unknown identifier `{name}`")),
        };
        if k > space.coords {
            return self.err(format!("`{name}` exceeds dimension {}", space.coords));
        }
        match kind {
            "x" => Ok(ThetaPoly::coord(space, k - 1)),
            "p" if space.momenta => Ok(ThetaPoly::momentum(space, k - 1)),
            _ => self.err(format!("unknown identifier `{name}`")),
        }
    }
}

/// Parses `src` as a polynomial over `space`.
pub fn parse_poly(src: &str, space: VarSpace) -> Result<ThetaPoly> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, space, src };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

impl ThetaPoly {
    pub fn parse(src: &str, space: VarSpace) -> Result<ThetaPoly> {
        parse_poly(src, space)
    }
}
