//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := ("+" | "-")? term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := atom ("^" uint)?
//! atom   := int ("/" uint)? | var | "(" expr ")"
//! var    := "x<k>" | "y<j>_<k>" | "t<j>" | unit name (e.g. "eps")
//! ```
//!
//! Juxtaposition is rejected; every product needs an explicit `*`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::ParseError;
use crate::poly::Polynomial;
use crate::ring::{Coeff, Scalar};
use crate::var::VarId;

/// Anything the parser can build: constants, variables, ring operations.
pub trait Algebra: Sized {
    fn from_scalar(q: Scalar) -> Self;
    fn unit(name: &str) -> Option<Self>;
    fn variable(v: VarId) -> Self;
    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;
    fn neg(self) -> Self;
    fn pow(self, e: u32) -> Self;
}

impl<C: Coeff> Algebra for Polynomial<C> {
    fn from_scalar(q: Scalar) -> Self {
        Polynomial::from_scalar(q)
    }
    fn unit(name: &str) -> Option<Self> {
        C::unit(name).map(Polynomial::constant)
    }
    fn variable(v: VarId) -> Self {
        Polynomial::var(v)
    }
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
    fn neg(self) -> Self {
        -self
    }
    fn pow(self, e: u32) -> Self {
        Polynomial::pow(&self, e)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError { pos: i, message: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    allowed: &'a [VarId],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|&(p, _)| p).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.offset(), message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected unsigned integer"),
        }
    }

    fn expr<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term::<A>()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let mut acc = self.factor::<A>()?;
        while self.eat('*') {
            acc = acc.mul(self.factor()?);
        }
        Ok(acc)
    }

    fn factor<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let base = self.atom::<A>()?;
        if self.eat('^') {
            let e = self.uint()?;
            let e: u32 = match u32::try_from(e) {
                Ok(e) => e,
                Err(_) => return self.err("exponent too large"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut q = BigRational::from_integer(n);
                if self.eat('/') {
                    let d = self.uint()?;
                    if d.is_zero() {
                        return Err(ParseError { pos: at, message: "zero denominator".into() });
                    }
                    q /= BigRational::from_integer(d);
                }
                Ok(A::from_scalar(q))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(u) = A::unit(&name) {
                    return Ok(u);
                }
                match VarId::parse(&name) {
                    Some(v) if self.allowed.contains(&v) => Ok(A::variable(v)),
                    _ => Err(ParseError { pos: at, message: format!("unknown variable '{name}'") }),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(_) => self.err("expected number, variable or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` into any [`Algebra`], accepting only variables in `allowed`.
pub fn parse_into<A: Algebra>(text: &str, allowed: &[VarId]) -> Result<A, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), allowed };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected token (implicit multiplication is not allowed)");
    }
    Ok(v)
}

/// Parses a commutative polynomial.
pub fn parse_poly<C: Coeff>(text: &str, allowed: &[VarId]) -> Result<Polynomial<C>, ParseError> {
    parse_into(text, allowed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::ring::{scalar, Dual};

    fn xs() -> Vec<VarId> {
        VarId::xs(5)
    }

    #[test]
    fn dim4_component() {
        let p: Poly = parse_poly("3*x2*x1^2 - 2*x3*x1", &xs()).unwrap();
        let x = |i| Poly::var(VarId::x(i));
        let three = Poly::from_scalar(scalar(3));
        let two = Poly::from_scalar(scalar(2));
        let expect = &(&three * &(&x(2) * &x(1).pow(2))) - &(&two * &(&x(3) * &x(1)));
        assert_eq!(p, expect);
    }

    #[test]
    fn zero_forms() {
        assert!(parse_poly::<Scalar>("0", &xs()).unwrap().is_zero());
        assert!(parse_poly::<Scalar>("x1^2 - x1^2", &xs()).unwrap().is_zero());
    }

    #[test]
    fn parentheses_distribute() {
        let p: Poly = parse_poly("(x1 + 1)*(x1 - 1)", &xs()).unwrap();
        assert_eq!(p, parse_poly("x1^2 - 1", &xs()).unwrap());
        let q: Poly = parse_poly("-(x1 - 2/3)", &xs()).unwrap();
        assert_eq!(q.to_string(), "-x1 + 2/3");
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_poly::<Scalar>("x1 x2", &xs()).unwrap_err();
        assert_eq!(e.pos, 3);
        let e = parse_poly::<Scalar>("x1 + z9", &xs()).unwrap_err();
        assert_eq!(e.pos, 5);
        assert!(e.message.contains("unknown variable"));
        let e = parse_poly::<Scalar>("x9", &xs()).unwrap_err();
        assert_eq!(e.pos, 0);
        assert!(parse_poly::<Scalar>("3/0*x1", &xs()).is_err());
        assert!(parse_poly::<Scalar>("(x1", &xs()).is_err());
        assert!(parse_poly::<Scalar>("", &xs()).is_err());
        assert!(parse_poly::<Scalar>("x1 ^ -2", &xs()).is_err());
        assert!(parse_poly::<Scalar>("x1 # 2", &xs()).is_err());
    }

    #[test]
    fn eps_only_over_dual_ring() {
        assert!(parse_poly::<Scalar>("eps", &xs()).is_err());
        let e: Polynomial<Dual> = parse_poly("eps*eps + 2*eps*x1", &xs()).unwrap();
        assert_eq!(e.to_string(), "2*eps*x1");
    }
}
