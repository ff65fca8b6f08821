//! Coefficient rings: exact rationals and dual numbers over them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar. Always reduced with a positive denominator.
pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a scalar as `p` or `p/q`.
pub fn format_scalar(q: &Scalar) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` (optionally signed numerator).
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// A commutative coefficient ring with exact zero test.
///
/// Division is deliberately absent: dual numbers are not a field.
pub trait Coeff:
    Clone
    + Eq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + 'static
{
    /// Short ring tag used in JSON input (`"Q"`, `"Q[eps]"`).
    const TAG: &'static str;

    /// True when the ring has no nonzero nilpotents. Over a reduced ring a
    /// nilpotent `m x m` matrix has index at most `m`.
    const REDUCED: bool;

    fn from_scalar(q: Scalar) -> Self;

    /// Named ring units accepted by the parser (e.g. `eps`).
    fn unit(name: &str) -> Option<Self>;

    /// Splits the coefficient into rational parts, each tagged with the
    /// unit name it multiplies (`None` for the plain rational part).
    /// Zero parts are omitted.
    fn parts(&self) -> Vec<(Scalar, Option<&'static str>)>;
}

impl Coeff for Scalar {
    const TAG: &'static str = "Q";
    const REDUCED: bool = true;

    fn from_scalar(q: Scalar) -> Self {
        q
    }

    fn unit(_name: &str) -> Option<Self> {
        None
    }

    fn parts(&self) -> Vec<(Scalar, Option<&'static str>)> {
        if self.is_zero() {
            vec![]
        } else {
            vec![(self.clone(), None)]
        }
    }
}

/// Dual number `re + eps * ε` with `ε² = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dual {
    pub re: Scalar,
    pub eps: Scalar,
}

impl Dual {
    pub fn new(re: Scalar, eps: Scalar) -> Self {
        Dual { re, eps }
    }

    /// The nilpotent unit ε.
    pub fn epsilon() -> Self {
        Dual::new(Scalar::zero(), Scalar::one())
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.eps.is_zero()) {
            (_, true) => write!(f, "{}", format_scalar(&self.re)),
            (true, false) => write!(f, "{}*eps", format_scalar(&self.eps)),
            (false, false) => write!(f, "{} + {}*eps", format_scalar(&self.re), format_scalar(&self.eps)),
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        // (a + bε)(c + dε) = ac + (ad + bc)ε
        let eps = &self.re * &rhs.eps + &self.eps * &rhs.re;
        Dual::new(self.re * rhs.re, eps)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.eps)
    }
}

impl Zero for Dual {
    fn zero() -> Self {
        Dual::new(Scalar::zero(), Scalar::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}

impl One for Dual {
    fn one() -> Self {
        Dual::new(Scalar::one(), Scalar::zero())
    }
}

impl Coeff for Dual {
    const TAG: &'static str = "Q[eps]";
    const REDUCED: bool = false;

    fn from_scalar(q: Scalar) -> Self {
        Dual::new(q, Scalar::zero())
    }

    fn unit(name: &str) -> Option<Self> {
        (name == "eps").then(Dual::epsilon)
    }

    fn parts(&self) -> Vec<(Scalar, Option<&'static str>)> {
        let mut out = Vec::new();
        if !self.re.is_zero() {
            out.push((self.re.clone(), None));
        }
        if !self.eps.is_zero() {
            out.push((self.eps.clone(), Some("eps")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_squares_to_zero() {
        let e = Dual::epsilon();
        assert!((e.clone() * e).is_zero());
    }

    #[test]
    fn dual_product_rule() {
        let a = Dual::new(scalar(2), scalar(3));
        let b = Dual::new(scalar(5), scalar(-7));
        assert_eq!(a * b, Dual::new(scalar(10), scalar(-14 + 15)));
    }

    #[test]
    fn scalar_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(format_scalar(&parse_scalar(s).unwrap()), s);
        }
        assert_eq!(parse_scalar("4/6"), Some(ratio(2, 3)));
        assert_eq!(parse_scalar("1/0"), None);
    }

    #[test]
    fn pure_eps_products_vanish() {
        for (x, y) in [(1, 2), (-3, 5), (7, 7)] {
            let a = Dual::new(scalar(0), scalar(x));
            let b = Dual::new(scalar(0), scalar(y));
            assert!((a * b).is_zero());
        }
    }
}
