//! Variables and monomials.

use std::cmp::Ordering;
use std::fmt;

/// An indeterminate.
///
/// The derived order puts every `T` below every `X`, and every `X` below
/// every `Y`; `Y` variables are ordered by `(tuple, index)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    /// Scalar parameter `t<j>`.
    T(u32),
    /// Base variable `x<i>`.
    X(u32),
    /// Fresh tuple variable `y<tuple>_<index>`.
    Y { tuple: u32, index: u32 },
}

impl VarId {
    pub fn x(i: u32) -> Self {
        VarId::X(i)
    }

    pub fn y(tuple: u32, index: u32) -> Self {
        VarId::Y { tuple, index }
    }

    pub fn t(j: u32) -> Self {
        VarId::T(j)
    }

    /// `x1..xn`.
    pub fn xs(n: usize) -> Vec<VarId> {
        (1..=n as u32).map(VarId::X).collect()
    }

    /// `y<tuple>_1 .. y<tuple>_n`.
    pub fn ys(tuple: u32, n: usize) -> Vec<VarId> {
        (1..=n as u32).map(|i| VarId::y(tuple, i)).collect()
    }

    pub fn is_x(&self) -> bool {
        matches!(self, VarId::X(_))
    }

    /// Parses `x3`, `y2_1`, `t4`. Indices start at 1.
    pub fn parse(name: &str) -> Option<VarId> {
        fn index(s: &str) -> Option<u32> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            s.parse().ok().filter(|&i| i >= 1)
        }
        let (head, rest) = name.split_at(name.find(|c: char| c.is_ascii_digit())?);
        match head {
            "x" => index(rest).map(VarId::X),
            "t" => index(rest).map(VarId::T),
            "y" => {
                let (j, i) = rest.split_once('_')?;
                Some(VarId::y(index(j)?, index(i)?))
            }
            _ => None,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::T(j) => write!(f, "t{j}"),
            VarId::X(i) => write!(f, "x{i}"),
            VarId::Y { tuple, index } => write!(f, "y{tuple}_{index}"),
        }
    }
}

/// A power product of variables, stored as `(var, exponent)` pairs sorted by
/// variable with no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs, merging repeats.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Self {
        let mut v: Vec<(VarId, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_by_key(|&(var, _)| var);
        let mut out: Vec<(VarId, u32)> = Vec::with_capacity(v.len());
        for (var, e) in v {
            match out.last_mut() {
                Some((last, le)) if *last == var => *le += e,
                _ => out.push((var, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0.binary_search_by_key(&v, |&(var, _)| var).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            let d = if j < other.0.len() && other.0[j].0 == v {
                j += 1;
                other.0[j - 1].1
            } else {
                0
            };
            if d > e {
                return None;
            }
            if e > d {
                out.push((v, e - d));
            }
        }
        // every variable of `other` must have been consumed
        (j == other.0.len()).then_some(Monomial(out))
    }

    /// Removes `v` from the monomial, returning the exponent it had.
    pub fn without(&self, v: VarId) -> (Monomial, u32) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|&&(var, exp)| {
                if var == v {
                    e = exp;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (Monomial(rest), e)
    }

    pub fn rename<F: Fn(VarId) -> VarId>(&self, f: F) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }
}

/// Lexicographic order: the smallest variable is the most significant.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        for (p, q) in a.iter().zip(b.iter()) {
            match p.0.cmp(&q.0) {
                // `self` carries a more significant variable that `other` lacks
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match p.1.cmp(&q.1) {
                    Ordering::Equal => {}
                    o => return o,
                },
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn var_order() {
        assert!(VarId::t(9) < VarId::x(1));
        assert!(VarId::x(9) < VarId::y(1, 1));
        assert!(VarId::y(1, 5) < VarId::y(2, 1));
    }

    #[test]
    fn var_parse_display() {
        for s in ["x1", "x12", "y3_2", "t1"] {
            assert_eq!(VarId::parse(s).unwrap().to_string(), s);
        }
        for s in ["x0", "x", "y3", "z1", "y1_0", "x1a", "y_1"] {
            assert_eq!(VarId::parse(s), None, "{s}");
        }
    }

    #[test]
    fn lex_is_multiplicative() {
        let x1 = Monomial::var(VarId::x(1));
        let x2sq = Monomial::from_pairs([(VarId::x(2), 2)]);
        assert!(x1 > x2sq);
        let w = Monomial::from_pairs([(VarId::x(1), 1), (VarId::x(3), 4)]);
        assert!(x1.mul(&w) > x2sq.mul(&w));
        assert!(Monomial::one() < x2sq);
    }

    #[test]
    fn div_and_mul() {
        let a = Monomial::from_pairs([(VarId::x(1), 3), (VarId::x(2), 1)]);
        let b = Monomial::from_pairs([(VarId::x(1), 1)]);
        let q = a.div(&b).unwrap();
        assert_eq!(q.mul(&b), a);
        assert_eq!(b.div(&a), None);
        assert_eq!(a.div(&Monomial::var(VarId::x(5))), None);
    }
}
