//! Sparse multivariate polynomials over a [`Coeff`] ring.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::limits;
use crate::ring::{format_scalar, Coeff, Scalar};
use crate::var::{Monomial, VarId};

/// Canonical sparse polynomial: a map from monomials to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<C: Coeff = Scalar> {
    terms: BTreeMap<Monomial, C>,
}

/// Polynomial over the rationals.
pub type Poly = Polynomial<Scalar>;

/// Total degree (`None` for the zero polynomial) and homogeneity flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeInfo {
    pub degree: Option<u32>,
    pub homogeneous: bool,
}

impl<C: Coeff> Default for Polynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_scalar(q: Scalar) -> Self {
        Self::constant(C::from_scalar(q))
    }

    pub fn var(v: VarId) -> Self {
        Self::term(C::one(), Monomial::var(v))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<C> {
        self.is_constant().then(|| self.coeff(&Monomial::one()))
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn degree_info(&self) -> DegreeInfo {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => DegreeInfo { degree: None, homogeneous: true },
            Some(first) => {
                let (mut max, mut homogeneous) = (first, true);
                for d in degs {
                    homogeneous &= d == first;
                    max = max.max(d);
                }
                DegreeInfo { degree: Some(max), homogeneous }
            }
        }
    }

    /// Part of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Polynomial {
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: VarId) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let (rest, e) = m.without(v);
            if e == 0 {
                return None;
            }
            let m2 = rest.mul(&Monomial::from_pairs([(v, e - 1)]));
            Some((m2, c.clone() * C::from_scalar(Scalar::from_integer(e.into()))))
        }))
    }

    /// Renames variables monomial-by-monomial. Non-injective maps merge terms.
    pub fn rename<F: Fn(VarId) -> VarId>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.rename(&f), c.clone())))
    }

    /// Replaces every `x_i` with `y^(j)_i`.
    pub fn rename_to_tuple(&self, j: u32) -> Result<Self> {
        if let Some(v) = self.variables().into_iter().find(|v| !v.is_x()) {
            return Err(Error::InvalidArgument(format!("cannot rename to tuple {j}: polynomial already contains {v}")));
        }
        Ok(self.rename(|v| match v {
            VarId::X(i) => VarId::y(j, i),
            other => other,
        }))
    }

    /// Simultaneous substitution; unassigned variables map to themselves.
    pub fn substitute(&self, assignment: &BTreeMap<VarId, Polynomial<C>>) -> Self {
        let mut powers: BTreeMap<(VarId, u32), Polynomial<C>> = BTreeMap::new();
        // products of assigned factors, keyed by monomial prefix; neighbours
        // in monomial order share prefixes
        let mut prefixes: BTreeMap<Vec<(VarId, u32)>, Polynomial<C>> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (assigned, kept): (Vec<_>, Vec<_>) =
                m.pairs().iter().copied().partition(|(v, _)| assignment.contains_key(v));
            let mut start = 0;
            let mut acc = Self::one();
            for k in (1..=assigned.len()).rev() {
                if let Some(p) = prefixes.get(&assigned[..k]) {
                    acc = p.clone();
                    start = k;
                    break;
                }
            }
            for k in start..assigned.len() {
                let (v, e) = assigned[k];
                let pw = powers.entry((v, e)).or_insert_with(|| assignment[&v].pow(e));
                acc = &acc * pw;
                prefixes.insert(assigned[..=k].to_vec(), acc.clone());
            }
            let mut term = acc.scale(c);
            if !kept.is_empty() {
                term = term.mul_monomial(&Monomial::from_pairs(kept));
            }
            out += &term;
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
            limits::check_terms(out.len());
        }
        out
    }
}

impl Poly {
    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            let t = Poly::term(qc, qm);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Parts of degree exactly one.
    pub fn linear_part(&self) -> Poly {
        self.homogeneous_part(1)
    }
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            for (q, unit) in c.parts() {
                let neg = q.is_negative();
                let a = q.abs();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if neg { " - " } else { " + " })?;
                }
                first = false;
                let mut factors: Vec<String> = Vec::new();
                if !a.is_one() || (unit.is_none() && m.is_one()) {
                    factors.push(format_scalar(&a));
                }
                if let Some(u) = unit {
                    factors.push(u.to_string());
                }
                if !m.is_one() {
                    factors.push(m.to_string());
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $body:expr) => {
        impl<'a, C: Coeff> $Trait<&'a Polynomial<C>> for &'a Polynomial<C> {
            type Output = Polynomial<C>;
            fn $method(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
                let f: fn(&Polynomial<C>, &Polynomial<C>) -> Polynomial<C> = $body;
                f(self, rhs)
            }
        }
        impl<C: Coeff> $Trait for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $method(self, rhs: Polynomial<C>) -> Polynomial<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| {
    let mut out = a.clone();
    out += b;
    out
});

forward_binop!(Sub, sub, |a, b| {
    let mut out = a.clone();
    for (m, c) in &b.terms {
        out.add_term(m.clone(), -c.clone());
    }
    out
});

forward_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl<C: Coeff> AddAssign<&Polynomial<C>> for Polynomial<C> {
    fn add_assign(&mut self, rhs: &Polynomial<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
        limits::check_terms(self.len());
    }
}

impl<C: Coeff> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl<C: Coeff> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}
