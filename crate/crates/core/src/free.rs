//! Noncommutative polynomials over the rationals (linear combinations of
//! words) and square matrices of them.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits;
use crate::linalg::QMatrix;
use crate::parse::{parse_into, Algebra};
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::ring::{format_scalar, Scalar};
use crate::strong::{strong_index_direct, StrongNilpotencyVerdict};
use crate::var::{Monomial, VarId};

/// A finite sequence of letters. Ordered by length, then letter by letter,
/// so the leading word of a polynomial is a longest one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<VarId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<VarId>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[VarId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    fn rename(&self, f: impl Fn(usize, VarId) -> VarId) -> Word {
        Word(self.0.iter().enumerate().map(|(k, &v)| f(k, v)).collect())
    }

    /// Commutative image.
    pub fn abelianize(&self) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&v| (v, 1)))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        // runs of one letter print as powers; the parser reads them back
        let mut parts = Vec::new();
        let mut k = 0;
        while k < self.0.len() {
            let v = self.0[k];
            let mut e = 1;
            while k + e < self.0.len() && self.0[k + e] == v {
                e += 1;
            }
            parts.push(if e == 1 { v.to_string() } else { format!("{v}^{e}") });
            k += e;
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Element of the free algebra: words with nonzero rational weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreePoly {
    terms: BTreeMap<Word, Scalar>,
}

impl FreePoly {
    pub fn zero() -> Self {
        FreePoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::term(Scalar::one(), Word::empty())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, Word::empty())
    }

    pub fn letter(v: VarId) -> Self {
        Self::term(Scalar::one(), Word(vec![v]))
    }

    pub fn term(c: Scalar, w: Word) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        FreePoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn parse(text: &str, allowed: &[VarId]) -> Result<Self> {
        Ok(parse_into::<FreePoly>(text, allowed)?)
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, a)| (w.clone(), a * c)))
    }

    /// Concatenation product; `self` supplies the left factor of each word.
    fn product(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                out.add_term(wa.concat(wb), ca * cb);
            }
            limits::check_terms(out.len());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Common word length of all terms, `None` if lengths differ or `self = 0`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(Word::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(|w| w.0.iter().all(|v| v.is_x()))
    }

    /// Replaces every `x_i` with `y^(j)_i`.
    pub fn rename_to_tuple(&self, j: u32) -> Self {
        self.rename_letters(|_, v| match v {
            VarId::X(i) => VarId::y(j, i),
            other => other,
        })
    }

    fn rename_letters(&self, f: impl Fn(usize, VarId) -> VarId) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.rename(&f), c.clone())))
    }

    /// Image under the homomorphism onto commutative polynomials.
    pub fn abelianize(&self) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(w, c)| (w.abelianize(), c.clone())))
    }
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if w.is_empty() {
                write!(f, "{}", format_scalar(&a))?;
            } else if a.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{}*{w}", format_scalar(&a))?;
            }
        }
        Ok(())
    }
}

impl Add for &FreePoly {
    type Output = FreePoly;
    fn add(self, rhs: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        limits::check_terms(out.len());
        out
    }
}

impl Sub for &FreePoly {
    type Output = FreePoly;
    fn sub(self, rhs: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &FreePoly {
    type Output = FreePoly;
    fn mul(self, rhs: &FreePoly) -> FreePoly {
        self.product(rhs)
    }
}

impl Neg for &FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        FreePoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect() }
    }
}

impl Algebra for FreePoly {
    fn from_scalar(q: Scalar) -> Self {
        FreePoly::constant(q)
    }
    fn unit(_name: &str) -> Option<Self> {
        None
    }
    fn variable(v: VarId) -> Self {
        FreePoly::letter(v)
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
        -&self
    }
    fn pow(self, e: u32) -> Self {
        FreePoly::pow(&self, e)
    }
}

/// Square matrix over the free algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreePolyMatrix {
    size: usize,
    entries: Vec<FreePoly>,
}

impl FreePolyMatrix {
    pub fn zeros(size: usize) -> Self {
        FreePolyMatrix { size, entries: vec![FreePoly::zero(); size * size] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.entries[i * size + i] = FreePoly::one();
        }
        m
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> FreePoly) -> Self {
        FreePolyMatrix { size, entries: (0..size * size).map(|k| f(k / size, k % size)).collect() }
    }

    pub fn from_rows(rows: Vec<Vec<FreePoly>>) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::SizeMismatch("free matrix must be square".into()));
        }
        Ok(FreePolyMatrix { size, entries: rows.into_iter().flatten().collect() })
    }

    /// Entries as text over the letters `x1..xn`.
    pub fn parse<S: AsRef<str>>(rows: &[Vec<S>], n: usize) -> Result<Self> {
        let vars = VarId::xs(n);
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| FreePoly::parse(s.as_ref(), &vars)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &FreePoly {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[FreePoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FreePoly::is_zero)
    }

    pub fn is_x_only(&self) -> bool {
        self.entries.iter().all(FreePoly::is_x_only)
    }

    pub fn trace(&self) -> FreePoly {
        (0..self.size).fold(FreePoly::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn rename_to_tuple(&self, j: u32) -> Self {
        self.map(|p| p.rename_to_tuple(j))
    }

    fn map(&self, f: impl Fn(&FreePoly) -> FreePoly) -> Self {
        FreePolyMatrix { size: self.size, entries: self.entries.iter().map(f).collect() }
    }

    /// `T^{-1} M T` for a constant invertible `T`.
    pub fn conjugate(&self, t: &QMatrix) -> Result<Self> {
        if t.rows() != self.size || t.cols() != self.size {
            return Err(Error::SizeMismatch(format!(
                "cannot conjugate a {0}x{0} matrix by a {1}x{2} matrix",
                self.size,
                t.rows(),
                t.cols()
            )));
        }
        let inv = t.invert()?;
        let lift = |q: &QMatrix| Self::from_fn(self.size, |i, j| FreePoly::constant(q[(i, j)].clone()));
        lift(&inv).mat_mul(self)?.mat_mul(&lift(t))
    }

    pub fn abelianize(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.size, self.size, |i, j| self.get(i, j).abelianize())
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.size).map(|i| (0..self.size).map(|j| self.get(i, j).to_string()).collect()).collect()
    }

    /// Product in the free algebra; factor order inside each entry product
    /// is preserved.
    pub fn mat_mul(&self, rhs: &Self) -> Result<Self> {
        if self.size != rhs.size {
            return Err(Error::SizeMismatch(format!(
                "cannot multiply free matrices of sizes {} and {}",
                self.size, rhs.size
            )));
        }
        let m = self.size;
        let mut out = Self::zeros(m);
        for i in 0..m {
            for k in 0..m {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let slot = &mut out.entries[i * m + j];
                        *slot = &*slot + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Least `r <= bound` with `M^r = 0`.
    pub fn nilpotency_index(&self, bound: usize) -> Option<usize> {
        if self.is_zero() {
            return Some(1);
        }
        let mut power = self.clone();
        for r in 2..=bound {
            power = power.mat_mul(self).expect("square");
            if power.is_zero() {
                return Some(r);
            }
        }
        None
    }

    /// `M|_{x=y^(r)} * ... * M|_{x=y^(1)}` with all letters noncommuting.
    pub fn fresh_tuple_product(&self, r: u32) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidArgument("tuple product needs r >= 1".into()));
        }
        if !self.is_x_only() {
            return Err(Error::Precondition("tuple product needs a matrix over x letters".into()));
        }
        let mut acc = self.rename_to_tuple(1);
        for j in 2..=r {
            acc = self.rename_to_tuple(j).mat_mul(&acc)?;
        }
        Ok(acc)
    }

    /// Least `r <= bound` with a vanishing `r`-fold tuple product.
    pub fn strong_index(&self, bound: usize) -> Result<Option<usize>> {
        if !self.is_x_only() {
            return Err(Error::Precondition("tuple product needs a matrix over x letters".into()));
        }
        let mut acc = self.rename_to_tuple(1);
        for r in 1..=bound {
            if r > 1 {
                acc = self.rename_to_tuple(r as u32).mat_mul(&acc)?;
            }
            if acc.is_zero() {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    /// Common degree `d` of all nonzero entries; `None` for the zero matrix.
    pub fn common_degree(&self) -> Result<Option<usize>> {
        let mut degree = None;
        for p in self.entries.iter().filter(|p| !p.is_zero()) {
            let d =
                p.homogeneous_degree().ok_or_else(|| Error::Precondition(format!("entry {p} is not homogeneous")))?;
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::Precondition(format!(
                        "entries of degrees {d0} and {d}; one common degree is required"
                    )))
                }
                _ => {}
            }
        }
        if degree == Some(0) {
            return Err(Error::Precondition("entries must have degree at least 1".into()));
        }
        Ok(degree)
    }
}

impl fmt::Display for FreePolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_strings() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Sends a word of `M^r` to its tuple-product image: the `k`-th chunk of
/// length `d` from the left gets tuple `r - k`.
fn split_word(w: &Word, d: usize, r: usize) -> Word {
    w.rename(|pos, v| match v {
        VarId::X(i) => VarId::y((r - pos / d) as u32, i),
        other => other,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcTheoremReport {
    pub size: usize,
    pub degree: Option<usize>,
    pub nilpotency_index: Option<usize>,
    pub strong_index: Option<usize>,
    pub agree: bool,
    /// Largest `r` for which the word-splitting bijection was checked.
    pub correspondence_checked_to: usize,
    pub correspondence_ok: bool,
}

/// Computes both indices of a homogeneous free matrix and checks, for each
/// `r` up to the larger one, that splitting the words of `M^r` into `r`
/// chunks reproduces the tuple product term for term.
pub fn nc_homogeneous_index_theorem_check(m: &FreePolyMatrix) -> Result<NcTheoremReport> {
    if !m.is_x_only() {
        return Err(Error::Precondition("matrix must be over x letters".into()));
    }
    let degree = m.common_degree()?;
    let size = m.size();
    let nil = m.nilpotency_index(size);
    let strong = m.strong_index(size)?;
    let top = nil.into_iter().chain(strong).max().unwrap_or(size).max(1);
    let mut ok = true;
    let mut power = m.clone();
    for r in 1..=top {
        if r > 1 {
            power = power.mat_mul(m)?;
        }
        let tuple = m.fresh_tuple_product(r as u32)?;
        let mapped = match degree {
            Some(d) => power.map(|p| FreePoly::from_terms(p.terms().map(|(w, c)| (split_word(w, d, r), c.clone())))),
            None => power.clone(),
        };
        // equal maps of words with equal coefficients: a bijection of terms
        ok &= mapped == tuple && (0..size * size).all(|k| mapped.entries[k].len() == power.entries[k].len());
    }
    Ok(NcTheoremReport {
        size,
        degree,
        nilpotency_index: nil,
        strong_index: strong,
        agree: nil == strong,
        correspondence_checked_to: top,
        correspondence_ok: ok,
    })
}

/// The non-homogeneous 3x3 matrix that is nilpotent but not strongly
/// nilpotent: the Jacobian of `(0, x1*x2 - x3, x1^2*x2 - x1*x3)`.
pub fn counterexample_matrix() -> FreePolyMatrix {
    let rows: Vec<Vec<&str>> = vec![vec!["0", "0", "0"], vec!["x2", "x1", "-1"], vec!["2*x1*x2", "x1^2", "-x1"]];
    FreePolyMatrix::parse(&rows, 2).expect("fixed matrix parses")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcCounterexampleReport {
    pub matrix: Vec<Vec<String>>,
    pub nilpotency_index: Option<usize>,
    pub commutative_nilpotency_index: Option<usize>,
    /// Trace of the commutative two-fold tuple product.
    pub pair_trace: String,
    /// Trace of the free two-fold tuple product.
    pub free_pair_trace: String,
    /// `r` values up to the size whose tuple product is nonzero.
    pub nonzero_tuple_products: Vec<usize>,
    pub strongly_nilpotent: bool,
}

pub fn nc_counterexample_report() -> NcCounterexampleReport {
    let m = counterexample_matrix();
    let comm = m.abelianize();
    let size = m.size();
    let nonzero = (1..=size).filter(|&r| !comm.fresh_tuple_product(r as u32).expect("x-only").is_zero()).collect();
    let strongly =
        matches!(strong_index_direct(&comm).expect("square x-only"), StrongNilpotencyVerdict::StronglyNilpotent { .. });
    NcCounterexampleReport {
        matrix: m.to_strings(),
        nilpotency_index: m.nilpotency_index(size),
        commutative_nilpotency_index: comm.nilpotency_index().expect("square"),
        pair_trace: comm.fresh_tuple_product(2).expect("x-only").trace().to_string(),
        free_pair_trace: m.fresh_tuple_product(2).expect("x-only").trace().to_string(),
        nonzero_tuple_products: nonzero,
        strongly_nilpotent: strongly,
    }
}
