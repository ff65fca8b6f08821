//! Matrices of commutative polynomials.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::poly::{Poly, Polynomial};
use crate::ring::{Coeff, Scalar};
use crate::var::{Monomial, VarId};

/// Dense `rows x cols` grid of polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<C: Coeff = Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial<C>>,
}

impl<C: Coeff> PolyMatrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Polynomial::zero(); rows * cols] }
    }

    pub fn identity(m: usize) -> Self {
        Self::from_fn(m, m, |i, j| if i == j { Polynomial::one() } else { Polynomial::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Polynomial<C>) -> Self {
        let entries = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j));
        PolyMatrix { rows, cols, entries: entries.collect() }
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial<C>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::SizeMismatch("ragged rows".into()));
        }
        Ok(PolyMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_constant(t: &QMatrix) -> Self {
        Self::from_fn(t.rows(), t.cols(), |i, j| Polynomial::from_scalar(t[(i, j)].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<C> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial<C>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Polynomial<C>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &Polynomial<C>)> {
        self.entries.iter().position(|p| !p.is_zero()).map(|k| (k / self.cols, k % self.cols, &self.entries[k]))
    }

    pub fn map(&self, f: impl Fn(&Polynomial<C>) -> Polynomial<C>) -> Self {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn substitute(&self, assignment: &BTreeMap<VarId, Polynomial<C>>) -> Self {
        self.map(|p| p.substitute(assignment))
    }

    pub fn rename_to_tuple(&self, j: u32) -> Result<Self> {
        let entries = self.entries.iter().map(|p| p.rename_to_tuple(j)).collect::<Result<_>>()?;
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn is_x_only(&self) -> bool {
        self.entries.iter().all(|p| p.variables().iter().all(VarId::is_x))
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let c0 = cols.start;
        let r0 = rows.start;
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn mat_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::SizeMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] += &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// Matrix times a column vector of polynomials.
    pub fn mul_vec(&self, v: &[Polynomial<C>]) -> Result<Vec<Polynomial<C>>> {
        if v.len() != self.cols {
            return Err(Error::SizeMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Polynomial::zero(), |mut acc, j| {
                    acc += &(self.get(i, j) * &v[j]);
                    acc
                })
            })
            .collect())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::SizeMismatch("matrix sum".into()));
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn trace(&self) -> Polynomial<C> {
        (0..self.rows.min(self.cols)).fold(Polynomial::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Least `r <= bound` with `M^r = 0`.
    pub fn nilpotency_index_bounded(&self, bound: usize) -> Result<Option<usize>> {
        if !self.is_square() {
            return Err(Error::SizeMismatch("nilpotency needs a square matrix".into()));
        }
        if self.is_zero() {
            return Ok(Some(1));
        }
        let mut power = self.clone();
        for r in 2..=bound {
            power = power.mat_mul(self)?;
            if power.is_zero() {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    /// Regular nilpotency index. Searches up to `m` over a reduced ring and
    /// up to `2m` otherwise; `None` means not nilpotent within that bound.
    pub fn nilpotency_index(&self) -> Result<Option<usize>> {
        let bound = if C::REDUCED { self.rows } else { 2 * self.rows };
        self.nilpotency_index_bounded(bound.max(1))
    }

    /// `M|_{x=y^(r)} * ... * M|_{x=y^(1)}` in `r * n` commuting variables.
    pub fn fresh_tuple_product(&self, r: u32) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidArgument("tuple product needs r >= 1".into()));
        }
        let mut acc = self.rename_to_tuple(1)?;
        for j in 2..=r {
            if acc.is_zero() {
                break;
            }
            acc = self.rename_to_tuple(j)?.mat_mul(&acc)?;
        }
        Ok(acc)
    }

    /// The same product taken in the reverse factor order,
    /// `M|_{x=y^(1)} * ... * M|_{x=y^(r)}`.
    pub fn fresh_tuple_product_reversed(&self, r: u32) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidArgument("tuple product needs r >= 1".into()));
        }
        let mut acc = self.rename_to_tuple(1)?;
        for j in 2..=r {
            acc = acc.mat_mul(&self.rename_to_tuple(j)?)?;
        }
        Ok(acc)
    }

    /// `T^{-1} M T`.
    pub fn conjugate(&self, t: &QMatrix) -> Result<Self> {
        if !self.is_square() || t.rows() != self.rows {
            return Err(Error::SizeMismatch(format!(
                "cannot conjugate a {}x{} matrix by a {}x{} matrix",
                self.rows,
                self.cols,
                t.rows(),
                t.cols()
            )));
        }
        let inv = t.invert()?;
        Self::from_constant(&inv).mat_mul(self)?.mat_mul(&Self::from_constant(t))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect()
    }
}

/// `M = sum_mu C_mu * mu` with no zero `C_mu` stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientDecomposition {
    pub rows: usize,
    pub cols: usize,
    pub parts: BTreeMap<Monomial, QMatrix>,
}

impl CoefficientDecomposition {
    pub fn reconstruct(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.rows, self.cols);
        for (mono, c) in &self.parts {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    let t = Poly::term(c[(i, j)].clone(), mono.clone());
                    let v = out.get(i, j) + &t;
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl PolyMatrix<Scalar> {
    pub fn coefficient_matrices(&self) -> CoefficientDecomposition {
        let mut parts: BTreeMap<Monomial, QMatrix> = BTreeMap::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (mono, c) in self.get(i, j).terms() {
                    parts.entry(mono.clone()).or_insert_with(|| QMatrix::zeros(self.rows, self.cols))[(i, j)] =
                        c.clone();
                }
            }
        }
        CoefficientDecomposition { rows: self.rows, cols: self.cols, parts }
    }

    /// Basis of constant vectors `v` with `M v = 0`: the kernel of all
    /// coefficient matrices stacked vertically.
    pub fn constant_column_kernel(&self) -> Vec<Vec<Scalar>> {
        let dec = self.coefficient_matrices();
        if dec.parts.is_empty() {
            return QMatrix::identity(self.cols).to_rows();
        }
        let blocks: Vec<QMatrix> = dec.parts.into_values().collect();
        QMatrix::stack(&blocks, self.cols).expect("uniform widths").kernel_basis()
    }

    /// Applies `M` to a constant vector.
    pub fn apply_constant(&self, v: &[Scalar]) -> Vec<Poly> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Poly::zero(), |acc, j| {
                    if v[j].is_zero() {
                        acc
                    } else {
                        &acc + &self.get(i, j).scale(&v[j])
                    }
                })
            })
            .collect()
    }
}

impl<C: Coeff> fmt::Display for PolyMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_strings() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::ring::{scalar, Dual};

    fn pm(rows: &[&[&str]], n: usize) -> PolyMatrix {
        let vars = VarId::xs(n);
        PolyMatrix::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_poly(s, &vars).unwrap()).collect()).collect())
            .unwrap()
    }

    #[test]
    fn identity_and_zero_products() {
        let m = pm(&[&["x1", "x2^2"], &["1", "0"]], 2);
        assert_eq!(m.mat_mul(&PolyMatrix::identity(2)).unwrap(), m);
        assert!(m.mat_mul(&PolyMatrix::zeros(2, 2)).unwrap().is_zero());
        assert!(m.mat_mul(&PolyMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn diagonal_decomposition() {
        let m = pm(&[&["x1", "0"], &["0", "x1"]], 1);
        let d = m.coefficient_matrices();
        assert_eq!(d.parts.len(), 1);
        assert!(d.parts[&Monomial::var(VarId::x(1))].is_identity());
        assert_eq!(d.reconstruct(), m);
        let c = pm(&[&["2", "3"], &["0", "1"]], 1).coefficient_matrices();
        assert_eq!(c.parts.keys().collect::<Vec<_>>(), vec![&Monomial::one()]);
    }

    #[test]
    fn kernel_edge_cases() {
        assert_eq!(PolyMatrix::zeros(3, 3).constant_column_kernel().len(), 3);
        assert!(PolyMatrix::<Scalar>::identity(3).constant_column_kernel().is_empty());
    }

    #[test]
    fn trace_cases() {
        assert_eq!(PolyMatrix::<Scalar>::identity(4).trace(), Poly::from_scalar(scalar(4)));
        let l = pm(&[&["0", "0"], &["x1", "0"]], 1);
        assert!(l.trace().is_zero());
    }

    #[test]
    fn nilpotency_basics() {
        assert_eq!(PolyMatrix::<Scalar>::zeros(3, 3).nilpotency_index().unwrap(), Some(1));
        assert_eq!(PolyMatrix::<Scalar>::identity(2).nilpotency_index().unwrap(), None);
        let l = pm(&[&["0", "0"], &["x1", "0"]], 1);
        assert_eq!(l.nilpotency_index().unwrap(), Some(2));
    }

    #[test]
    fn dual_matrix_needs_more_than_m() {
        // eps in the corner, ones on the subdiagonal, m = 2
        let e = Polynomial::constant(Dual::epsilon());
        let one = Polynomial::<Dual>::one();
        let m = PolyMatrix::from_rows(vec![vec![e, Polynomial::zero()], vec![one, Polynomial::zero()]]).unwrap();
        assert_eq!(m.nilpotency_index().unwrap(), Some(3));
        assert_eq!(m.nilpotency_index_bounded(2).unwrap(), None);
    }

    #[test]
    fn tuple_product_basics() {
        let m = pm(&[&["0", "0"], &["x1", "0"]], 1);
        let r1 = m.fresh_tuple_product(1).unwrap();
        assert_eq!(r1.get(1, 0), &Poly::var(VarId::y(1, 1)));
        assert!(m.fresh_tuple_product(2).unwrap().is_zero());
        assert!(m.fresh_tuple_product(0).is_err());
    }

    #[test]
    fn conjugate_identity_and_back() {
        let m = pm(&[&["x1", "x2"], &["1", "x1*x2"]], 2);
        assert_eq!(m.conjugate(&QMatrix::identity(2)).unwrap(), m);
        let t = QMatrix::from_rows(vec![vec![scalar(1), scalar(2)], vec![scalar(3), scalar(5)]]).unwrap();
        let back = m.conjugate(&t).unwrap().conjugate(&t.invert().unwrap()).unwrap();
        assert_eq!(back, m);
        let singular = QMatrix::zeros(2, 2);
        assert_eq!(m.conjugate(&singular), Err(Error::Singular));
    }
}
