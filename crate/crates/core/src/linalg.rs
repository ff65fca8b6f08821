//! Dense exact linear algebra over the rationals.

use std::fmt;
use std::ops::Mul;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::ring::{format_scalar, Scalar};

/// A dense `rows x cols` matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::SizeMismatch("ragged rows".into()));
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors (all of length `len`).
    pub fn from_columns(cols: &[Vec<Scalar>], len: usize) -> Self {
        let mut m = Self::zeros(len, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
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

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Vertical concatenation.
    pub fn stack(blocks: &[QMatrix], cols: usize) -> Result<QMatrix> {
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::SizeMismatch("stacked blocks differ in width".into()));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let data = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
        Ok(QMatrix { rows, cols, data })
    }

    /// `diag(self, I_k)`.
    pub fn block_diag_identity(&self, k: usize) -> QMatrix {
        let n = self.rows + k;
        let mut m = QMatrix::identity(n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = &self[(i, j)] - &factor * &self[(r, j)];
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the null space, one vector per free column, with a 1 in
    /// that free position (reduced echelon form of the kernel).
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut r = self.clone();
        let pivots = r.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn invert(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::SizeMismatch(format!("cannot invert a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Entries as `"p/q"` strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(format_scalar).collect()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = &out[(i, j)] + a * &rhs[(k, j)];
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_strings() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Extends independent `kernel_vecs` to an invertible `m x m` matrix whose
/// last columns are exactly `kernel_vecs`. The leading columns are standard
/// basis vectors picked greedily, lowest index first.
pub fn complete_basis(kernel_vecs: &[Vec<Scalar>], m: usize) -> Result<QMatrix> {
    if kernel_vecs.iter().any(|v| v.len() != m) {
        return Err(Error::SizeMismatch(format!("vectors must have length {m}")));
    }
    let k = kernel_vecs.len();
    if QMatrix::from_columns(kernel_vecs, m).rank() < k {
        return Err(Error::DependentVectors);
    }
    let mut chosen: Vec<Vec<Scalar>> = kernel_vecs.to_vec();
    let mut lead = Vec::new();
    for i in 0..m {
        if lead.len() + k == m {
            break;
        }
        let mut e = vec![Scalar::zero(); m];
        e[i] = Scalar::one();
        chosen.push(e.clone());
        if QMatrix::from_columns(&chosen, m).rank() == chosen.len() {
            lead.push(e);
        } else {
            chosen.pop();
        }
    }
    lead.extend(kernel_vecs.iter().cloned());
    Ok(QMatrix::from_columns(&lead, m))
}

fn bareiss_step(a: &mut [Vec<Poly>], k: usize, col: usize, prev: &Poly) {
    let pivot = a[k][col].clone();
    for i in k + 1..a.len() {
        let lead = a[i][col].clone();
        for j in col + 1..a[i].len() {
            let num = &(&pivot * &a[i][j]) - &(&lead * &a[k][j]);
            a[i][j] = num.div_exact(prev).expect("Bareiss division is exact");
        }
        a[i][col] = Poly::zero();
    }
}

fn poly_grid(m: &PolyMatrix) -> Vec<Vec<Poly>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
}

/// Rank over the fraction field of the polynomial ring, by fraction-free
/// elimination with polynomial pivots.
pub fn poly_rank(m: &PolyMatrix) -> usize {
    let mut a = poly_grid(m);
    let mut prev = Poly::one();
    let mut r = 0;
    for col in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        bareiss_step(&mut a, r, col, &prev);
        prev = a[r][col].clone();
        r += 1;
    }
    r
}

/// Determinant by fraction-free elimination.
pub fn poly_det(m: &PolyMatrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::SizeMismatch("determinant needs a square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Poly::one());
    }
    let mut a = poly_grid(m);
    let mut prev = Poly::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok(Poly::zero());
        };
        if p != k {
            a.swap(k, p);
            negate = !negate;
        }
        bareiss_step(&mut a, k, k, &prev);
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ratio, scalar};

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| scalar(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn kernel_cases() {
        assert!(QMatrix::identity(2).kernel_basis().is_empty());
        let k = QMatrix::zeros(2, 3).kernel_basis();
        assert_eq!(k, QMatrix::identity(3).to_rows());
        let a = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn complete_basis_cases() {
        let e4 = vec![scalar(0), scalar(0), scalar(0), scalar(1)];
        assert!(complete_basis(&[e4], 4).unwrap().is_identity());
        assert!(complete_basis(&[], 3).unwrap().is_identity());
        let v = vec![scalar(1), scalar(1), scalar(0)];
        let t = complete_basis(std::slice::from_ref(&v), 3).unwrap();
        assert_eq!(t.column(2), v);
        let inv = t.invert().unwrap();
        assert!((&t * &inv).is_identity());
        let dep = complete_basis(&[v.clone(), v], 3);
        assert_eq!(dep, Err(Error::DependentVectors));
    }

    #[test]
    fn invert_cases() {
        assert!(QMatrix::identity(3).invert().unwrap().is_identity());
        let d = q(&[&[2, 0], &[0, 3]]);
        let inv = d.invert().unwrap();
        assert_eq!(inv[(0, 0)], ratio(1, 2));
        assert_eq!(inv[(1, 1)], ratio(1, 3));
        assert_eq!(q(&[&[1, 2], &[2, 4]]).invert(), Err(Error::Singular));
        assert!(matches!(QMatrix::zeros(2, 3).invert(), Err(Error::SizeMismatch(_))));
    }
}
