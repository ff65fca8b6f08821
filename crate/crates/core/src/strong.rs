//! Strong nilpotency: direct index search over fresh variable tuples,
//! linear triangularization with certificates, and certificate checking.
//!
//! A square polynomial matrix `M` is strongly nilpotent with index `r` when
//! `M|_{x=y^(r)} * ... * M|_{x=y^(1)} = 0` for independent tuples `y^(j)`
//! and `r` is least. Equivalently there is a constant invertible `T` such
//! that `T^{-1} M T` is strictly block lower triangular with `r` diagonal
//! zero blocks and first-subdiagonal blocks `A_i` whose columns are
//! independent over the constants.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{complete_basis, QMatrix};
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::ring::{format_scalar, Scalar};
use crate::var::Monomial;

/// Why a matrix is not strongly nilpotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A nonzero term of the `r`-fold fresh-tuple product.
    NonzeroProduct { r: usize, row: usize, col: usize, monomial: Monomial, coefficient: Scalar },
    /// At elimination stage `stage` (1-based) the remaining leading
    /// `size x size` block was nonzero but had no constant column relation.
    TrivialKernel { stage: usize, size: usize },
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Witness::NonzeroProduct { r, row, col, monomial, coefficient } => serde_json::json!({
                "kind": "nonzero_product",
                "r": r,
                "row": row + 1,
                "col": col + 1,
                "monomial": monomial.to_string(),
                "coefficient": format_scalar(coefficient),
            }),
            Witness::TrivialKernel { stage, size } => serde_json::json!({
                "kind": "trivial_kernel",
                "stage": stage,
                "size": size,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrongNilpotencyVerdict {
    StronglyNilpotent { index: usize },
    NotStronglyNilpotent(Witness),
}

impl StrongNilpotencyVerdict {
    pub fn index(&self) -> Option<usize> {
        match self {
            StrongNilpotencyVerdict::StronglyNilpotent { index } => Some(*index),
            StrongNilpotencyVerdict::NotStronglyNilpotent(_) => None,
        }
    }
}

/// `T`, the block sizes `s_1..s_r` and the subdiagonal blocks
/// `A_1..A_{r-1}` (`A_i` is `s_{i+1} x s_i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularizationCertificate {
    pub t: QMatrix,
    pub blocks: Vec<usize>,
    pub subdiag: Vec<PolyMatrix>,
}

#[derive(Serialize)]
struct CertificateJson {
    #[serde(rename = "T")]
    t: Vec<Vec<String>>,
    blocks: Vec<usize>,
    subdiagonal: Vec<Vec<Vec<String>>>,
    index: usize,
}

impl TriangularizationCertificate {
    pub fn index(&self) -> usize {
        self.blocks.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CertificateJson {
            t: self.t.to_strings(),
            blocks: self.blocks.clone(),
            subdiagonal: self.subdiag.iter().map(PolyMatrix::to_strings).collect(),
            index: self.index(),
        })
        .expect("certificate serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Triangularization {
    Certified(TriangularizationCertificate),
    NotStronglyNilpotent(Witness),
}

impl Triangularization {
    pub fn certificate(&self) -> Option<&TriangularizationCertificate> {
        match self {
            Triangularization::Certified(c) => Some(c),
            Triangularization::NotStronglyNilpotent(_) => None,
        }
    }

    pub fn index(&self) -> Option<usize> {
        self.certificate().map(TriangularizationCertificate::index)
    }
}

fn require_square_x_only(m: &PolyMatrix) -> Result<()> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::SizeMismatch(format!("expected a nonempty square matrix, got {}x{}", m.rows(), m.cols())));
    }
    if !m.is_x_only() {
        return Err(Error::InvalidArgument("matrix entries must only involve x variables".into()));
    }
    Ok(())
}

fn product_witness(p: &PolyMatrix, r: usize) -> Witness {
    let (row, col, entry) = p.first_nonzero().expect("nonzero product");
    let (monomial, coefficient) = entry.leading_term().expect("nonzero entry");
    Witness::NonzeroProduct { r, row, col, monomial: monomial.clone(), coefficient: coefficient.clone() }
}

/// Least `r <= m` with a vanishing `r`-fold fresh-tuple product.
pub fn strong_index_direct(m: &PolyMatrix) -> Result<StrongNilpotencyVerdict> {
    require_square_x_only(m)?;
    let size = m.rows();
    let mut acc = m.rename_to_tuple(1)?;
    for r in 1..=size {
        if r > 1 {
            acc = m.rename_to_tuple(r as u32)?.mat_mul(&acc)?;
        }
        if acc.is_zero() {
            return Ok(StrongNilpotencyVerdict::StronglyNilpotent { index: r });
        }
    }
    Ok(StrongNilpotencyVerdict::NotStronglyNilpotent(product_witness(&acc, size)))
}

/// Splits off maximal constant column relations stage by stage and
/// returns a certificate, or the stage where no relation exists.
pub fn triangularize(m: &PolyMatrix) -> Result<Triangularization> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::SizeMismatch(format!("expected a nonempty square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let total = m.rows();
    let mut t_total = QMatrix::identity(total);
    let mut current = m.clone();
    // collected bottom-right first: s_r, s_{r-1}, ...
    let mut sizes_rev = Vec::new();
    let mut stage = 1;
    loop {
        let size = current.rows();
        if current.is_zero() {
            sizes_rev.push(size);
            break;
        }
        let kernel = current.constant_column_kernel();
        if kernel.is_empty() {
            return Ok(Triangularization::NotStronglyNilpotent(Witness::TrivialKernel { stage, size }));
        }
        let s = kernel.len();
        let t = complete_basis(&kernel, size)?;
        let conj = current.conjugate(&t)?;
        t_total = &t_total * &t.block_diag_identity(total - size);
        sizes_rev.push(s);
        current = conj.submatrix(0..size - s, 0..size - s);
        stage += 1;
    }
    let blocks: Vec<usize> = sizes_rev.into_iter().rev().collect();
    let conj = m.conjugate(&t_total)?;
    let subdiag = subdiagonal_blocks(&conj, &blocks);
    Ok(Triangularization::Certified(TriangularizationCertificate { t: t_total, blocks, subdiag }))
}

fn offsets(blocks: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(blocks.len() + 1);
    let mut acc = 0;
    out.push(0);
    for b in blocks {
        acc += b;
        out.push(acc);
    }
    out
}

/// `A_i` read off the first block subdiagonal of `conj`.
pub fn subdiagonal_blocks(conj: &PolyMatrix, blocks: &[usize]) -> Vec<PolyMatrix> {
    let off = offsets(blocks);
    (0..blocks.len().saturating_sub(1)).map(|i| conj.submatrix(off[i + 1]..off[i + 2], off[i]..off[i + 1])).collect()
}

/// True when every entry on or above the block diagonal is zero.
pub fn has_strict_block_lower_form(conj: &PolyMatrix, blocks: &[usize]) -> bool {
    if blocks.contains(&0) || blocks.iter().sum::<usize>() != conj.rows() {
        return false;
    }
    let off = offsets(blocks);
    (0..blocks.len()).all(|b| (off[b]..off[b + 1]).all(|i| (off[b]..conj.cols()).all(|j| conj.get(i, j).is_zero())))
}

/// Checks a certificate against `m`: shape of `T^{-1} M T`, column
/// independence of every `A_i`, and the fresh-tuple products at `r` and
/// `r - 1`.
pub fn verify_certificate(m: &PolyMatrix, cert: &TriangularizationCertificate) -> Result<bool> {
    require_square_x_only(m)?;
    let size = m.rows();
    if cert.t.rows() != size || cert.t.cols() != size {
        return Err(Error::SizeMismatch(format!(
            "certificate T is {}x{}, matrix is {}x{}",
            cert.t.rows(),
            cert.t.cols(),
            size,
            size
        )));
    }
    let r = cert.blocks.len();
    if r == 0 || cert.subdiag.len() != r - 1 {
        return Ok(false);
    }
    let conj = match m.conjugate(&cert.t) {
        Ok(c) => c,
        Err(Error::Singular) => return Ok(false),
        Err(e) => return Err(e),
    };
    if !has_strict_block_lower_form(&conj, &cert.blocks) {
        return Ok(false);
    }
    let actual = subdiagonal_blocks(&conj, &cert.blocks);
    if actual != cert.subdiag {
        return Ok(false);
    }
    if actual.iter().any(|a| !a.constant_column_kernel().is_empty()) {
        return Ok(false);
    }
    if !m.fresh_tuple_product(r as u32)?.is_zero() {
        return Ok(false);
    }
    if r >= 2 && m.fresh_tuple_product(r as u32 - 1)?.is_zero() {
        return Ok(false);
    }
    Ok(true)
}

/// Regular versus strong index for a strongly nilpotent matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexBoundsReport {
    pub m: usize,
    pub regular: usize,
    pub strong: usize,
    /// `strong == regular`, or `3 <= strong <= m - 1`.
    pub proposition_ok: bool,
}

pub fn index_bounds_report(m: &PolyMatrix) -> Result<IndexBoundsReport> {
    let strong = match strong_index_direct(m)? {
        StrongNilpotencyVerdict::StronglyNilpotent { index } => index,
        StrongNilpotencyVerdict::NotStronglyNilpotent(_) => {
            return Err(Error::Precondition("matrix is not strongly nilpotent".into()))
        }
    };
    let regular = m
        .nilpotency_index()?
        .ok_or_else(|| Error::Inconsistent("strongly nilpotent matrix is not nilpotent".into()))?;
    let size = m.rows();
    let proposition_ok = strong == regular || (3 <= strong && strong < size);
    Ok(IndexBoundsReport { m: size, regular, strong, proposition_ok })
}

/// `trace(M|_{x=y^(2)} * M|_{x=y^(1)})` when nonzero. A nonzero value rules
/// out strong nilpotency; zero is inconclusive.
pub fn pair_trace_obstruction(m: &PolyMatrix) -> Result<Option<Poly>> {
    require_square_x_only(m)?;
    let tr = m.fresh_tuple_product(2)?.trace();
    Ok((!tr.is_zero()).then_some(tr))
}

/// Splits blocks (largest first, ties to the earliest) until there are
/// `target` of them. Requires `blocks.len() <= target <= sum(blocks)`.
pub fn refine_blocks(blocks: &[usize], target: usize) -> Option<Vec<usize>> {
    let total: usize = blocks.iter().sum();
    if target < blocks.len() || target > total {
        return None;
    }
    let mut out = blocks.to_vec();
    while out.len() < target {
        let (k, &b) = out.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?;
        out[k] = b - 1;
        out.insert(k + 1, 1);
    }
    Some(out)
}
