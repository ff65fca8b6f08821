//! Polynomial maps `H: K^n -> K^n`, their Jacobians, and the structural
//! checks built on strong nilpotency of `JH`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{poly_det, poly_rank, QMatrix};
use crate::parse::parse_poly;
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::ring::Scalar;
use crate::strong::{has_strict_block_lower_form, refine_blocks, triangularize, Triangularization};
use crate::var::VarId;

/// An `n`-tuple of polynomials in `x1..xn`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    components: Vec<Poly>,
}

impl PolyMap {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::InvalidArgument("a map needs at least one component".into()));
        }
        let allowed = VarId::xs(n);
        for (i, c) in components.iter().enumerate() {
            if let Some(v) = c.variables().into_iter().find(|v| !allowed.contains(v)) {
                return Err(Error::InvalidArgument(format!("component {} uses {v}, outside x1..x{n}", i + 1)));
            }
        }
        Ok(PolyMap { components })
    }

    pub fn parse(components: &[&str]) -> Result<Self> {
        let vars = VarId::xs(components.len());
        let polys = components.iter().map(|s| parse_poly(s, &vars).map_err(Error::from)).collect::<Result<Vec<_>>>()?;
        Self::new(polys)
    }

    pub fn identity(n: usize) -> Self {
        PolyMap { components: VarId::xs(n).into_iter().map(Poly::var).collect() }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    /// Highest total degree over components (`None` for the zero map).
    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(|c| c.degree_info().degree).max()
    }

    /// All nonzero components homogeneous of one common degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.components.iter().filter(|c| !c.is_zero()).map(|c| c.degree_info());
        let Some(first) = degs.next() else { return true };
        first.homogeneous && degs.all(|d| d.homogeneous && d.degree == first.degree)
    }

    pub fn has_linear_terms(&self) -> bool {
        self.components.iter().any(|c| !c.linear_part().is_zero())
    }

    /// Entry `(i, j)` is `dH_i/dx_j`.
    pub fn jacobian(&self) -> PolyMatrix {
        let n = self.dim();
        PolyMatrix::from_fn(n, n, |i, j| self.components[i].derivative(VarId::x(j as u32 + 1)))
    }

    /// `H(args)`: substitutes `x_i -> args[i]` in every component.
    pub fn eval(&self, args: &[Poly]) -> Vec<Poly> {
        let assignment: BTreeMap<VarId, Poly> =
            args.iter().enumerate().map(|(i, a)| (VarId::x(i as u32 + 1), a.clone())).collect();
        self.components.iter().map(|c| c.substitute(&assignment)).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PolyMap) -> Result<PolyMap> {
        if self.dim() != other.dim() {
            return Err(Error::SizeMismatch(format!(
                "cannot compose maps of dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(PolyMap { components: self.eval(&other.components) })
    }

    /// `x + c * H` for a scalar `c`.
    pub fn shifted_identity(&self, c: &Scalar) -> PolyMap {
        let components =
            self.components.iter().enumerate().map(|(i, h)| &Poly::var(VarId::x(i as u32 + 1)) + &h.scale(c)).collect();
        PolyMap { components }
    }

    /// `T^{-1} H(T x)`.
    pub fn conjugate(&self, t: &QMatrix) -> Result<PolyMap> {
        let n = self.dim();
        if t.rows() != n || t.cols() != n {
            return Err(Error::SizeMismatch(format!("map of dimension {n}, T is {}x{}", t.rows(), t.cols())));
        }
        let inv = t.invert()?;
        let tx = linear_image(t, &VarId::xs(n).into_iter().map(Poly::var).collect::<Vec<_>>());
        let h_tx = self.eval(&tx);
        Ok(PolyMap { components: linear_image(&inv, &h_tx) })
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `A * v` for a constant matrix and a polynomial vector.
pub fn linear_image(a: &QMatrix, v: &[Poly]) -> Vec<Poly> {
    (0..a.rows())
        .map(|i| {
            (0..a.cols()).fold(Poly::zero(), |mut acc, j| {
                let c = &a[(i, j)];
                if !c.is_zero() {
                    acc += &v[j].scale(c);
                }
                acc
            })
        })
        .collect()
}

fn rename_vec(v: &[Poly], tuple: u32) -> Vec<Poly> {
    v.iter().map(|p| p.rename_to_tuple(tuple).expect("x-only")).collect()
}

fn tuple_vars(tuple: u32, n: usize) -> Vec<Poly> {
    VarId::ys(tuple, n).into_iter().map(Poly::var).collect()
}

fn add_vec(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    a.iter().zip(b).map(|(p, q)| p + q).collect()
}

/// `JH * JH|_{x=y}` vanishes (`y` is the tuple `y1_*`).
pub fn anchor_identity(h: &PolyMap) -> Result<bool> {
    let j = h.jacobian();
    Ok(j.mat_mul(&j.rename_to_tuple(1)?)?.is_zero())
}

// ---------------------------------------------------------------------------
// Four equivalent statements on the strong nilpotency index of JH
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cor22Evidence {
    /// Statement 1: the `r`-fold fresh-tuple product of `JH`.
    TupleProduct { zero: bool },
    /// Statement 2 holds: `T` and the refined block sizes.
    BlockForm { t: Vec<Vec<String>>, blocks: Vec<usize> },
    /// Statement 2 fails: the strong index found (if any).
    NoBlockForm { strong_index: Option<usize> },
    /// Statements 3 and 4: per-`j` vanishing of the Jacobian in `y^(1)`.
    PerJ { results: Vec<(usize, bool)> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cor22Outcome {
    pub statement: u8,
    pub holds: bool,
    pub evidence: Cor22Evidence,
}

/// Nested expression for statements 3 (`with_t`) and 4, before taking the
/// Jacobian in `y^(1)`.
fn nested_expression(h: &PolyMap, jac: &PolyMatrix, r: usize, j: usize, with_t: bool) -> Result<Vec<Poly>> {
    let n = h.dim();
    let scale = |v: Vec<Poly>, k: usize| -> Vec<Poly> {
        if with_t {
            let t = Poly::var(VarId::t(k as u32));
            v.iter().map(|p| p * &t).collect()
        } else {
            v
        }
    };
    let mut inner = scale(h.eval(&tuple_vars(1, n)), 1);
    for k in 2..=j {
        let arg = add_vec(&tuple_vars(k as u32, n), &inner);
        inner = scale(h.eval(&arg), k);
    }
    for k in j + 1..=r {
        inner = jac.rename_to_tuple(k as u32)?.mul_vec(&inner)?;
    }
    Ok(inner)
}

/// The Jacobian of `v` with respect to `y^(1)` is the zero matrix.
fn vanishing_in_first_tuple(v: &[Poly], n: usize) -> bool {
    let ys = VarId::ys(1, n);
    v.iter().all(|p| ys.iter().all(|&y| p.derivative(y).is_zero()))
}

pub fn cor22_check(h: &PolyMap, r: usize, statement: u8, j: Option<usize>) -> Result<Cor22Outcome> {
    if r < 1 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    if let Some(j) = j {
        if j < 1 || j > r {
            return Err(Error::InvalidArgument(format!("j = {j} outside 1..={r}")));
        }
    }
    let jac = h.jacobian();
    let n = h.dim();
    let (holds, evidence) = match statement {
        1 => {
            let zero = jac.fresh_tuple_product(r as u32)?.is_zero();
            (zero, Cor22Evidence::TupleProduct { zero })
        }
        2 => match triangularize(&jac)? {
            Triangularization::Certified(cert) if cert.index() <= r => {
                let target = r.min(n);
                let blocks = refine_blocks(&cert.blocks, target)
                    .ok_or_else(|| Error::Inconsistent("cannot refine block sizes".into()))?;
                let hat = h.conjugate(&cert.t)?;
                let ok = has_strict_block_lower_form(&hat.jacobian(), &blocks);
                if !ok {
                    return Err(Error::Inconsistent("conjugated map Jacobian lost the block form (chain rule)".into()));
                }
                (true, Cor22Evidence::BlockForm { t: cert.t.to_strings(), blocks })
            }
            other => (false, Cor22Evidence::NoBlockForm { strong_index: other.index() }),
        },
        3 | 4 => {
            let with_t = statement == 3;
            let js: Vec<usize> = match j {
                Some(j) => vec![j],
                None => (1..=r).collect(),
            };
            let mut results = Vec::with_capacity(js.len());
            for j in js {
                let expr = nested_expression(h, &jac, r, j, with_t)?;
                results.push((j, vanishing_in_first_tuple(&expr, n)));
            }
            let holds = if with_t { results.iter().all(|&(_, ok)| ok) } else { results.iter().any(|&(_, ok)| ok) };
            (holds, Cor22Evidence::PerJ { results })
        }
        s => return Err(Error::InvalidArgument(format!("statement must be 1..=4, got {s}"))),
    };
    Ok(Cor22Outcome { statement, holds, evidence })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cor22Report {
    pub r: usize,
    pub outcomes: Vec<Cor22Outcome>,
    pub agree: bool,
}

impl Cor22Report {
    pub fn verdicts(&self) -> Vec<bool> {
        self.outcomes.iter().map(|o| o.holds).collect()
    }
}

/// Evaluates all four statements; `agree` is false only on a defect.
pub fn cor22_equivalence_suite(h: &PolyMap, r: usize) -> Result<Cor22Report> {
    let outcomes = (1..=4).map(|s| cor22_check(h, r, s, None)).collect::<Result<Vec<_>>>()?;
    let agree = outcomes.iter().all(|o| o.holds == outcomes[0].holds);
    Ok(Cor22Report { r, outcomes, agree })
}

// ---------------------------------------------------------------------------
// Quasi-translations
// ---------------------------------------------------------------------------

/// `x + H` is a quasi-translation iff `JH * H = 0`; cross-checked against
/// `(x+H)∘(x-H) = x = (x-H)∘(x+H)`.
pub fn is_quasi_translation(h: &PolyMap) -> Result<bool> {
    let jh_h = h.jacobian().mul_vec(h.components())?;
    let by_jacobian = jh_h.iter().all(Poly::is_zero);
    let plus = h.shifted_identity(&Scalar::one());
    let minus = h.shifted_identity(&-Scalar::one());
    let id = PolyMap::identity(h.dim());
    let by_inverse = plus.compose(&minus)? == id && minus.compose(&plus)? == id;
    if by_jacobian != by_inverse {
        return Err(Error::Inconsistent(format!("JH*H = 0 is {by_jacobian} but inverse check is {by_inverse}")));
    }
    Ok(by_jacobian)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Qt2Report {
    /// `JH * JH|_{x=y} = 0`.
    pub anchor: bool,
    /// `JH * H(y) = 0`.
    pub s1: bool,
    /// Linear coordinates with `Ĥ_i = 0` for `i <= s` and the rest in `x1..xs`.
    pub s2: bool,
    /// `H(x + t H(y)) = H`.
    pub s3: bool,
    /// `H(x + H(y)) = H`.
    pub s4: bool,
    pub s: Option<usize>,
    pub t: Option<Vec<Vec<String>>>,
    pub agree: bool,
}

impl Qt2Report {
    pub fn all(&self) -> [bool; 5] {
        [self.anchor, self.s1, self.s2, self.s3, self.s4]
    }
}

fn coordinates_witness(h: &PolyMap) -> Result<Option<(QMatrix, usize)>> {
    let n = h.dim();
    let jac = h.jacobian();
    if jac.is_zero() {
        return Ok(Some((QMatrix::identity(n), 0)));
    }
    match triangularize(&jac)? {
        Triangularization::Certified(cert) if cert.index() <= 2 => Ok(Some((cert.t, cert.blocks[0]))),
        _ => Ok(None),
    }
}

fn in_leading_coordinates(h: &PolyMap, s: usize) -> bool {
    h.components().iter().enumerate().all(|(i, c)| {
        if i < s {
            c.is_zero()
        } else {
            c.variables().iter().all(|v| matches!(v, VarId::X(k) if (*k as usize) <= s))
        }
    })
}

pub fn qt2_suite(h: &PolyMap) -> Result<Qt2Report> {
    if !is_quasi_translation(h)? {
        return Err(Error::Precondition("x + H is not a quasi-translation".into()));
    }
    let n = h.dim();
    let jac = h.jacobian();
    let anchor = anchor_identity(h)?;
    let h_y = rename_vec(h.components(), 1);
    let s1 = jac.mul_vec(&h_y)?.iter().all(Poly::is_zero);

    let (s2, s, t) = match coordinates_witness(h)? {
        Some((t, s)) => {
            let hat = h.conjugate(&t)?;
            (in_leading_coordinates(&hat, s), Some(s), Some(t.to_strings()))
        }
        None => (false, None, None),
    };

    let x = tuple_vars_x(n);
    let t1 = Poly::var(VarId::t(1));
    let arg3: Vec<Poly> = x.iter().zip(&h_y).map(|(xi, hy)| xi + &(hy * &t1)).collect();
    let s3 = h.eval(&arg3) == h.components();
    let arg4 = add_vec(&x, &h_y);
    let s4 = h.eval(&arg4) == h.components();

    let all = [anchor, s1, s2, s3, s4];
    let agree = all.iter().all(|&b| b == anchor);
    Ok(Qt2Report { anchor, s1, s2, s3, s4, s, t, agree })
}

fn tuple_vars_x(n: usize) -> Vec<Poly> {
    VarId::xs(n).into_iter().map(Poly::var).collect()
}

// ---------------------------------------------------------------------------
// Rank-one Keller maps
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rank1Report {
    pub rank: usize,
    pub det: String,
    /// H has no linear terms.
    pub no_linear_terms: bool,
    /// det J(x + H) = 1.
    pub det_one: bool,
    /// JH * JH|_{x=y} = 0.
    pub anchor: bool,
    /// (1) => (2) and (2) => (3).
    pub chain_respected: bool,
}

pub fn rank1_analysis(h: &PolyMap) -> Result<Rank1Report> {
    let jac = h.jacobian();
    let rank = poly_rank(&jac);
    let f_jac = jac.add(&PolyMatrix::identity(h.dim()))?;
    let det = poly_det(&f_jac)?;
    if rank != 1 {
        return Err(Error::Precondition(format!("rank of JH is {rank}, expected 1")));
    }
    match det.as_constant() {
        Some(c) if !c.is_zero() => {}
        _ => return Err(Error::Precondition(format!("det J(x+H) = {det} is not a nonzero constant"))),
    }
    let no_linear_terms = !h.has_linear_terms();
    let det_one = det == Poly::one();
    let anchor = anchor_identity(h)?;
    let chain_respected = (!no_linear_terms || det_one) && (!det_one || anchor);
    Ok(Rank1Report { rank, det: det.to_string(), no_linear_terms, det_one, anchor, chain_respected })
}

/// For a nonzero quasi-translation with `deg H <= 1` or `rk JH = 1`,
/// returns whether `JH * JH|_{x=y} = 0`.
pub fn final_corollary_check(h: &PolyMap) -> Result<bool> {
    if h.is_zero() {
        return Err(Error::Precondition("H is the zero map".into()));
    }
    if !is_quasi_translation(h)? {
        return Err(Error::Precondition("x + H is not a quasi-translation".into()));
    }
    let affine = h.degree().is_some_and(|d| d <= 1);
    if !affine && poly_rank(&h.jacobian()) != 1 {
        return Err(Error::Precondition("need deg H = 1 or rk JH = 1".into()));
    }
    anchor_identity(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::scalar;

    fn map(c: &[&str]) -> PolyMap {
        PolyMap::parse(c).unwrap()
    }

    #[test]
    fn jacobian_small() {
        let j = map(&["x2", "x1"]).jacobian();
        assert_eq!(j.to_strings(), vec![vec!["0", "1"], vec!["1", "0"]]);
        let j = map(&["0", "x1^2"]).jacobian();
        assert_eq!(j.to_strings(), vec![vec!["0", "0"], vec!["2*x1", "0"]]);
    }

    #[test]
    fn compose_identity() {
        let f = map(&["x1*x2 + 1", "x2^3"]);
        assert_eq!(f.compose(&PolyMap::identity(2)).unwrap(), f);
        assert_eq!(PolyMap::identity(2).compose(&f).unwrap(), f);
        assert!(f.compose(&PolyMap::identity(3)).is_err());
    }

    #[test]
    fn quasi_translation_examples() {
        let qt3 = map(&["0", "x1^2", "x1^3"]);
        let plus = qt3.shifted_identity(&scalar(1));
        let minus = qt3.shifted_identity(&scalar(-1));
        assert_eq!(plus.compose(&minus).unwrap(), PolyMap::identity(3));
        assert!(is_quasi_translation(&qt3).unwrap());
        assert!(!is_quasi_translation(&map(&["x1", "0"])).unwrap());
        assert!(is_quasi_translation(&map(&["3", "-1/2"])).unwrap());
    }

    #[test]
    fn map_rejects_foreign_variables() {
        assert!(PolyMap::parse(&["x3", "0"]).is_err());
    }

    #[test]
    fn conjugate_identity_and_inverse() {
        let h = map(&["0", "x1^2", "x1^3"]);
        assert_eq!(h.conjugate(&QMatrix::identity(3)).unwrap(), h);
        let t = QMatrix::from_rows(vec![
            vec![scalar(1), scalar(0), scalar(2)],
            vec![scalar(0), scalar(1), scalar(0)],
            vec![scalar(1), scalar(-1), scalar(3)],
        ])
        .unwrap();
        let back = h.conjugate(&t).unwrap().conjugate(&t.invert().unwrap()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn zero_map_cor22() {
        let z = map(&["0", "0"]);
        let rep = cor22_equivalence_suite(&z, 1).unwrap();
        assert_eq!(rep.verdicts(), vec![true; 4]);
        assert!(rep.agree);
    }

    #[test]
    fn cor22_rejects_bad_arguments() {
        let h = map(&["0", "x1^2"]);
        assert!(cor22_check(&h, 2, 3, Some(3)).is_err());
        assert!(cor22_check(&h, 2, 5, None).is_err());
        assert!(cor22_check(&h, 0, 1, None).is_err());
    }

    #[test]
    fn rank1_cases() {
        let r = rank1_analysis(&map(&["x2^2", "0"])).unwrap();
        assert_eq!((r.no_linear_terms, r.det_one, r.anchor, r.chain_respected), (true, true, true, true));
        let r = rank1_analysis(&map(&["x2^2 + x2", "0"])).unwrap();
        assert_eq!((r.no_linear_terms, r.det_one, r.anchor, r.chain_respected), (false, true, true, true));
        assert!(matches!(rank1_analysis(&map(&["0", "0"])), Err(Error::Precondition(_))));
    }

    #[test]
    fn final_corollary_cases() {
        assert!(final_corollary_check(&map(&["0", "x1"])).unwrap());
        assert!(final_corollary_check(&map(&["0", "x1^2", "x1^3"])).unwrap());
        assert!(final_corollary_check(&map(&["5", "0"])).unwrap());
        assert!(final_corollary_check(&map(&["0", "0"])).is_err());
        assert!(final_corollary_check(&map(&["x1", "0"])).is_err());
    }

    #[test]
    fn qt2_linear_nilpotent() {
        let rep = qt2_suite(&map(&["0", "x1"])).unwrap();
        assert_eq!(rep.all(), [true; 5]);
        assert_eq!(rep.s, Some(1));
    }
}
