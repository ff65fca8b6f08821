//! Library results checked against independent, deliberately naive
//! computations: cofactor expansion, brute-force minors, term-by-term
//! derivatives and numeric evaluation at rational points.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strongnil::fixtures::{self, Subject};
use strongnil::random::Generator;
use strongnil::ring::{ratio, scalar};
use strongnil::strong::strong_index_direct;
use strongnil::{parse_poly, poly_det, poly_rank, Monomial, Poly, PolyMap, PolyMatrix, QMatrix, Scalar, VarId};

fn p(s: &str, n: usize) -> Poly {
    parse_poly(s, &VarId::xs(n)).unwrap()
}

fn matrix(rows: &[&[&str]], n: usize) -> PolyMatrix {
    PolyMatrix::from_rows(rows.iter().map(|r| r.iter().map(|s| p(s, n)).collect()).collect()).unwrap()
}

/// Laplace expansion along the first row.
fn cofactor_det(rows: &[Vec<Poly>]) -> Poly {
    if rows.is_empty() {
        return Poly::one();
    }
    let mut acc = Poly::zero();
    for (j, pivot) in rows[0].iter().enumerate() {
        if pivot.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let term = pivot * &cofactor_det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn grid(m: &PolyMatrix) -> Vec<Vec<Poly>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Largest k with a nonzero k x k minor.
fn minor_rank(m: &PolyMatrix) -> usize {
    let g = grid(m);
    for k in (1..=m.rows().min(m.cols())).rev() {
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let sub: Vec<Vec<Poly>> = rs.iter().map(|&i| cs.iter().map(|&j| g[i][j].clone()).collect()).collect();
                if !cofactor_det(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

fn eval(p: &Poly, point: &BTreeMap<VarId, Scalar>) -> Scalar {
    let mut acc = Scalar::zero();
    for (mono, c) in p.terms() {
        let mut t = c.clone();
        for &(v, e) in mono.pairs() {
            for _ in 0..e {
                t *= &point[&v];
            }
        }
        acc += t;
    }
    acc
}

fn eval_matrix(m: &PolyMatrix, point: &BTreeMap<VarId, Scalar>) -> Vec<Vec<Scalar>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| eval(m.get(i, j), point)).collect()).collect()
}

fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).fold(Scalar::zero(), |s, k| s + &a[i][k] * &b[k][j])).collect()).collect()
}

fn is_zero(a: &[Vec<Scalar>]) -> bool {
    a.iter().flatten().all(Zero::is_zero)
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> BTreeMap<VarId, Scalar> {
    VarId::xs(n).into_iter().map(|v| (v, ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)))).collect()
}

fn variable_count(m: &PolyMatrix) -> usize {
    m.entries()
        .iter()
        .flat_map(|e| e.variables())
        .filter_map(|v| match v {
            VarId::X(i) => Some(i as usize),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// Largest r for which a product of r evaluations at independent random
/// points is nonzero, plus one. A lower bound on the strong index that is
/// exact with high probability; with one point per factor repeated it
/// bounds the regular index instead.
fn sampled_index(m: &PolyMatrix, independent: bool, rng: &mut ChaCha8Rng) -> usize {
    let n = variable_count(m).max(1);
    let size = m.rows();
    let mut best = 1;
    for _ in 0..4 {
        let shared = random_point(rng, n);
        let mut prod: Vec<Vec<Scalar>> = (0..size)
            .map(|i| (0..size).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
            .collect();
        for r in 1..=size {
            let pt = if independent { random_point(rng, n) } else { shared.clone() };
            prod = mat_mul(&eval_matrix(m, &pt), &prod);
            if is_zero(&prod) {
                break;
            }
            best = best.max(r + 1);
        }
    }
    best
}

#[test]
fn determinant_matches_cofactor_expansion() {
    let cases = [
        matrix(&[&["x1", "x2"], &["x2", "x1"]], 2),
        matrix(&[&["1", "x1", "x1^2"], &["1", "x2", "x2^2"], &["1", "x3", "x3^2"]], 3),
        matrix(&[&["0", "x1", "0"], &["x2", "0", "1/3"], &["x1*x2", "x3", "0"]], 3),
        matrix(&[&["x1", "x1"], &["x2", "x2"]], 2),
    ];
    for m in &cases {
        assert_eq!(poly_det(m).unwrap(), cofactor_det(&grid(m)), "{m:?}");
    }
    // Vandermonde
    assert_eq!(poly_det(&cases[1]).unwrap(), p("(x2 - x1)*(x3 - x1)*(x3 - x2)", 3));
    let mut g = Generator::new(11);
    for _ in 0..20 {
        let (m, _) = g.strongly_nilpotent_matrix(4);
        let shifted = m.add(&PolyMatrix::identity(m.rows())).unwrap();
        assert_eq!(poly_det(&shifted).unwrap(), cofactor_det(&grid(&shifted)));
        // det(I + N) = 1 for nilpotent N
        assert_eq!(poly_det(&shifted).unwrap(), Poly::one());
    }
}

#[test]
fn rank_matches_largest_nonzero_minor() {
    let mut g = Generator::new(12);
    let mut mats = vec![
        matrix(&[&["x1", "x2", "x1 + x2"], &["x2", "x1", "x1 + x2"], &["0", "0", "0"]], 2),
        matrix(&[&["x1", "x1^2"], &["1", "x1"]], 1),
        PolyMatrix::zeros(3, 2),
    ];
    mats.extend((0..15).map(|_| g.strongly_nilpotent_matrix(4).0));
    for f in [fixtures::h4(), fixtures::h6(), fixtures::r1(), fixtures::qt4()] {
        if let Subject::Map(h) = f.subject {
            mats.push(h.jacobian());
        }
    }
    for m in &mats {
        assert_eq!(poly_rank(m), minor_rank(m), "{m:?}");
    }
}

#[test]
fn jacobian_matches_termwise_derivative() {
    let h = PolyMap::parse(&["0", "x1^2", "x1^3", "3*x2*x1^2 - 2*x3*x1"]).unwrap();
    let jac = h.jacobian();
    for (i, comp) in h.components().iter().enumerate() {
        for (j, v) in VarId::xs(4).into_iter().enumerate() {
            let mut naive = Poly::zero();
            for (mono, c) in comp.terms() {
                let e = mono.exponent(v);
                if e > 0 {
                    let rest =
                        Monomial::from_pairs(mono.pairs().iter().map(|&(w, k)| (w, if w == v { k - 1 } else { k })));
                    naive = &naive + &Poly::term(c * scalar(e as i64), rest);
                }
            }
            assert_eq!(jac.get(i, j), &naive, "entry ({i}, {j})");
        }
    }
    let expected = matrix(
        &[
            &["0", "0", "0", "0"],
            &["2*x1", "0", "0", "0"],
            &["3*x1^2", "0", "0", "0"],
            &["6*x1*x2 - 2*x3", "3*x1^2", "-2*x1", "0"],
        ],
        4,
    );
    assert_eq!(jac, expected);
}

#[test]
fn coefficient_matrices_reconstruct() {
    let mut g = Generator::new(13);
    let h4 = PolyMap::parse(&["0", "x1^2", "x1^3", "3*x2*x1^2 - 2*x3*x1"]).unwrap().jacobian();
    let dec = h4.coefficient_matrices();
    assert_eq!(dec.parts.len(), 4);
    assert!(dec.parts.values().all(|c| !c.is_zero()));
    assert_eq!(dec.reconstruct(), h4);
    for _ in 0..20 {
        let (m, _) = g.strongly_nilpotent_matrix(5);
        assert_eq!(m.coefficient_matrices().reconstruct(), m);
    }
}

#[test]
fn constant_kernel_vectors_annihilate() {
    let mut g = Generator::new(14);
    for _ in 0..20 {
        let (m, _) = g.strongly_nilpotent_matrix(5);
        let kernel = m.constant_column_kernel();
        assert!(!kernel.is_empty(), "strongly nilpotent matrices have a common kernel vector");
        for v in &kernel {
            assert!(m.apply_constant(v).iter().all(Poly::is_zero));
        }
        let basis = QMatrix::from_columns(&kernel, m.cols());
        assert_eq!(basis.rank(), kernel.len());
    }
}

#[test]
fn indices_match_sampled_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut g = Generator::new(16);
    let mut mats: Vec<PolyMatrix> = (0..30).map(|_| g.strongly_nilpotent_matrix(5).0).collect();
    for f in [fixtures::h4(), fixtures::h6(), fixtures::h5(2).unwrap(), fixtures::h5(3).unwrap()] {
        if let Subject::Map(h) = f.subject {
            mats.push(h.jacobian());
        }
    }
    for m in &mats {
        let regular = m.nilpotency_index().unwrap().unwrap();
        let strong = strong_index_direct(m).unwrap().index().unwrap();
        assert_eq!(sampled_index(m, false, &mut rng), regular, "{m:?}");
        assert_eq!(sampled_index(m, true, &mut rng), strong, "{m:?}");
    }
}

#[test]
fn h4_indices_by_hand() {
    // the square of the H4 Jacobian vanishes, but the product at two
    // independent points does not
    let jac = PolyMap::parse(&["0", "x1^2", "x1^3", "3*x2*x1^2 - 2*x3*x1"]).unwrap().jacobian();
    let at = |a: i64, b: i64, c: i64| {
        let pt: BTreeMap<VarId, Scalar> =
            [(VarId::x(1), scalar(a)), (VarId::x(2), scalar(b)), (VarId::x(3), scalar(c)), (VarId::x(4), scalar(0))]
                .into_iter()
                .collect();
        eval_matrix(&jac, &pt)
    };
    let a = at(1, 2, 3);
    assert!(is_zero(&mat_mul(&a, &a)));
    let b = at(2, 0, 0);
    assert!(!is_zero(&mat_mul(&b, &a)));
    assert!(is_zero(&mat_mul(&at(5, 1, 1), &mat_mul(&b, &a))));
}

#[test]
fn dual_index_matches_real_representation() {
    // a + b*eps acts on Q^2 as [[a, 0], [b, a]]; a dual matrix becomes a
    // 2m x 2m rational matrix whose powers mirror the dual ones
    for m in 2..=5 {
        let dual = fixtures::dual_matrix(m).unwrap();
        let real: Vec<Vec<Scalar>> = (0..2 * m)
            .map(|r| {
                (0..2 * m)
                    .map(|c| {
                        let d = dual
                            .get(r / 2, c / 2)
                            .as_constant()
                            .unwrap_or(strongnil::Dual::new(Scalar::zero(), Scalar::zero()));
                        match (r % 2, c % 2) {
                            (0, 0) | (1, 1) => d.re.clone(),
                            (1, 0) => d.eps.clone(),
                            _ => Scalar::zero(),
                        }
                    })
                    .collect()
            })
            .collect();
        let mut power = real.clone();
        let mut k = 1;
        while !is_zero(&power) {
            power = mat_mul(&power, &real);
            k += 1;
            assert!(k <= 2 * m, "not nilpotent");
        }
        assert_eq!(Some(k), dual.nilpotency_index().unwrap(), "m = {m}");
        assert_eq!(k, m + 1);
    }
}

#[test]
fn fixture_block_shapes() {
    let blocks = |f: fixtures::Fixture| match f.subject {
        Subject::Map(h) => {
            let m = h.jacobian();
            let tri = strongnil::strong::triangularize(&m).unwrap();
            let cert = tri.certificate().unwrap().clone();
            assert!(strongnil::strong::verify_certificate(&m, &cert).unwrap());
            cert
        }
        _ => unreachable!(),
    };
    let h4 = blocks(fixtures::h4());
    assert_eq!(h4.blocks, vec![1, 2, 1]);
    assert!(h4.t.is_identity());
    assert_eq!(blocks(fixtures::h5(3).unwrap()).blocks, vec![1, 1, 2, 1]);
}
