//! Built-in corpus of maps and matrices with known verdicts, and a runner
//! that recomputes each verdict and reports mismatches.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::free::{counterexample_matrix, FreePolyMatrix};
use crate::maps::{is_quasi_translation, qt2_suite, rank1_analysis, PolyMap};
use crate::poly::{Poly, Polynomial};
use crate::polymat::PolyMatrix;
use crate::ring::{scalar, Dual};
use crate::strong::{pair_trace_obstruction, strong_index_direct, triangularize, verify_certificate};
use crate::var::VarId;

/// What a fixture is made of.
#[derive(Clone, Debug)]
pub enum Subject {
    Map(PolyMap),
    Free(FreePolyMatrix),
    Dual(PolyMatrix<Dual>),
}

impl Subject {
    /// The commutative matrix an index analysis runs on: the Jacobian for a
    /// map, the abelianization for a free matrix.
    pub fn rational_matrix(&self) -> Option<PolyMatrix> {
        match self {
            Subject::Map(h) => Some(h.jacobian()),
            Subject::Free(m) => Some(m.abelianize()),
            Subject::Dual(_) => None,
        }
    }
}

/// Recorded verdicts a fixture must reproduce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    /// Jacobian indices.
    Indices {
        regular: usize,
        strong: usize,
    },
    /// Nilpotent of this index (free and commutative) but not strongly nilpotent.
    NilpotentNotStrong {
        nilpotency: usize,
    },
    DualIndex {
        index: usize,
    },
    /// Quasi-translation whose five index-two conditions all equal `all`.
    Qt2 {
        all: bool,
        s: Option<usize>,
    },
    /// Rank-one Keller map: no linear terms, det one, anchor identity.
    RankOne {
        statements: [bool; 3],
    },
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub subject: Subject,
    pub expected: Expected,
}

fn map_fixture(name: &str, components: &[&str], expected: Expected) -> Fixture {
    let h = PolyMap::parse(components).expect("built-in map parses");
    Fixture { name: name.into(), subject: Subject::Map(h), expected }
}

pub fn h4() -> Fixture {
    map_fixture("H4", &["0", "x1^2", "x1^3", "3*x2*x1^2 - 2*x3*x1"], Expected::Indices { regular: 2, strong: 3 })
}

/// `H4` with the sign of its last term flipped; keeps the expected verdict
/// of `H4` so the runner must flag it.
pub fn corrupted_h4() -> Fixture {
    map_fixture("H4", &["0", "x1^2", "x1^3", "3*x2*x1^2 + 2*x3*x1"], Expected::Indices { regular: 2, strong: 3 })
}

pub fn h6() -> Fixture {
    map_fixture(
        "H6",
        &["0", "0", "x1^3", "x1^2*x2", "x1*x2^2", "x3*x2^2 - 2*x4*x1*x2 + x5*x1^2"],
        Expected::Indices { regular: 2, strong: 3 },
    )
}

/// Dimension-5 family of degree `d >= 2`.
pub fn h5(d: u32) -> Result<Fixture> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("H5 needs d >= 2, got {d}")));
    }
    let x = |i| Poly::var(VarId::x(i));
    let p = |i: u32, e: u32| x(i).pow(e);
    let h = vec![
        Poly::zero(),
        p(1, d),
        &p(1, d - 1) * &x(2),
        &p(1, d - 2) * &p(2, 2),
        &(&(&p(1, d - 2) * &x(2)) * &x(3)).scale(&scalar(2)) - &(&p(1, d - 1) * &x(4)),
    ];
    Ok(Fixture {
        name: format!("H5(d={d})"),
        subject: Subject::Map(PolyMap::new(h)?),
        expected: Expected::Indices { regular: 3, strong: 4 },
    })
}

pub fn nc3() -> Fixture {
    Fixture {
        name: "NC3".into(),
        subject: Subject::Free(counterexample_matrix()),
        expected: Expected::NilpotentNotStrong { nilpotency: 3 },
    }
}

/// `m x m` matrix over the dual numbers with `eps` in the top-left corner
/// and ones on the subdiagonal.
pub fn dual_matrix(m: usize) -> Result<PolyMatrix<Dual>> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("DUAL needs m >= 2, got {m}")));
    }
    Ok(PolyMatrix::from_fn(m, m, |i, j| {
        if i == 0 && j == 0 {
            Polynomial::constant(Dual::epsilon())
        } else if i == j + 1 {
            Polynomial::one()
        } else {
            Polynomial::zero()
        }
    }))
}

pub fn dual(m: usize) -> Result<Fixture> {
    Ok(Fixture {
        name: format!("DUAL(m={m})"),
        subject: Subject::Dual(dual_matrix(m)?),
        expected: Expected::DualIndex { index: m + 1 },
    })
}

pub fn qt3() -> Fixture {
    map_fixture("QT3", &["0", "x1^2", "x1^3"], Expected::Qt2 { all: true, s: Some(1) })
}

/// A quasi-translation `g * (0, 0, x1, x2)` with `g = x1*x4 - x2*x3` whose
/// Jacobian is not of strong index two.
pub fn qt4() -> Fixture {
    map_fixture("QT4", &["0", "0", "x1^2*x4 - x1*x2*x3", "x1*x2*x4 - x2^2*x3"], Expected::Qt2 { all: false, s: None })
}

pub fn r1() -> Fixture {
    map_fixture("R1", &["x2^2", "0"], Expected::RankOne { statements: [true, true, true] })
}

/// `R1` with a linear term added.
pub fn r1_linear() -> Fixture {
    map_fixture("R1L", &["x2^2 + x2", "0"], Expected::RankOne { statements: [false, true, true] })
}

/// Looks up a fixture by name; `d` and `m` parameterize `H5` and `DUAL`.
pub fn fixture(name: &str, d: Option<u32>, m: Option<usize>) -> Result<Fixture> {
    match name.to_ascii_uppercase().as_str() {
        "H4" => Ok(h4()),
        "H6" => Ok(h6()),
        "H5" => h5(d.unwrap_or(2)),
        "NC3" => Ok(nc3()),
        "DUAL" => dual(m.unwrap_or(3)),
        "QT3" => Ok(qt3()),
        "QT4" => Ok(qt4()),
        "R1" => Ok(r1()),
        "R1L" => Ok(r1_linear()),
        _ => Err(Error::Input(format!("unknown fixture {name:?}; known: H4, H6, H5, NC3, DUAL, QT3, QT4, R1, R1L"))),
    }
}

pub fn default_corpus() -> Vec<Fixture> {
    let mut out = vec![h4(), h6()];
    out.extend((2..=4).map(|d| h5(d).expect("d >= 2")));
    out.push(nc3());
    out.extend((2..=4).map(|m| dual(m).expect("m >= 2")));
    out.extend([qt3(), qt4(), r1(), r1_linear()]);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub expected: Expected,
    pub observed: Value,
    pub pass: bool,
}

fn opt(v: Option<usize>) -> Value {
    v.map_or(Value::Null, Value::from)
}

struct IndexObservation {
    json: Value,
    regular: Option<usize>,
    direct: Option<usize>,
    triangularized: Option<usize>,
    cert_ok: bool,
}

fn index_observation(m: &PolyMatrix) -> Result<IndexObservation> {
    let regular = m.nilpotency_index()?;
    let direct = strong_index_direct(m)?.index();
    let tri = triangularize(m)?;
    let (cert_ok, blocks) = match tri.certificate() {
        Some(c) => (verify_certificate(m, c)?, Some(c.blocks.clone())),
        None => (true, None),
    };
    let observed = json!({
        "regular": opt(regular),
        "strong_direct": opt(direct),
        "strong_triangularized": opt(tri.index()),
        "blocks": blocks,
        "certificate_ok": cert_ok,
    });
    Ok(IndexObservation { json: observed, regular, direct, triangularized: tri.index(), cert_ok })
}

pub fn evaluate(f: &Fixture) -> Result<FixtureResult> {
    let (observed, pass) = match (&f.expected, &f.subject) {
        (Expected::Indices { regular, strong }, subject) => {
            let m = subject
                .rational_matrix()
                .ok_or_else(|| Error::Input(format!("{}: index check needs a rational matrix", f.name)))?;
            let o = index_observation(&m)?;
            let pass = o.regular == Some(*regular)
                && o.direct == Some(*strong)
                && o.triangularized == Some(*strong)
                && o.cert_ok;
            (o.json, pass)
        }
        (Expected::NilpotentNotStrong { nilpotency }, Subject::Free(free)) => {
            let comm = free.abelianize();
            let free_index = free.nilpotency_index(free.size());
            let comm_index = comm.nilpotency_index()?;
            let strong = strong_index_direct(&comm)?.index();
            let trace = pair_trace_obstruction(&comm)?;
            let obs = json!({
                "nilpotency_free": opt(free_index),
                "nilpotency_commutative": opt(comm_index),
                "strong": opt(strong),
                "pair_trace": trace.as_ref().map_or_else(|| "0".to_string(), |t| t.to_string()),
            });
            let pass = free_index == Some(*nilpotency) && comm_index == Some(*nilpotency) && strong.is_none();
            (obs, pass)
        }
        (Expected::DualIndex { index }, Subject::Dual(m)) => {
            let got = m.nilpotency_index()?;
            (json!({ "index": opt(got) }), got == Some(*index))
        }
        (Expected::Qt2 { all, s }, Subject::Map(h)) => {
            if !is_quasi_translation(h)? {
                (json!({ "quasi_translation": false }), false)
            } else {
                let rep = qt2_suite(h)?;
                let pass = rep.agree && rep.anchor == *all && rep.s == *s;
                (serde_json::to_value(&rep).expect("serializable"), pass)
            }
        }
        (Expected::RankOne { statements }, Subject::Map(h)) => {
            let rep = rank1_analysis(h)?;
            let got = [rep.no_linear_terms, rep.det_one, rep.anchor];
            let pass = got == *statements && rep.chain_respected && rep.rank == 1 && rep.det == Poly::one().to_string();
            (serde_json::to_value(&rep).expect("serializable"), pass)
        }
        _ => return Err(Error::Input(format!("{}: expected verdict does not fit its subject", f.name))),
    };
    Ok(FixtureResult { name: f.name.clone(), expected: f.expected.clone(), observed, pass })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub fixtures: Vec<FixtureResult>,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
}

pub fn run_suite(corpus: &[Fixture]) -> Result<SuiteReport> {
    let fixtures = corpus.iter().map(evaluate).collect::<Result<Vec<_>>>()?;
    let passed = fixtures.iter().filter(|r| r.pass).count();
    let failed = fixtures.len() - passed;
    Ok(SuiteReport { fixtures, passed, failed, all_pass: failed == 0 })
}

/// Runs the default corpus.
pub fn run_fixture_suite() -> Result<SuiteReport> {
    run_suite(&default_corpus())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let rep = run_fixture_suite().unwrap();
        for r in &rep.fixtures {
            assert!(r.pass, "{} failed: {}", r.name, r.observed);
        }
        assert!(rep.all_pass);
    }

    #[test]
    fn corrupted_h4_is_flagged() {
        let mut corpus = default_corpus();
        corpus[0] = corrupted_h4();
        let rep = run_suite(&corpus).unwrap();
        assert_eq!(rep.failed, 1);
        assert!(!rep.fixtures[0].pass);
    }

    #[test]
    fn lookup() {
        assert_eq!(fixture("h5", Some(3), None).unwrap().name, "H5(d=3)");
        assert!(fixture("H5", Some(1), None).is_err());
        assert!(fixture("DUAL", None, Some(1)).is_err());
        assert!(matches!(fixture("nope", None, None), Err(Error::Input(_))));
    }

    #[test]
    fn dual_corner() {
        let m = dual_matrix(3).unwrap();
        let mut p = m.clone();
        for _ in 1..3 {
            p = p.mat_mul(&m).unwrap();
        }
        assert_eq!(p.get(2, 0), &Polynomial::constant(Dual::epsilon()));
        assert_eq!(p.entries().iter().filter(|e| !e.is_zero()).count(), 1);
    }
}
