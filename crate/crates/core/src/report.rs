//! JSON reports shared by the command line tool and the C ABI, and a plain
//! text rendering of them.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::free::{nc_homogeneous_index_theorem_check, FreePolyMatrix};
use crate::linalg::{poly_det, poly_rank};
use crate::maps::{
    cor22_check, cor22_equivalence_suite, final_corollary_check, is_quasi_translation, qt2_suite, rank1_analysis,
    PolyMap,
};
use crate::polymat::PolyMatrix;
use crate::ring::{Coeff, Dual};
use crate::strong::{
    strong_index_direct, triangularize, verify_certificate, StrongNilpotencyVerdict, Triangularization,
};

fn opt(v: Option<usize>) -> Value {
    v.map_or(Value::Null, Value::from)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Indices of a rational matrix. The strong index is computed both directly
/// and by triangularization; disagreement is an error.
pub fn matrix_report(m: &PolyMatrix, r: Option<usize>) -> Result<Value> {
    let regular = m.nilpotency_index()?;
    let direct = strong_index_direct(m)?;
    let tri = triangularize(m)?;
    if direct.index() != tri.index() {
        return Err(Error::Inconsistent(format!(
            "direct strong index {:?} but triangularization gives {:?}",
            direct.index(),
            tri.index()
        )));
    }
    let mut out = Map::new();
    out.insert("ring".into(), json!(crate::ring::Scalar::TAG));
    out.insert("size".into(), json!(m.rows()));
    out.insert("regular".into(), opt(regular));
    out.insert("strong".into(), opt(direct.index()));
    match (&direct, tri.certificate()) {
        (StrongNilpotencyVerdict::StronglyNilpotent { index }, Some(cert)) => {
            out.insert("blocks".into(), json!(cert.blocks));
            out.insert("witness".into(), Value::Null);
            let bounds_ok = regular.map(|reg| reg == *index || (3 <= *index && *index < m.rows()));
            out.insert("index_bounds_ok".into(), json!(bounds_ok));
        }
        (StrongNilpotencyVerdict::NotStronglyNilpotent(w), _) => {
            out.insert("blocks".into(), Value::Null);
            out.insert("witness".into(), w.to_json());
            out.insert("index_bounds_ok".into(), Value::Null);
        }
        _ => unreachable!("indices agree"),
    }
    if let Some(r) = r {
        if r < 1 {
            return Err(Error::InvalidArgument("r must be at least 1".into()));
        }
        let zero = m.fresh_tuple_product(r as u32)?.is_zero();
        out.insert("r_check".into(), json!({ "r": r, "tuple_product_zero": zero }));
    }
    Ok(Value::Object(out))
}

/// Least `r <= bound` whose fresh-tuple product vanishes, for any ring.
fn generic_strong_index<C: Coeff>(m: &PolyMatrix<C>, bound: usize) -> Result<Option<usize>> {
    for r in 1..=bound {
        if m.fresh_tuple_product(r as u32)?.is_zero() {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Indices over the dual numbers. `max_r` overrides the default search
/// bound of twice the size.
pub fn dual_matrix_report(m: &PolyMatrix<Dual>, max_r: Option<usize>) -> Result<Value> {
    let bound = max_r.unwrap_or(2 * m.rows()).max(1);
    Ok(json!({
        "ring": Dual::TAG,
        "size": m.rows(),
        "search_bound": bound,
        "regular": opt(m.nilpotency_index_bounded(bound)?),
        "strong": opt(generic_strong_index(m, bound)?),
    }))
}

pub fn triangularize_report(m: &PolyMatrix) -> Result<Value> {
    Ok(match triangularize(m)? {
        Triangularization::Certified(cert) => {
            let conj = m.conjugate(&cert.t)?;
            json!({
                "strongly_nilpotent": true,
                "certificate": cert.to_json(),
                "verified": verify_certificate(m, &cert)?,
                "conjugated": conj.to_strings(),
            })
        }
        Triangularization::NotStronglyNilpotent(w) => json!({
            "strongly_nilpotent": false,
            "witness": w.to_json(),
        }),
    })
}

pub fn map_report(h: &PolyMap) -> Result<Value> {
    let jac = h.jacobian();
    let mut base = matrix_report(&jac, None)?;
    let jf = jac.add(&PolyMatrix::identity(h.dim()))?;
    let extra = json!({
        "n": h.dim(),
        "H": h.components().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "jacobian": jac.to_strings(),
        "degree": h.degree(),
        "homogeneous": h.is_homogeneous(),
        "jacobian_rank": poly_rank(&jac),
        "det_jf": poly_det(&jf)?.to_string(),
        "quasi_translation": is_quasi_translation(h)?,
    });
    let obj = base.as_object_mut().expect("object");
    obj.remove("ring");
    obj.remove("size");
    obj.extend(extra.as_object().expect("object").clone());
    Ok(base)
}

/// Quasi-translation checks. Parts whose preconditions fail are `null`
/// together with the reason.
pub fn qt_report(h: &PolyMap) -> Result<Value> {
    let qt = is_quasi_translation(h)?;
    let mut out = Map::new();
    out.insert("quasi_translation".into(), json!(qt));
    let mut skipped = Map::new();
    let mut section = |name: &str, res: Result<Value>| -> Result<()> {
        match res {
            Ok(v) => {
                out.insert(name.into(), v);
            }
            Err(Error::Precondition(why)) => {
                out.insert(name.into(), Value::Null);
                skipped.insert(name.into(), json!(why));
            }
            Err(e) => return Err(e),
        }
        Ok(())
    };
    section("index_two", qt2_suite(h).map(|r| to_value(&r)))?;
    section("rank_one", rank1_analysis(h).map(|r| to_value(&r)))?;
    section("final_corollary", final_corollary_check(h).map(Value::from))?;
    out.insert("skipped".into(), Value::Object(skipped));
    Ok(Value::Object(out))
}

/// One statement when `statement` is given, else all four with agreement.
/// `r` defaults to the strong index of the Jacobian (or the dimension).
pub fn cor22_report(h: &PolyMap, r: Option<usize>, statement: Option<u8>) -> Result<Value> {
    let r = match r {
        Some(r) => r,
        None => strong_index_direct(&h.jacobian())?.index().unwrap_or(h.dim()),
    };
    match statement {
        Some(s) => {
            let o = cor22_check(h, r, s, None)?;
            Ok(json!({ "r": r, "outcomes": [to_value(&o)] }))
        }
        None => Ok(to_value(&cor22_equivalence_suite(h, r)?)),
    }
}

pub fn nc_report(m: &FreePolyMatrix) -> Result<Value> {
    Ok(to_value(&nc_homogeneous_index_theorem_check(m)?))
}

pub fn nc_counterexample() -> Value {
    to_value(&crate::free::nc_counterexample_report())
}

/// The matrix with `|` between column blocks and a rule between row blocks.
pub fn block_form_text(cells: &[Vec<String>], blocks: &[usize]) -> String {
    let cols = cells.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols).map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(1)).collect();
    let mut cuts = Vec::new();
    let mut acc = 0;
    for b in blocks.iter().take(blocks.len().saturating_sub(1)) {
        acc += b;
        cuts.push(acc);
    }
    let rule: String = {
        let mut s = String::new();
        for (j, w) in widths.iter().enumerate() {
            if cuts.contains(&j) {
                s.push_str("-+-");
            } else if j > 0 {
                s.push_str("--");
            }
            s.push_str(&"-".repeat(*w));
        }
        s
    };
    let mut out = String::new();
    for (i, row) in cells.iter().enumerate() {
        if cuts.contains(&i) {
            out.push_str(&rule);
            out.push('\n');
        }
        let mut line = String::new();
        for (j, cell) in row.iter().enumerate() {
            if cuts.contains(&j) {
                line.push_str(" | ");
            } else if j > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{cell:>w$}", w = widths[j]));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn render_into(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            if !key.is_empty() {
                out.push_str(&format!("{pad}{key}:\n"));
            }
            let inner = if key.is_empty() { indent } else { indent + 1 };
            for (k, v) in map {
                render_into(out, k, v, inner);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || is_matrix(i)) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, item) in items.iter().enumerate() {
                render_into(out, &format!("[{}]", k + 1), item, indent + 1);
            }
        }
        v if is_matrix(v) => {
            out.push_str(&format!("{pad}{key}:\n"));
            let cells = matrix_cells(v);
            for line in block_form_text(&cells, &[cells.len()]).lines() {
                out.push_str(&format!("{pad}  {line}\n"));
            }
        }
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar_text(other))),
    }
}

fn is_matrix(v: &Value) -> bool {
    match v.as_array() {
        Some(rows) if !rows.is_empty() => {
            let width = rows[0].as_array().map_or(0, Vec::len);
            width > 0
                && rows.iter().all(|r| r.as_array().is_some_and(|c| c.len() == width && c.iter().all(Value::is_string)))
        }
        _ => false,
    }
}

fn matrix_cells(v: &Value) -> Vec<Vec<String>> {
    v.as_array()
        .expect("matrix")
        .iter()
        .map(|r| r.as_array().expect("row").iter().map(|c| c.as_str().expect("cell").to_string()).collect())
        .collect()
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Indented `key: value` rendering of a report.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, "", v, 0);
    out
}

/// Text for a triangularization: the report plus the conjugated matrix in
/// block form.
pub fn triangularize_text(v: &Value) -> String {
    let mut out = render_text(&strip(v, "conjugated"));
    if let (Some(conj), Some(blocks)) = (v.get("conjugated"), v.pointer("/certificate/blocks")) {
        let blocks: Vec<usize> = serde_json::from_value(blocks.clone()).expect("block sizes");
        out.push_str("conjugated (block form):\n");
        out.push_str(&block_form_text(&matrix_cells(conj), &blocks));
    }
    out
}

fn strip(v: &Value, key: &str) -> Value {
    let mut v = v.clone();
    if let Some(obj) = v.as_object_mut() {
        obj.remove(key);
    }
    v
}
