//! JSON input files.
//!
//! Matrix: `{"n": 3, "m": 3, "M": [["x1", "0", ...], ...], "ring": "Q"}`
//! where `n` is the number of variables and `ring` is `"Q"` (default) or
//! `"Q[eps]"`. Map: `{"n": 3, "H": ["0", "x1^2", "x1^3"]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free::{FreePoly, FreePolyMatrix};
use crate::maps::PolyMap;
use crate::parse::parse_poly;
use crate::poly::Polynomial;
use crate::polymat::PolyMatrix;
use crate::ring::{Coeff, Dual, Scalar};
use crate::var::VarId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixInput {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "M")]
    pub entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapInput {
    pub n: usize,
    #[serde(rename = "H")]
    pub components: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    Rational,
    Dual,
}

impl Ring {
    pub fn parse(s: Option<&str>) -> Result<Ring> {
        match s.map(str::trim) {
            None | Some("Q") => Ok(Ring::Rational),
            Some("Q[eps]") => Ok(Ring::Dual),
            Some(other) => Err(Error::Input(format!("unknown ring {other:?}; expected \"Q\" or \"Q[eps]\""))),
        }
    }
}

/// A matrix loaded over the ring its file asks for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoadedMatrix {
    Rational(PolyMatrix),
    Dual(PolyMatrix<Dual>),
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Input(format!("malformed JSON: {e}"))
}

impl MatrixInput {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    fn check_shape(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Input("matrix size m must be at least 1".into()));
        }
        if self.entries.len() != self.m {
            return Err(Error::SizeMismatch(format!("\"M\" has {} rows, m = {}", self.entries.len(), self.m)));
        }
        if let Some((i, row)) = self.entries.iter().enumerate().find(|(_, r)| r.len() != self.m) {
            return Err(Error::SizeMismatch(format!("row {} has {} entries, m = {}", i + 1, row.len(), self.m)));
        }
        Ok(())
    }

    fn parse_entries<T>(&self, parse: impl Fn(&str, &[VarId]) -> Result<T>) -> Result<Vec<Vec<T>>> {
        self.check_shape()?;
        let vars = VarId::xs(self.n);
        self.entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, s)| {
                        parse(s, &vars).map_err(|e| Error::Input(format!("entry ({}, {}): {e}", i + 1, j + 1)))
                    })
                    .collect()
            })
            .collect()
    }

    fn polys<C: Coeff>(&self) -> Result<PolyMatrix<C>> {
        let rows = self.parse_entries(|s, vars| parse_poly::<C>(s, vars).map_err(Error::from))?;
        PolyMatrix::from_rows(rows)
    }

    pub fn load(&self) -> Result<LoadedMatrix> {
        match Ring::parse(self.ring.as_deref())? {
            Ring::Rational => Ok(LoadedMatrix::Rational(self.polys::<Scalar>()?)),
            Ring::Dual => Ok(LoadedMatrix::Dual(self.polys::<Dual>()?)),
        }
    }

    /// Entries read as noncommutative polynomials.
    pub fn load_free(&self) -> Result<FreePolyMatrix> {
        if Ring::parse(self.ring.as_deref())? != Ring::Rational {
            return Err(Error::Input("free matrices are over Q only".into()));
        }
        FreePolyMatrix::from_rows(self.parse_entries(FreePoly::parse)?)
    }

    pub fn from_matrix<C: Coeff>(m: &PolyMatrix<C>, n: usize) -> Self {
        MatrixInput {
            n,
            m: m.rows(),
            entries: m.to_strings(),
            ring: (C::TAG != Scalar::TAG).then(|| C::TAG.to_string()),
        }
    }
}

impl MapInput {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn load(&self) -> Result<PolyMap> {
        if self.components.len() != self.n {
            return Err(Error::SizeMismatch(format!("\"H\" has {} components, n = {}", self.components.len(), self.n)));
        }
        let vars = VarId::xs(self.n);
        let comps = self
            .components
            .iter()
            .enumerate()
            .map(|(i, s)| parse_poly::<Scalar>(s, &vars).map_err(|e| Error::Input(format!("component {}: {e}", i + 1))))
            .collect::<Result<Vec<Polynomial>>>()?;
        PolyMap::new(comps)
    }

    pub fn from_map(h: &PolyMap) -> Self {
        MapInput { n: h.dim(), components: h.components().iter().map(|c| c.to_string()).collect() }
    }
}

pub fn load_matrix_json(text: &str) -> Result<LoadedMatrix> {
    MatrixInput::from_json(text)?.load()
}

pub fn load_map_json(text: &str) -> Result<PolyMap> {
    MapInput::from_json(text)?.load()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_rational_and_dual() {
        let m = load_matrix_json(r#"{"n": 1, "m": 2, "M": [["0", "0"], ["x1", "0"]]}"#).unwrap();
        assert!(matches!(m, LoadedMatrix::Rational(ref p) if p.get(1, 0).to_string() == "x1"));
        let d = load_matrix_json(r#"{"n": 0, "m": 2, "M": [["eps", "0"], ["1", "0"]], "ring": "Q[eps]"}"#).unwrap();
        assert!(matches!(d, LoadedMatrix::Dual(_)));
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            r#"{"n": 1, "m": 2, "M": [["0", "0"]]}"#,
            r#"{"n": 1, "m": 2, "M": [["0", "0"], ["x2", "0"]]}"#,
            r#"{"n": 1, "m": 1, "M": [["eps"]]}"#,
            r#"{"n": 1, "m": 1, "M": [["0"]], "ring": "Z"}"#,
            r#"{"n": 1, "m": 1}"#,
            "not json",
        ] {
            assert!(load_matrix_json(text).is_err(), "{text}");
        }
        assert!(load_map_json(r#"{"n": 2, "H": ["x1"]}"#).is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = load_map_json(r#"{"n": 2, "H": ["x1 + ", "0"]}"#).unwrap_err().to_string();
        assert!(err.contains("component 1") && err.contains("position"), "{err}");
    }

    #[test]
    fn map_round_trip() {
        let h = load_map_json(r#"{"n": 3, "H": ["0", "x1^2", "x1^3"]}"#).unwrap();
        let text = serde_json::to_string(&MapInput::from_map(&h)).unwrap();
        assert_eq!(load_map_json(&text).unwrap(), h);
    }
}
