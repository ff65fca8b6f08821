//! Exact computer algebra for strongly nilpotent polynomial matrices.
//!
//! The engine computes regular and strong nilpotency indices of matrices of
//! multivariate polynomials over the rationals, produces and checks linear
//! triangularization certificates, and analyses polynomial maps through
//! their Jacobians (quasi-translations, rank-one Keller maps).

pub mod error;
pub mod fixtures;
pub mod free;
pub mod input;
pub mod limits;
pub mod linalg;
pub mod maps;
pub mod parse;
pub mod poly;
pub mod polymat;
pub mod random;
pub mod report;
pub mod ring;
pub mod strong;
pub mod var;

pub use error::{Error, ParseError, Result};
pub use free::{FreePoly, FreePolyMatrix, Word};
pub use linalg::{complete_basis, poly_det, poly_rank, QMatrix};
pub use maps::PolyMap;
pub use parse::parse_poly;
pub use poly::{DegreeInfo, Poly, Polynomial};
pub use polymat::{CoefficientDecomposition, PolyMatrix};
pub use ring::{Coeff, Dual, Scalar};
pub use strong::{
    strong_index_direct, triangularize, verify_certificate, StrongNilpotencyVerdict, Triangularization,
    TriangularizationCertificate, Witness,
};
pub use var::{Monomial, VarId};
