//! Maximum rank-distance (MRD) codes in the bilinear-forms space of m x n
//! matrices over GF(q): finite-field towers, linearized polynomials, twisted
//! Gabidulin style constructions with row-supported MRD subcodes, subcode
//! switching, and non-linearity invariants.

pub mod anticode;
pub mod code;
pub mod constructions;
pub mod error;
pub mod field;
pub mod invariants;
pub mod io;
pub mod linpoly;
pub mod matrix;
pub mod subspace;
pub mod switching;
pub mod tower;

pub use code::{CodeBody, CodeParams, RankCode};
pub use error::{Error, Result};
pub use field::{Elem, Field, FieldElement};
pub use linpoly::LinPoly;
pub use matrix::Matrix;
pub use subspace::Subspace;
pub use tower::{Extension, TowerEmbedding};
