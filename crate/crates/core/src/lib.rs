//! Structural analysis of low-degree polynomials over prime fields.

pub mod bias;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod factor;
pub mod ffpoly;
pub mod field;
pub mod linalg;
pub mod nullstellensatz;
pub mod oracle;
pub mod rmcode;
pub mod rng;
pub mod variety;

pub use error::{Error, Result};
pub use ffpoly::{parse_poly, parse_poly_list, MultiPoly};
pub use field::FieldCtx;
