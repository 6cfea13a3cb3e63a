//! Matrix functions through interpolation polynomials, with a-priori error
//! certificates.
//!
//! The numerical core is generic over the real scalar type (`f32` or `f64`)
//! through [`Real`]; the aliases below fix it to `f64`, which is what the
//! experiment driver, the Matrix Market reader and the CLI use.

pub mod bounds;
pub mod config;
pub mod demo;
pub mod error;
pub mod experiment;
pub mod hull;
pub mod interp;
pub mod linalg;
pub mod mmio;
pub mod scalar;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use scalar::{Complex, Real};

/// Dense square complex matrix in double precision.
pub type ComplexMatrix = linalg::CMatrix<f64>;
/// Dense complex matrix in single precision.
pub type ComplexMatrix32 = linalg::CMatrix<f32>;
pub type SchurForm = linalg::SchurForm<f64>;
pub type NodeSet = interp::NodeSet<f64>;
pub type NewtonPolynomial = interp::NewtonPolynomial<f64>;
pub type HullPolygon = hull::HullPolygon<f64>;
pub type C64 = Complex<f64>;
