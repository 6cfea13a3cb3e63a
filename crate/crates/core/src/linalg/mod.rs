//! Dense complex linear algebra: arithmetic, norms, LU, Hessenberg/Schur,
//! and the matrix exponential.

mod expm;
mod lu;
mod matrix;
pub mod norm;
mod schur;

pub use expm::{matrix_exp, matrix_exp_info, ExpmInfo};
pub use lu::{condition_number_2, condition_number_2_with, inverse, solve, Lu};
pub use matrix::CMatrix;
pub use norm::{
    spectral_norm, spectral_norm_with, top_singular_value, FrobeniusNorm, LinearOperator,
    MatrixNorm, OneNorm, SingularEstimate, SpectralNorm,
};
pub use schur::{eigenvalues, hessenberg, schur, schur_with, split_schur, SchurForm};
