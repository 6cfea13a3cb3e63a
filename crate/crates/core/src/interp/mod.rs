//! Interpolation nodes, confluent divided differences and the Newton form.

mod function;
mod newton;
mod nodes;
pub mod oracle;
pub mod parse;

pub use function::{AnalyticFunction, ClosureFunction, Exp, Polynomial};
pub use newton::{
    divided_differences, divided_differences_with, newton_eval_matrix, newton_eval_scalar,
    NewtonPolynomial,
};
pub use nodes::{chebyshev_nodes, omega_at_matrix, omega_at_scalar, taylor_nodes, NodeSet};
pub use oracle::dd_integral_oracle;
