//! Numerical tolerances, collected in one record.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative stopping tolerance of the `‖·‖₂→₂` iteration.
    pub norm_tol: f64,
    /// Cap on `AᴴA` applications per start vector.
    pub power_max_iters: usize,
    /// Fresh start vectors tried after the first one stagnates.
    pub power_restarts: usize,
    /// Seed of the random start vectors.
    pub power_seed: u64,
    /// Per-dimension factor: `‖QQᴴ − 𝟏‖ ≤ unitarity_tol · d`.
    pub unitarity_tol: f64,
    /// Per-dimension factor: `‖QᴴTQ − A‖ ≤ reconstruct_tol · d · ‖A‖`.
    pub reconstruct_tol: f64,
    /// QR sweeps allowed per unit of dimension.
    pub schur_sweeps_per_dim: usize,
    /// `‖AAᴴ − AᴴA‖ ≤ normality_tol · ‖A‖²` accepts A as normal.
    pub normality_tol: f64,
    /// Abort divided differences once a coefficient exceeds this.
    pub coeff_growth_limit: f64,
    /// Warn when the smallest gap between distinct nodes is below this times the spread.
    pub node_gap_warning: f64,
    /// Cross-product threshold (times diameter²) for collinearity in the hull.
    pub collinear_tol: f64,
    /// Relative movement allowed when the bound grid is refined once.
    pub refinement_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm_tol: 1e-12,
            power_max_iters: 20_000,
            power_restarts: 2,
            power_seed: 0x5EED_0F2A,
            unitarity_tol: 1e-10,
            reconstruct_tol: 1e-10,
            schur_sweeps_per_dim: 30,
            normality_tol: 1e-10,
            coeff_growth_limit: 1e150,
            node_gap_warning: 1e-8,
            collinear_tol: 1e-12,
            refinement_rel: 5e-3,
        }
    }
}
