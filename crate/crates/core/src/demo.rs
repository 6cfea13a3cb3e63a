//! Chebyshev interpolation of `e^z` on `[−1, 1]`: the certificate for a
//! Hermitian matrix against the observed scalar error.

use serde::Serialize;

use crate::bounds::{exp_bound_cor5, BoundOptions};
use crate::error::{Error, Result};
use crate::interp::{chebyshev_nodes, divided_differences, Exp};
use crate::linalg::{CMatrix, SpectralNorm};
use crate::scalar::{cplx, factorial, Complex};

const DEMO_DIM: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebDemo {
    pub n: usize,
    /// `(1/n!) · e / 2^{n−1}`.
    pub closed_form: f64,
    /// Normal-matrix certificate for a Hermitian matrix with spectrum spread over `[−1, 1]`.
    pub hermitian_bound: f64,
    pub hermitian_dim: usize,
    /// `max |e^λ − p(λ)|` over a uniform grid on `[0, 1]`.
    pub sharp_unit: f64,
    /// The same over `[−1, 1]`.
    pub sharp_symmetric: f64,
    pub grid: usize,
}

/// `H·diag(λ)·H` with a fixed complex Householder reflector `H`.
pub fn hermitian_test_matrix(eigs: &[f64]) -> Result<CMatrix<f64>> {
    let d = eigs.len();
    let v: Vec<Complex<f64>> = (0..d)
        .map(|k| cplx(1.0, (k as f64 + 1.0) / d as f64))
        .collect();
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let h = CMatrix::from_fn(d, d, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        cplx(delta, 0.0) - v[i] * v[j].conj() * (2.0 / vv)
    });
    let lam: Vec<Complex<f64>> = eigs.iter().map(|&x| cplx(x, 0.0)).collect();
    let a = h.matmul(&CMatrix::from_diag(&lam)?)?.matmul(&h)?;
    // symmetrize away rounding so the normality test sees an exactly Hermitian matrix
    let ah = a.adjoint();
    Ok(CMatrix::from_fn(d, d, |i, j| {
        (a[(i, j)] + ah[(i, j)]) * 0.5
    }))
}

fn grid_max_error(p: &crate::interp::NewtonPolynomial<f64>, lo: f64, hi: f64, grid: usize) -> f64 {
    (0..grid)
        .map(|k| {
            let x = lo + (hi - lo) * k as f64 / (grid - 1) as f64;
            let z = cplx(x, 0.0);
            (z.exp() - p.eval_scalar(z)).norm()
        })
        .fold(0.0, f64::max)
}

pub fn chebyshev_demo(n: usize, grid: usize) -> Result<ChebDemo> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if grid < 2 {
        return Err(Error::InvalidArgument("grid must be >= 2".into()));
    }
    let closed_form = std::f64::consts::E / 2f64.powi(n as i32 - 1) / factorial::<f64>(n);
    let nodes = chebyshev_nodes(n, -1.0, 1.0)?;
    let p = divided_differences(&Exp, &nodes)?;

    let eigs: Vec<f64> = (0..DEMO_DIM)
        .map(|k| -1.0 + 2.0 * k as f64 / (DEMO_DIM - 1) as f64)
        .collect();
    let a = hermitian_test_matrix(&eigs)?;
    let report = exp_bound_cor5(
        &a,
        &nodes,
        &BoundOptions::default(),
        &SpectralNorm::default(),
    )?;

    Ok(ChebDemo {
        n,
        closed_form,
        hermitian_bound: report.value,
        hermitian_dim: DEMO_DIM,
        sharp_unit: grid_max_error(&p, 0.0, 1.0, grid),
        sharp_symmetric: grid_max_error(&p, -1.0, 1.0, grid),
        grid,
    })
}

impl ChebDemo {
    pub fn to_table(&self) -> String {
        format!(
            "n = {}\n\
             (a) closed form (1/n!) e / 2^(n-1)        {:.4e}\n\
             (b) normal-matrix bound, Hermitian {}x{}  {:.4e}\n\
             (c) max |e^x - p(x)| on [0, 1]            {:.4e}\n\
             (c) max |e^x - p(x)| on [-1, 1]           {:.4e}\n\
             grid points: {}\n",
            self.n,
            self.closed_form,
            self.hermitian_dim,
            self.hermitian_dim,
            self.hermitian_bound,
            self.sharp_unit,
            self.sharp_symmetric,
            self.grid
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_closed_form_is_e() {
        let d = chebyshev_demo(1, 101).unwrap();
        assert!((d.closed_form - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn ten_nodes() {
        let d = chebyshev_demo(10, 10_000).unwrap();
        assert!((d.closed_form - 1.463057814e-9).abs() < 1e-17);
        assert!(d.hermitian_bound <= d.closed_form * (1.0 + 1e-12));
        assert!(d.hermitian_bound > 0.5 * d.closed_form);
        assert!(d.sharp_unit <= d.sharp_symmetric);
        assert!(d.sharp_symmetric <= d.hermitian_bound);
    }

    #[test]
    fn test_matrix_is_hermitian_with_given_spectrum() {
        let a = hermitian_test_matrix(&[-1.0, 0.25, 1.0]).unwrap();
        assert_eq!(a, a.adjoint());
        let tr = a.trace();
        assert!((tr.re - 0.25).abs() < 1e-14 && tr.im.abs() < 1e-14);
    }

    #[test]
    fn table_mentions_all_columns() {
        let t = chebyshev_demo(3, 11).unwrap().to_table();
        assert!(
            t.contains("(a)") && t.contains("(b)") && t.contains("[0, 1]") && t.contains("[-1, 1]")
        );
    }
}
