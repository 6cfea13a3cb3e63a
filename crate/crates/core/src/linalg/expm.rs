//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! Degree selection follows the backward-error thresholds θₘ of Higham's
//! 2005 scheme (degrees 3, 5, 7, 9, 13 in double precision; 3, 5, 7 in
//! single). The thresholds are compared against a cheap upper bound of
//! `‖A‖₂→₂`, namely `min(‖A‖_F, √(‖A‖₁‖A‖∞))`.

use crate::error::{Error, Result};
use crate::linalg::lu::solve;
use crate::linalg::CMatrix;
use crate::scalar::{creal, Real};

const THETA_F64: [(usize, f64); 5] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068),
    (13, 5.371920351148152),
];

const THETA_F32: [(usize, f64); 3] = [
    (3, 4.258730016922831e-1),
    (5, 1.880152677804762),
    (7, 3.925724783138660),
];

/// Parameters actually used by one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpmInfo {
    pub pade_degree: usize,
    pub squarings: u32,
}

/// Normalized Padé coefficients `c₀ = 1, …, c_m` of the `[m/m]` approximant.
fn pade_coefficients<T: Real>(m: usize) -> Vec<T> {
    let mut c = Vec::with_capacity(m + 1);
    c.push(T::one());
    for j in 0..m {
        let prev = c[j];
        let num = T::from_usize_(m - j);
        let den = T::from_usize_((2 * m - j) * (j + 1));
        c.push(prev * num / den);
    }
    c
}

/// `Σ coeff·M + id·𝟏`.
fn lincomb<T: Real>(terms: &[(T, &CMatrix<T>)], id: T) -> CMatrix<T> {
    let n = terms[0].1.rows();
    let mut out = CMatrix::zeros(n, n);
    for (coef, m) in terms {
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += m[(i, j)].scale(*coef);
            }
        }
    }
    for i in 0..n {
        out[(i, i)] += creal(id);
    }
    out
}

/// Returns `(U, V)` with `r_m(A) = (V − U)⁻¹ (V + U)`.
fn pade_uv<T: Real>(a: &CMatrix<T>, m: usize) -> Result<(CMatrix<T>, CMatrix<T>)> {
    let c = pade_coefficients::<T>(m);
    let a2 = a.matmul(a)?;
    if m == 13 {
        let a4 = a2.matmul(&a2)?;
        let a6 = a4.matmul(&a2)?;
        let inner_u = lincomb(&[(c[13], &a6), (c[11], &a4), (c[9], &a2)], T::zero());
        let u_poly = a6.matmul(&inner_u)?;
        let u_sum = lincomb(
            &[(T::one(), &u_poly), (c[7], &a6), (c[5], &a4), (c[3], &a2)],
            c[1],
        );
        let u = a.matmul(&u_sum)?;
        let inner_v = lincomb(&[(c[12], &a6), (c[10], &a4), (c[8], &a2)], T::zero());
        let v_poly = a6.matmul(&inner_v)?;
        let v = lincomb(
            &[(T::one(), &v_poly), (c[6], &a6), (c[4], &a4), (c[2], &a2)],
            c[0],
        );
        return Ok((u, v));
    }
    // even powers A², A⁴, … up to A^{m−1}
    let mut powers = vec![a2];
    while 2 * (powers.len() + 1) < m + 1 {
        let next = powers.last().unwrap().matmul(&powers[0])?;
        powers.push(next);
    }
    let odd: Vec<(T, &CMatrix<T>)> = powers
        .iter()
        .enumerate()
        .map(|(k, p)| (c[2 * k + 3], p))
        .collect();
    let u = a.matmul(&lincomb(&odd, c[1]))?;
    let even: Vec<(T, &CMatrix<T>)> = powers
        .iter()
        .enumerate()
        .map(|(k, p)| (c[2 * k + 2], p))
        .collect();
    let v = lincomb(&even, c[0]);
    Ok((u, v))
}

pub fn matrix_exp<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    matrix_exp_info(a).map(|(e, _)| e)
}

/// `e^A` together with the Padé degree and squaring count used.
pub fn matrix_exp_info<T: Real>(a: &CMatrix<T>) -> Result<(CMatrix<T>, ExpmInfo)> {
    let n = a.dim()?;
    if !a.is_finite() {
        return Err(Error::NonFinite("matrix_exp input"));
    }
    let norm_bound = a.frobenius_norm().min((a.one_norm() * a.inf_norm()).sqrt());
    if norm_bound == T::zero() {
        return Ok((
            CMatrix::identity(n)?,
            ExpmInfo {
                pade_degree: 0,
                squarings: 0,
            },
        ));
    }
    let table: &[(usize, f64)] = if T::is_low_precision() {
        &THETA_F32
    } else {
        &THETA_F64
    };
    let (degree, squarings) = match table.iter().find(|(_, th)| norm_bound <= T::lit(*th)) {
        Some(&(m, _)) => (m, 0u32),
        None => {
            let &(m, th) = table.last().unwrap();
            let s = (norm_bound / T::lit(th)).log2().ceil().max(T::zero());
            let s = s.to_u32().ok_or(Error::NonFinite("matrix_exp scaling"))?;
            (m, s)
        }
    };
    let scaled = if squarings > 0 {
        a.scale_real(T::lit(2.0).powi(-(squarings as i32)))
    } else {
        a.clone()
    };
    let (u, v) = pade_uv(&scaled, degree)?;
    let mut r = solve(&v.sub(&u)?, &v.add(&u)?)?;
    for _ in 0..squarings {
        r = r.matmul(&r)?;
    }
    let r = r.check_finite("matrix_exp")?;
    Ok((
        r,
        ExpmInfo {
            pade_degree: degree,
            squarings,
        },
    ))
}
