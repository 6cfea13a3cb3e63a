//! Divided differences by direct quadrature of the simplex integral
//! `f[z₀,…,zₙ] = ∫₀¹∫₀^{t₁}…∫₀^{tₙ₋₁} f⁽ⁿ⁾(z₀ + (z₁−z₀)t₁ + … + (zₙ−zₙ₋₁)tₙ) dtₙ…dt₁`.
//!
//! Independent of the recursive tableau; cost grows as 32ⁿ, so it is meant
//! for cross-checking small cases only.

use crate::error::{Error, Result};
use crate::interp::AnalyticFunction;
use crate::scalar::{czero, Complex, Real};

const GL_POINTS: usize = 32;
const MAX_POINTS: usize = 5;

/// Gauss–Legendre nodes and weights on [0, 1], by Newton iteration on Pₙ.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out.reverse();
    out
}

pub fn dd_integral_oracle<T: Real, F: AnalyticFunction<T> + ?Sized>(
    f: &F,
    points: &[Complex<T>],
) -> Result<Complex<T>> {
    if points.len() > MAX_POINTS {
        return Err(Error::TooManyPoints(points.len()));
    }
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "oracle needs at least one point".into(),
        ));
    }
    let order = points.len() - 1;
    if order == 0 {
        return f.eval(points[0]);
    }
    f.check_order(order)?;
    let rule: Vec<(T, T)> = gauss_legendre_unit(GL_POINTS)
        .into_iter()
        .map(|(x, w)| (T::lit(x), T::lit(w)))
        .collect();
    let steps: Vec<Complex<T>> = points.windows(2).map(|w| w[1] - w[0]).collect();
    nested(f, order, &steps, &rule, 0, T::one(), points[0])
}

fn nested<T: Real, F: AnalyticFunction<T> + ?Sized>(
    f: &F,
    order: usize,
    steps: &[Complex<T>],
    rule: &[(T, T)],
    level: usize,
    upper: T,
    arg: Complex<T>,
) -> Result<Complex<T>> {
    if level == steps.len() {
        return f.derivative(order, arg);
    }
    let mut sum = czero::<T>();
    for &(x, w) in rule {
        let t = x * upper;
        let inner = nested(
            f,
            order,
            steps,
            rule,
            level + 1,
            t,
            arg + steps[level].scale(t),
        )?;
        sum += inner.scale(w * upper);
    }
    Ok(sum)
}
