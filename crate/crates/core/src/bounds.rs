//! A-priori certificates for `‖f(A) − p(A)‖`, where p interpolates f at a
//! node multiset z₁…zₘ.
//!
//! The general certificate is
//!
//! ```text
//! (1/m!) · max_{t ∈ [0,1], μ ∈ ∂co{zₖ}} ‖Ω(A) f⁽ᵐ⁾((1−t)μ𝟏 + tA)‖
//! ```
//!
//! evaluated on a finite grid: t uniform with both endpoints, μ sampled on
//! the boundary of the nodes' convex hull (the maximum over the hull is
//! attained there). For `f = exp` the cheaper, rougher variants replace the
//! μ-scan by `e^{(1−t)β}` and then bound `‖e^{tA}‖` by growth estimates.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::hull::convex_hull_with;
use crate::interp::{
    divided_differences_with, omega_at_matrix, taylor_nodes, AnalyticFunction, NodeSet,
};
use crate::linalg::{matrix_exp, schur_with, spectral_norm_with, split_schur, CMatrix, MatrixNorm};
use crate::scalar::{cmp_re_im, creal, factorial, Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Theorem1,
    Cor3,
    Cor4,
    Cor5,
    Cor6,
    Taylor,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Theorem1,
        Method::Cor3,
        Method::Cor4,
        Method::Cor5,
        Method::Cor6,
        Method::Taylor,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::Theorem1 => "theorem1",
            Method::Cor3 => "cor3",
            Method::Cor4 => "cor4",
            Method::Cor5 => "cor5",
            Method::Cor6 => "cor6",
            Method::Taylor => "taylor",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Self::ALL.into_iter().find(|m| m.label() == s)
    }

    pub fn requires_exp(self) -> bool {
        matches!(
            self,
            Method::Cor3 | Method::Cor4 | Method::Cor5 | Method::Cor6
        )
    }
}

/// `α = max Re σ(A)`, `β = max Re zₖ`, `γ = max(α, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralAbscissae<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

impl<T: Real> SpectralAbscissae<T> {
    pub fn new(alpha: T, beta: T) -> Self {
        Self {
            alpha,
            beta,
            gamma: alpha.max(beta),
        }
    }

    pub fn from_spectrum(eigs: &[Complex<T>], nodes: &NodeSet<T>) -> Self {
        let alpha = eigs.iter().map(|z| z.re).fold(T::neg_infinity(), T::max);
        Self::new(alpha, nodes.max_re())
    }

    fn to_f64(self) -> SpectralAbscissae<f64> {
        SpectralAbscissae {
            alpha: self.alpha.to_f64_(),
            beta: self.beta.to_f64_(),
            gamma: self.gamma.to_f64_(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub t_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_edge: Option<usize>,
}

/// One certificate, ready for comparison and serialization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub method: Method,
    pub value: f64,
    pub argmax_t: Option<f64>,
    pub argmax_mu: Option<[f64; 2]>,
    pub grid: Option<GridSpec>,
    pub norm: String,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abscissae: Option<SpectralAbscissae<f64>>,
    pub node_count: usize,
    pub dim: usize,
}

/// Grid and tolerance settings shared by the bound routines.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundOptions {
    /// Points of the uniform t grid on [0, 1], endpoints included.
    pub t_count: usize,
    /// Samples per hull edge.
    pub per_edge: usize,
    /// Re-run once on the nested grid (2·t_count − 1, 2·per_edge) and warn
    /// if the value moves by more than `tol.refinement_rel`.
    pub refine_check: bool,
    /// Forces β instead of computing it from the nodes.
    pub beta_override: Option<f64>,
    pub tol: Tolerances,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            t_count: 101,
            per_edge: 64,
            refine_check: true,
            beta_override: None,
            tol: Tolerances::default(),
        }
    }
}

impl BoundOptions {
    pub fn with_grid(t_count: usize, per_edge: usize) -> Self {
        Self {
            t_count,
            per_edge,
            ..Self::default()
        }
    }

    fn check(&self) -> Result<()> {
        if self.t_count < 2 {
            return Err(Error::InvalidArgument(format!(
                "t_count must be >= 2, got {}",
                self.t_count
            )));
        }
        if self.per_edge < 1 {
            return Err(Error::InvalidArgument("per_edge must be >= 1".into()));
        }
        Ok(())
    }
}

/// `t_k = k/(n−1)`, k = 0…n−1.
pub fn t_grid<T: Real>(t_count: usize) -> Vec<T> {
    let den = T::from_usize_(t_count - 1);
    (0..t_count).map(|k| T::from_usize_(k) / den).collect()
}

/// Maximizes `eval` over `ts × mus`. Ties resolve to the smallest t, then
/// the first μ in the given order, whatever the thread schedule.
fn grid_max<T: Real, E>(ts: &[T], mus: &[Complex<T>], eval: E) -> Result<(T, usize, usize)>
where
    E: Fn(T, Complex<T>) -> Result<T> + Sync,
{
    grid_max_rows(ts, mus, |_| Ok(()), |_: &(), t, mu| eval(t, mu))
}

/// As [`grid_max`], with `row(t)` computed once per t and shared by every μ.
fn grid_max_rows<T: Real, R, F, E>(
    ts: &[T],
    mus: &[Complex<T>],
    row: F,
    eval: E,
) -> Result<(T, usize, usize)>
where
    F: Fn(T) -> Result<R> + Sync,
    E: Fn(&R, T, Complex<T>) -> Result<T> + Sync,
{
    let per_t: Vec<(T, usize)> = ts
        .par_iter()
        .map(|&t| {
            let shared = row(t)?;
            let mut best = (T::neg_infinity(), 0usize);
            for (j, &mu) in mus.iter().enumerate() {
                let v = eval(&shared, t, mu)?;
                if v.is_nan() {
                    return Err(Error::NonFinite("bound integrand"));
                }
                if v > best.0 {
                    best = (v, j);
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    let mut best = (T::neg_infinity(), 0usize, 0usize);
    for (i, (v, j)) in per_t.into_iter().enumerate() {
        if v > best.0 {
            best = (v, i, j);
        }
    }
    Ok(best)
}

/// `‖Ω(A) · f⁽ᵐ⁾((1−t)μ𝟏 + tA)‖` for a precomputed `Ω(A)`.
pub fn theorem_integrand<T: Real, F: AnalyticFunction<T> + ?Sized>(
    a: &CMatrix<T>,
    omega: &CMatrix<T>,
    f: &F,
    order: usize,
    t: T,
    mu: Complex<T>,
    norm: &dyn MatrixNorm<T>,
) -> Result<T> {
    let arg = a.scale_real(t).shift(mu.scale(T::one() - t))?;
    let deriv = f.matrix_derivative(order, &arg)?;
    norm.norm(&omega.matmul(&deriv)?)
}

fn boundary_mus<T: Real>(
    nodes: &NodeSet<T>,
    per_edge: usize,
    tol: &Tolerances,
) -> Result<Vec<Complex<T>>> {
    let hull = convex_hull_with(nodes.as_slice(), tol.collinear_tol)?;
    let mut mus = hull.boundary_samples(per_edge);
    mus.sort_by(cmp_re_im);
    Ok(mus)
}

fn finite_value<T: Real>(v: T) -> Result<f64> {
    let v = v.to_f64_();
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::NonFinite("bound value"))
    }
}

fn drifted(base: f64, refined: f64, rel: f64) -> Option<String> {
    let moved = (refined - base).abs();
    if moved > rel * base.abs() {
        Some(format!(
            "grid refinement moved the bound from {base:.6e} to {refined:.6e} ({:.3}%)",
            100.0 * moved / base.abs().max(f64::MIN_POSITIVE)
        ))
    } else {
        None
    }
}

/// The general certificate for any analytic `f` supplying `f⁽ᵐ⁾` at matrix
/// arguments.
pub fn theorem_bound<T: Real, F: AnalyticFunction<T> + ?Sized>(
    a: &CMatrix<T>,
    nodes: &NodeSet<T>,
    f: &F,
    opts: &BoundOptions,
    norm: &dyn MatrixNorm<T>,
) -> Result<BoundReport> {
    opts.check()?;
    let d = a.dim()?;
    let m = nodes.len();
    f.check_order(m)?;
    let omega = omega_at_matrix(nodes, a)?;

    let scan = |t_count: usize, per_edge: usize| -> Result<(T, T, Complex<T>)> {
        let ts = t_grid::<T>(t_count);
        let mus = boundary_mus(nodes, per_edge, &opts.tol)?;
        let (v, i, j) = if f.is_exp() {
            // f⁽ᵐ⁾((1−t)μ𝟏 + tA) = e^{(1−t)μ} e^{tA}: one matrix norm per t
            grid_max_rows(
                &ts,
                &mus,
                |t| norm.norm(&omega.matmul(&f.matrix_derivative(m, &a.scale_real(t))?)?),
                |row, t, mu| Ok(((T::one() - t) * mu.re).exp() * *row),
            )?
        } else {
            grid_max(&ts, &mus, |t, mu| {
                theorem_integrand(a, &omega, f, m, t, mu, norm)
            })?
        };
        Ok((v, ts[i], mus[j]))
    };

    let scale = factorial::<T>(m);
    let (vmax, t_star, mu_star) = scan(opts.t_count, opts.per_edge)?;
    let value = finite_value(vmax / scale)?;
    let mut warnings = Vec::new();
    if opts.refine_check {
        let (vr, _, _) = scan(2 * opts.t_count - 1, 2 * opts.per_edge)?;
        let refined = finite_value(vr / scale)?;
        warnings.extend(drifted(value, refined, opts.tol.refinement_rel));
    }
    Ok(BoundReport {
        method: Method::Theorem1,
        value,
        argmax_t: Some(t_star.to_f64_()),
        argmax_mu: Some([mu_star.re.to_f64_(), mu_star.im.to_f64_()]),
        grid: Some(GridSpec {
            t_count: opts.t_count,
            per_edge: Some(opts.per_edge),
        }),
        norm: norm.name().to_string(),
        warnings,
        abscissae: None,
        node_count: m,
        dim: d,
    })
}

/// Taylor case: all m nodes at `z1`, so the hull is a point and only t is
/// scanned. Delegates to [`theorem_bound`].
pub fn taylor_bound<T: Real, F: AnalyticFunction<T> + ?Sized>(
    a: &CMatrix<T>,
    z1: Complex<T>,
    m: usize,
    f: &F,
    opts: &BoundOptions,
    norm: &dyn MatrixNorm<T>,
) -> Result<BoundReport> {
    let nodes = taylor_nodes(z1, m)?;
    let mut report = theorem_bound(a, &nodes, f, opts, norm)?;
    report.method = Method::Taylor;
    Ok(report)
}

fn beta_for<T: Real>(nodes: &NodeSet<T>, opts: &BoundOptions) -> T {
    opts.beta_override
        .map(T::lit)
        .unwrap_or_else(|| nodes.max_re())
}

/// `(1/m!) max_t e^{(1−t)β} ‖Ω(A) e^{tA}‖`, with `e^{tA}` by [`matrix_exp`].
pub fn exp_bound_cor3<T: Real>(
    a: &CMatrix<T>,
    nodes: &NodeSet<T>,
    opts: &BoundOptions,
    norm: &dyn MatrixNorm<T>,
) -> Result<BoundReport> {
    exp_bound_cor3_with(a, nodes, opts, norm, &|t| matrix_exp(&a.scale_real(t)))
}

/// As [`exp_bound_cor3`] with a caller-provided evaluator of `e^{tA}`.
pub fn exp_bound_cor3_with<T: Real>(
    a: &CMatrix<T>,
    nodes: &NodeSet<T>,
    opts: &BoundOptions,
    norm: &dyn MatrixNorm<T>,
    exp_t: &(dyn Fn(T) -> Result<CMatrix<T>> + Sync),
) -> Result<BoundReport> {
    opts.check()?;
    let d = a.dim()?;
    let m = nodes.len();
    let omega = omega_at_matrix(nodes, a)?;
    let beta = beta_for(nodes, opts);
    let origin = [creal(T::zero())];
    let eval = |t: T, _mu: Complex<T>| -> Result<T> {
        let prod = omega.matmul(&exp_t(t)?)?;
        Ok(((T::one() - t) * beta).exp() * norm.norm(&prod)?)
    };
    let scale = factorial::<T>(m);
    let ts = t_grid::<T>(opts.t_count);
    let (vmax, i, _) = grid_max(&ts, &origin, eval)?;
    let value = finite_value(vmax / scale)?;
    let mut warnings = Vec::new();
    if opts.refine_check {
        let (vr, _, _) = grid_max(&t_grid::<T>(2 * opts.t_count - 1), &origin, eval)?;
        warnings.extend(drifted(
            value,
            finite_value(vr / scale)?,
            opts.tol.refinement_rel,
        ));
    }
    Ok(BoundReport {
        method: Method::Cor3,
        value,
        argmax_t: Some(ts[i].to_f64_()),
        argmax_mu: None,
        grid: Some(GridSpec {
            t_count: opts.t_count,
            per_edge: None,
        }),
        norm: norm.name().to_string(),
        warnings,
        abscissae: None,
        node_count: m,
        dim: d,
    })
}

fn require_spectral<T: Real>(method: Method, norm: &dyn MatrixNorm<T>) -> Result<()> {
    if norm.is_spectral() {
        Ok(())
    } else {
        Err(Error::NormNotSupported {
            method: method.label(),
            norm: norm.name().to_string(),
        })
    }
}

/// `Σ_{j<len} x^j / j!`.
fn truncated_exp_series<T: Real>(x: T, len: usize) -> T {
    let mut term = T::one();
    let mut sum = T::zero();
    for j in 0..len {
        if j > 0 {
            term = term * x / T::from_usize_(j);
        }
        sum += term;
    }
    sum
}

fn growth_report<T: Real>(
    method: Method,
    a: &CMatrix<T>,
    nodes: &NodeSet<T>,
    abscissae: SpectralAbscissae<T>,
    series: T,
    opts: &BoundOptions,
    norm: &dyn MatrixNorm<T>,
) -> Result<BoundReport> {
    let d = a.dim()?;
    let m = nodes.len();
    let omega_norm = norm.norm(&omega_at_matrix(nodes, a)?)?;
    let gamma = match opts.beta_override {
        Some(b) => abscissae.alpha.max(T::lit(b)),
        None => abscissae.gamma,
    };
    let value = finite_value(gamma.exp() * omega_norm / factorial::<T>(m) * series)?;
    let mut abscissae = abscissae;
    if let Some(b) = opts.beta_override {
        abscissae = SpectralAbscissae::new(abscissae.alpha, T::lit(b));
    }
    Ok(BoundReport {
        method,
        value,
        argmax_t: None,
        argmax_mu: None,
        grid: None,
        norm: norm.name().to_string(),
        warnings: Vec::new(),
        abscissae: Some(abscissae.to_f64()),
        node_count: m,
        dim: d,
    })
}

/// `e^γ ‖Ω(A)‖ / m! · Σ_{j<d} (2‖A‖)^j / j!`; spectral norm only.
pub fn exp_bound_cor4<T: Real>(
    a: &CMatrix<T>,
    nodes: &NodeSet<T>,
    opts: &BoundOptions,
    norm: &dyn MatrixNorm<T>,
) -> Result<BoundReport> {
    require_spectral(Method::Cor4, norm)?;
    let d = a.dim()?;
    let s = schur_with(a, &opts.tol)?;
    let abscissae = SpectralAbscissae::from_spectrum(&s.t.diagonal(), nodes);
    let two_a = T::lit(2.0) * norm.norm(a)?;
    growth_report(
        Method::Cor4,
        a,
        nodes,
        abscissae,
        truncated_exp_series(two_a, d),
        opts,
        norm,
    )
}

/// `e^γ ‖Ω(A)‖ / m! · Σ_{j<d} ‖N‖^j / j!`, N the strictly triangular part of
/// the Schur factor; spectral norm only.
pub fn exp_bound_cor6<T: Real>(
    a: &CMatrix<T>,
    nodes: &NodeSet<T>,
    opts: &BoundOptions,
    norm: &dyn MatrixNorm<T>,
) -> Result<BoundReport> {
    require_spectral(Method::Cor6, norm)?;
    let d = a.dim()?;
    let s = schur_with(a, &opts.tol)?;
    let abscissae = SpectralAbscissae::from_spectrum(&s.t.diagonal(), nodes);
    let (_, nil) = split_schur(&s);
    let n_norm = norm.norm(&nil)?;
    growth_report(
        Method::Cor6,
        a,
        nodes,
        abscissae,
        truncated_exp_series(n_norm, d),
        opts,
        norm,
    )
}

/// `‖AAᴴ − AᴴA‖₂→₂` relative to `‖A‖₂→₂²`.
pub fn normality_defect<T: Real>(a: &CMatrix<T>, tol: &Tolerances) -> Result<T> {
    let ah = a.adjoint();
    let comm = a.matmul(&ah)?.sub(&ah.matmul(a)?)?;
    let na = spectral_norm_with(a, tol)?;
    if na == T::zero() {
        return Ok(T::zero());
    }
    Ok(spectral_norm_with(&comm, tol)? / (na * na))
}

/// `e^γ ‖Ω(A)‖ / m!` for normal A; spectral norm only.
pub fn exp_bound_cor5<T: Real>(
    a: &CMatrix<T>,
    nodes: &NodeSet<T>,
    opts: &BoundOptions,
    norm: &dyn MatrixNorm<T>,
) -> Result<BoundReport> {
    require_spectral(Method::Cor5, norm)?;
    a.dim()?;
    let defect = normality_defect(a, &opts.tol)?;
    if defect > T::lit(opts.tol.normality_tol) {
        return Err(Error::NotNormal {
            defect: defect.to_f64_(),
            tolerance: opts.tol.normality_tol,
        });
    }
    let s = schur_with(a, &opts.tol)?;
    let abscissae = SpectralAbscissae::from_spectrum(&s.t.diagonal(), nodes);
    growth_report(Method::Cor5, a, nodes, abscissae, T::one(), opts, norm)
}

/// `‖reference − p(A)‖` with p the interpolation polynomial of f.
pub fn true_error<T: Real, F: AnalyticFunction<T> + ?Sized>(
    a: &CMatrix<T>,
    nodes: &NodeSet<T>,
    f: &F,
    reference: &CMatrix<T>,
    norm: &dyn MatrixNorm<T>,
    tol: &Tolerances,
) -> Result<T> {
    let p = divided_differences_with(f, nodes, tol)?;
    let pa = p.eval_matrix(a)?;
    norm.norm(&reference.sub(&pa)?)
}

/// Runs one method by name. Exponential-only methods reject other `f`.
pub fn run_method<T: Real, F: AnalyticFunction<T> + ?Sized>(
    method: Method,
    a: &CMatrix<T>,
    nodes: &NodeSet<T>,
    f: &F,
    opts: &BoundOptions,
    norm: &dyn MatrixNorm<T>,
) -> Result<BoundReport> {
    if method.requires_exp() && !f.is_exp() {
        return Err(Error::FunctionNotSupported {
            method: method.label(),
        });
    }
    match method {
        Method::Theorem1 => theorem_bound(a, nodes, f, opts, norm),
        Method::Cor3 => exp_bound_cor3(a, nodes, opts, norm),
        Method::Cor4 => exp_bound_cor4(a, nodes, opts, norm),
        Method::Cor5 => exp_bound_cor5(a, nodes, opts, norm),
        Method::Cor6 => exp_bound_cor6(a, nodes, opts, norm),
        Method::Taylor => {
            let z1 = nodes.as_slice()[0];
            taylor_bound(a, z1, nodes.len(), f, opts, norm)
        }
    }
}
