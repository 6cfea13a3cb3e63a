//! Randomized validity experiment for the exponential certificate.
//!
//! Each trial draws `A = T D T⁻¹` with `D` uniform on a rectangle of the
//! complex plane and `T` real uniform on `[−1, 1]`, interpolates `e^z` at a
//! fixed 16-point set, and compares the true error
//! `e₀ = ‖e^A − p(A)‖₂→₂` with the certificate
//! `e₁ = (1/16!) max_k e^{(1−t_k)β} ‖Ω(A) e^{t_k A}‖₂→₂`.
//! Both use the diagonalization `e^{tA} = T e^{tD} T⁻¹` as the reference.
//!
//! Random numbers come from ChaCha8 (`rand_chacha`) seeded with
//! `seed + trial_index`, so every trial is reproducible on its own.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::t_grid;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::interp::{divided_differences_with, omega_at_matrix, Exp, NodeSet};
use crate::linalg::{
    inverse, matrix_exp, spectral_norm_with, top_singular_value, CMatrix, LinearOperator,
};
use crate::scalar::{cplx, factorial, Complex};

type C64 = Complex<f64>;

/// Closed rectangle `[re_lo, re_hi] × [im_lo, im_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl Rect {
    pub fn contains(&self, z: C64, slack: f64) -> bool {
        z.re >= self.re_lo - slack
            && z.re <= self.re_hi + slack
            && z.im >= self.im_lo - slack
            && z.im <= self.im_hi + slack
    }
}

impl Default for Rect {
    fn default() -> Self {
        Self {
            re_lo: -1.0,
            re_hi: 0.0,
            im_lo: -PI,
            im_hi: PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub trials: usize,
    pub rect: Rect,
    pub kappa_cutoff: f64,
    pub t_count: usize,
    pub seed: u64,
    #[serde(default)]
    pub tol: Tolerances,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dim: 128,
            trials: 100,
            rect: Rect::default(),
            kappa_cutoff: 1e5,
            t_count: 101,
            seed: 20_240_601,
            tol: Tolerances::default(),
        }
    }
}

impl ExperimentConfig {
    /// A rectangle may collapse to a segment or a point; `lo > hi` is rejected.
    pub fn validate(&self) -> Result<()> {
        let r = &self.rect;
        let ordered = r.re_lo <= r.re_hi && r.im_lo <= r.im_hi;
        let finite = [r.re_lo, r.re_hi, r.im_lo, r.im_hi]
            .iter()
            .all(|x| x.is_finite());
        if !(ordered && finite) {
            return Err(Error::InvalidArgument(format!(
                "invalid spectral rectangle {r:?}"
            )));
        }
        if self.dim < 2 {
            return Err(Error::InvalidArgument("dim must be >= 2".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        if self.t_count < 2 {
            return Err(Error::InvalidArgument("t_count must be >= 2".into()));
        }
        if !(self.kappa_cutoff > 0.0) {
            return Err(Error::InvalidArgument(
                "kappa cutoff must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// `0, ±iπ, ±iπ/2, ±3iπ/4, −1, −1±iπ, −1±iπ/2, −1±3iπ/4, −1/2±iπ`, in this order.
pub fn rectangle_nodes() -> NodeSet<f64> {
    let mut z = vec![cplx(0.0, 0.0)];
    for im in [PI, PI / 2.0, 3.0 * PI / 4.0] {
        z.extend([cplx(0.0, im), cplx(0.0, -im)]);
    }
    z.push(cplx(-1.0, 0.0));
    for im in [PI, PI / 2.0, 3.0 * PI / 4.0] {
        z.extend([cplx(-1.0, im), cplx(-1.0, -im)]);
    }
    z.extend([cplx(-0.5, PI), cplx(-0.5, -PI)]);
    NodeSet::new(z).expect("fixed node list is finite and non-empty")
}

/// `A = T·diag(d)·T⁻¹` together with its factors.
#[derive(Debug, Clone)]
pub struct TrialMatrices {
    pub t: CMatrix<f64>,
    pub t_inv: CMatrix<f64>,
    pub d: Vec<C64>,
    pub a: CMatrix<f64>,
    /// Draws of T rejected as singular before this one.
    pub redraws: usize,
}

const MAX_REDRAWS: usize = 5;

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// Draws `d` first, then `T` row by row; redraws `T` while it is singular.
pub fn random_trial_matrix(dim: usize, rect: &Rect, rng: &mut ChaCha8Rng) -> Result<TrialMatrices> {
    let d: Vec<C64> = (0..dim)
        .map(|_| {
            let re = uniform(rng, rect.re_lo, rect.re_hi);
            let im = uniform(rng, rect.im_lo, rect.im_hi);
            cplx(re, im)
        })
        .collect();
    let mut last_err = None;
    for redraws in 0..=MAX_REDRAWS {
        let t = CMatrix::from_fn(dim, dim, |_, _| cplx(rng.gen_range(-1.0..=1.0), 0.0));
        match inverse(&t) {
            Ok(t_inv) => {
                let a = scaled_product(&t, &d, &t_inv)?;
                return Ok(TrialMatrices {
                    t,
                    t_inv,
                    d,
                    a,
                    redraws,
                });
            }
            Err(e @ Error::Singular { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("loop ran at least once"))
}

/// `T·diag(s)·T⁻¹`.
fn scaled_product(t: &CMatrix<f64>, s: &[C64], t_inv: &CMatrix<f64>) -> Result<CMatrix<f64>> {
    let mut ts = t.clone();
    for (j, &sj) in s.iter().enumerate() {
        ts.scale_col(j, sj);
    }
    ts.matmul(t_inv)
}

/// `T e^{tD} T⁻¹`.
pub fn sharp_exp(m: &TrialMatrices, t: f64) -> Result<CMatrix<f64>> {
    let s: Vec<C64> = m.d.iter().map(|&di| (di * t).exp()).collect();
    scaled_product(&m.t, &s, &m.t_inv)
}

/// `x ↦ W·(s ∘ T⁻¹x)` with `W = Ω(A)·T`, i.e. `Ω(A) e^{tA}` applied without
/// forming it.
struct FactoredProduct<'a> {
    w: &'a CMatrix<f64>,
    t_inv: &'a CMatrix<f64>,
    s: Vec<C64>,
}

impl LinearOperator<f64> for FactoredProduct<'_> {
    fn nrows(&self) -> usize {
        self.w.rows()
    }
    fn ncols(&self) -> usize {
        self.t_inv.cols()
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let mut tmp = vec![cplx(0.0, 0.0); self.t_inv.rows()];
        self.t_inv.matvec(x, &mut tmp);
        tmp.iter_mut().zip(&self.s).for_each(|(v, s)| *v *= s);
        self.w.matvec(&tmp, y);
    }
    fn apply_adjoint(&self, x: &[C64], y: &mut [C64]) {
        let mut tmp = vec![cplx(0.0, 0.0); self.w.cols()];
        self.w.adjoint_matvec(x, &mut tmp);
        tmp.iter_mut()
            .zip(&self.s)
            .for_each(|(v, s)| *v *= s.conj());
        self.t_inv.adjoint_matvec(&tmp, y);
    }
}

/// `(t_k, ‖Ω(A) e^{t_k A}‖₂→₂)` on the uniform grid, with the exponential
/// taken from the diagonalization.
pub fn norms_curve(
    m: &TrialMatrices,
    nodes: &NodeSet<f64>,
    t_count: usize,
    tol: &Tolerances,
) -> Result<Vec<(f64, f64)>> {
    if t_count < 2 {
        return Err(Error::InvalidArgument("t_count must be >= 2".into()));
    }
    let omega = omega_at_matrix(nodes, &m.a)?;
    let w = omega.matmul(&m.t)?;
    let mut warm: Option<Vec<C64>> = None;
    let mut out = Vec::with_capacity(t_count);
    for t in t_grid::<f64>(t_count) {
        let op = FactoredProduct {
            w: &w,
            t_inv: &m.t_inv,
            s: m.d.iter().map(|&di| (di * t).exp()).collect(),
        };
        let res = top_singular_value(&op, warm.as_deref(), tol)?;
        warm = Some(res.vector);
        out.push((t, res.sigma));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed_offset: u64,
    pub e0: f64,
    pub e1: f64,
    /// `e1 / e0`, absent when `e0 = 0`.
    pub ratio: Option<f64>,
    pub kappa: f64,
    pub excluded: bool,
    pub redraws: usize,
    /// `‖matrix_exp(A) − T e^D T⁻¹‖_F / ‖T e^D T⁻¹‖_F`, for `dim ≤ 64`.
    pub expm_discrepancy: Option<f64>,
}

const EXPM_CHECK_MAX_DIM: usize = 64;

/// The matrices of trial `trial_index`, drawn from the stream seeded with
/// `cfg.seed + trial_index`.
pub fn trial_matrices(cfg: &ExperimentConfig, trial_index: usize) -> Result<TrialMatrices> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(trial_index as u64));
    random_trial_matrix(cfg.dim, &cfg.rect, &mut rng)
}

pub fn run_trial(cfg: &ExperimentConfig, trial_index: usize) -> Result<TrialRecord> {
    run_trial_with_nodes(cfg, trial_index, &rectangle_nodes())
}

pub fn run_trial_with_nodes(
    cfg: &ExperimentConfig,
    trial_index: usize,
    nodes: &NodeSet<f64>,
) -> Result<TrialRecord> {
    cfg.validate()?;
    let seed_offset = trial_index as u64;
    let m = trial_matrices(cfg, trial_index)?;
    let tol = &cfg.tol;

    let p = divided_differences_with(&Exp, nodes, tol)?;
    let pa = p.eval_matrix(&m.a)?;
    let exact = sharp_exp(&m, 1.0)?;
    let e0 = spectral_norm_with(&exact.sub(&pa)?, tol)?;

    let beta = nodes.max_re();
    let curve = norms_curve(&m, nodes, cfg.t_count, tol)?;
    let peak = curve
        .iter()
        .map(|&(t, v)| ((1.0 - t) * beta).exp() * v)
        .fold(0.0, f64::max);
    let e1 = peak / factorial::<f64>(nodes.len());

    let kappa = spectral_norm_with(&m.t, tol)? * spectral_norm_with(&m.t_inv, tol)?;
    let expm_discrepancy = if cfg.dim <= EXPM_CHECK_MAX_DIM {
        let e = matrix_exp(&m.a)?;
        Some(e.sub(&exact)?.frobenius_norm() / exact.frobenius_norm())
    } else {
        None
    };
    if !(e0.is_finite() && e1.is_finite() && kappa.is_finite()) {
        return Err(Error::NonFinite("trial statistics"));
    }
    Ok(TrialRecord {
        trial: trial_index,
        seed_offset,
        e0,
        e1,
        ratio: (e0 > 0.0).then(|| e1 / e0),
        kappa,
        excluded: kappa > cfg.kappa_cutoff,
        redraws: m.redraws,
        expm_discrepancy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (divisor n − 1); absent for fewer than two values.
    pub std: Option<f64>,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                std: None,
            };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let std = (n > 1)
            .then(|| (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt());
        Self { mean, std }
    }
}

/// Aggregates over the kept (non-excluded, valid) trials, plus κ over all
/// valid trials for comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentStats {
    pub trials: usize,
    pub kept: usize,
    pub excluded_count: usize,
    pub invalid_count: usize,
    pub e0: Summary,
    pub e1: Summary,
    pub ratio: Summary,
    pub ratio_median: f64,
    pub kappa: Summary,
    pub kappa_mean_kept: f64,
    pub kappa_mean_all: f64,
    /// Kept trials with `e1 < e0`.
    pub violations: usize,
}

fn median(xs: &mut [f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

pub fn summarize(records: &[TrialRecord], invalid_count: usize) -> ExperimentStats {
    let kept: Vec<&TrialRecord> = records.iter().filter(|r| !r.excluded).collect();
    let col = |f: fn(&TrialRecord) -> f64| kept.iter().map(|r| f(r)).collect::<Vec<_>>();
    let mut ratios: Vec<f64> = kept.iter().filter_map(|r| r.ratio).collect();
    let kappa = Summary::of(&col(|r| r.kappa));
    let all_kappa: Vec<f64> = records.iter().map(|r| r.kappa).collect();
    ExperimentStats {
        trials: records.len() + invalid_count,
        kept: kept.len(),
        excluded_count: records.len() - kept.len(),
        invalid_count,
        e0: Summary::of(&col(|r| r.e0)),
        e1: Summary::of(&col(|r| r.e1)),
        ratio: Summary::of(&ratios),
        ratio_median: median(&mut ratios),
        kappa,
        kappa_mean_kept: kappa.mean,
        kappa_mean_all: Summary::of(&all_kappa).mean,
        violations: kept.iter().filter(|r| r.e1 < r.e0).count(),
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub records: Vec<TrialRecord>,
    pub stats: ExperimentStats,
    /// Trials that failed numerically, with the reason.
    pub failures: Vec<(usize, Error)>,
}

/// Runs all trials (in parallel when a rayon pool is available); records are
/// ordered by trial index regardless of scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentRun> {
    cfg.validate()?;
    let nodes = rectangle_nodes();
    let results: Vec<Result<TrialRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial_with_nodes(cfg, i, &nodes))
        .collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) if e.is_usage() => return Err(e),
            Err(e) => failures.push((i, e)),
        }
    }
    if 2 * failures.len() > cfg.trials {
        return Err(Error::TooManyInvalidTrials {
            invalid: failures.len(),
            total: cfg.trials,
        });
    }
    let stats = summarize(&records, failures.len());
    Ok(ExperimentRun {
        records,
        stats,
        failures,
    })
}

/// Columns `trial, e0, e1, ratio, kappa, excluded`.
pub fn write_records_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["trial", "e0", "e1", "ratio", "kappa", "excluded"])
        .map_err(io)?;
    for r in records {
        w.write_record([
            r.trial.to_string(),
            format!("{:.17e}", r.e0),
            format!("{:.17e}", r.e1),
            r.ratio.map(|x| format!("{x:.17e}")).unwrap_or_default(),
            format!("{:.17e}", r.kappa),
            r.excluded.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `t, norm`.
pub fn write_curve_csv<W: Write>(curve: &[(f64, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["t", "norm"]).map_err(io)?;
    for (t, v) in curve {
        w.write_record([format!("{t:.17e}"), format!("{v:.17e}")])
            .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn stats_json(cfg: &ExperimentConfig, stats: &ExperimentStats) -> Result<String> {
    #[derive(Serialize)]
    struct Out<'a> {
        config: &'a ExperimentConfig,
        stats: &'a ExperimentStats,
    }
    serde_json::to_string_pretty(&Out { config: cfg, stats }).map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::{convex_hull, Degeneracy};
    use crate::scalar::cmp_re_im;

    fn small(dim: usize, trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            dim,
            trials,
            t_count: 21,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn node_set_shape() {
        let n = rectangle_nodes();
        assert_eq!(n.len(), 16);
        assert_eq!(n.max_re(), 0.0);
        assert_eq!(n.distinct().len(), 16);
        let h = convex_hull(n.as_slice()).unwrap();
        assert_eq!(h.degeneracy, Degeneracy::Polygon);
        let mut v = h.vertices.clone();
        v.sort_by(cmp_re_im);
        assert_eq!(
            v,
            vec![
                cplx(-1.0, -PI),
                cplx(-1.0, PI),
                cplx(0.0, -PI),
                cplx(0.0, PI)
            ]
        );
    }

    #[test]
    fn sampled_spectrum_inside_rect() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_trial_matrix(6, &Rect::default(), &mut rng).unwrap();
        assert!(m.d.iter().all(|&z| Rect::default().contains(z, 0.0)));
        assert!(m
            .t
            .as_slice()
            .iter()
            .all(|z| z.im == 0.0 && z.re.abs() <= 1.0));
        assert!(m.a.is_finite());
    }

    #[test]
    fn sharp_exp_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_trial_matrix(5, &Rect::default(), &mut rng).unwrap();
        let id = CMatrix::identity(5).unwrap();
        assert!(sharp_exp(&m, 0.0).unwrap().sub(&id).unwrap().max_abs() < 1e-10 * 1e3);
        let diag = TrialMatrices {
            t: id.clone(),
            t_inv: id.clone(),
            d: m.d.clone(),
            a: CMatrix::from_diag(&m.d).unwrap(),
            redraws: 0,
        };
        let e = sharp_exp(&diag, 0.5).unwrap();
        for (i, di) in m.d.iter().enumerate() {
            assert_eq!(e[(i, i)], (di * 0.5).exp());
        }
    }

    #[test]
    fn factored_operator_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_trial_matrix(4, &Rect::default(), &mut rng).unwrap();
        let nodes = rectangle_nodes();
        let curve = norms_curve(&m, &nodes, 3, &Tolerances::default()).unwrap();
        let omega = omega_at_matrix(&nodes, &m.a).unwrap();
        for (t, v) in curve {
            let dense = spectral_norm_with(
                &omega.matmul(&sharp_exp(&m, t).unwrap()).unwrap(),
                &Tolerances::default(),
            )
            .unwrap();
            assert!((v - dense).abs() <= 1e-9 * dense);
        }
    }

    #[test]
    fn point_rectangle_trial() {
        let cfg = ExperimentConfig {
            rect: Rect {
                re_lo: -0.5,
                re_hi: -0.5,
                im_lo: 0.0,
                im_hi: 0.0,
            },
            ..small(2, 1)
        };
        let r = run_trial(&cfg, 0).unwrap();
        // A = −𝟏/2, so e0 is the scalar interpolation error at −1/2
        let p = divided_differences_with(&Exp, &rectangle_nodes(), &Tolerances::default()).unwrap();
        let z = cplx(-0.5, 0.0);
        let scalar = (z.exp() - p.eval_scalar(z)).norm();
        assert!((r.e0 - scalar).abs() <= 1e-6 * scalar, "{r:?}");
        assert!(r.e1 >= r.e0);
    }

    #[test]
    fn trial_is_reproducible() {
        let cfg = small(8, 1);
        assert_eq!(run_trial(&cfg, 2).unwrap(), run_trial(&cfg, 2).unwrap());
        let r = run_trial(&cfg, 2).unwrap();
        assert!(r.e1 >= r.e0);
        assert!(r.expm_discrepancy.unwrap() < 1e-7 * r.kappa);
    }

    #[test]
    fn curve_starts_at_omega_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_trial_matrix(4, &Rect::default(), &mut rng).unwrap();
        let nodes = rectangle_nodes();
        let curve = norms_curve(&m, &nodes, 5, &Tolerances::default()).unwrap();
        assert_eq!(curve.len(), 5);
        let w = spectral_norm_with(
            &omega_at_matrix(&nodes, &m.a).unwrap(),
            &Tolerances::default(),
        )
        .unwrap();
        assert!((curve[0].1 - w).abs() <= 1e-9 * w);
    }

    #[test]
    fn config_validation() {
        let mut cfg = small(4, 1);
        cfg.rect.re_lo = 1.0;
        assert!(cfg.validate().is_err());
        assert!(small(1, 1).validate().is_err());
        assert!(small(4, 0).validate().is_err());
    }

    #[test]
    fn statistics_conventions() {
        let s = Summary::of(&[1.0, 2.0, 3.0]);
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.std, Some(1.0));
        assert_eq!(Summary::of(&[4.0]).std, None);
        assert_eq!(median(&mut [3.0, 1.0, 2.0, 10.0]), 2.5);
    }

    #[test]
    fn exclusion_by_kappa() {
        let rec = |kappa: f64, excluded: bool| TrialRecord {
            trial: 0,
            seed_offset: 0,
            e0: 1.0,
            e1: 2.0,
            ratio: Some(2.0),
            kappa,
            excluded,
            redraws: 0,
            expm_discrepancy: None,
        };
        let stats = summarize(&[rec(10.0, false), rec(1e6, true), rec(30.0, false)], 1);
        assert_eq!(
            (
                stats.trials,
                stats.kept,
                stats.excluded_count,
                stats.invalid_count
            ),
            (4, 2, 1, 1)
        );
        assert_eq!(stats.kappa_mean_kept, 20.0);
        assert!((stats.kappa_mean_all - (1e6 + 40.0) / 3.0).abs() < 1e-6);
    }

    #[test]
    fn csv_layout() {
        let cfg = small(3, 2);
        let run = run_experiment(&cfg).unwrap();
        let mut buf = Vec::new();
        write_records_csv(&run.records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("trial,e0,e1,ratio,kappa,excluded\n"));
        assert_eq!(text.lines().count(), 3);
        let json = stats_json(&cfg, &run.stats).unwrap();
        assert!(json.contains("kappa_mean_all") && json.contains("kappa_mean_kept"));
    }
}
