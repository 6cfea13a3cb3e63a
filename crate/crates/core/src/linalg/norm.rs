//! Matrix norms, including the spectral norm by Krylov-accelerated power
//! iteration on `AᴴA`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{cplx, czero, is_finite, Complex, Real};

/// Anything that can apply itself and its adjoint to a vector.
pub trait LinearOperator<T: Real> {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &[Complex<T>], y: &mut [Complex<T>]);
    fn apply_adjoint(&self, x: &[Complex<T>], y: &mut [Complex<T>]);
}

impl<T: Real> LinearOperator<T> for CMatrix<T> {
    fn nrows(&self) -> usize {
        self.rows()
    }
    fn ncols(&self) -> usize {
        self.cols()
    }
    fn apply(&self, x: &[Complex<T>], y: &mut [Complex<T>]) {
        self.matvec(x, y)
    }
    fn apply_adjoint(&self, x: &[Complex<T>], y: &mut [Complex<T>]) {
        self.adjoint_matvec(x, y)
    }
}

pub(crate) fn vec_norm<T: Real>(x: &[Complex<T>]) -> T {
    let scale = x.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    scale
        * x.iter()
            .map(|z| z.unscale(scale).norm_sqr())
            .sum::<T>()
            .sqrt()
}

#[derive(Debug, Clone)]
pub struct SingularEstimate<T: Real> {
    /// Estimate of the largest singular value; never above the true value
    /// in exact arithmetic.
    pub sigma: T,
    /// Approximate top right singular vector, usable as a warm start.
    pub vector: Vec<Complex<T>>,
    /// Applications of `opᴴ·op` spent.
    pub iterations: usize,
}

/// Largest Krylov basis built before an explicit restart.
const KRYLOV_DIM: usize = 32;

fn random_vector<T: Real>(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex<T>> {
    (0..n)
        .map(|_| {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            cplx(T::lit(re), T::lit(im))
        })
        .collect()
}

fn dot<T: Real>(v: &[Complex<T>], w: &[Complex<T>]) -> Complex<T> {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

/// Two passes of classical Gram-Schmidt against an orthonormal basis.
fn orthogonalize<T: Real>(w: &mut [Complex<T>], basis: &[Vec<Complex<T>>]) {
    for _ in 0..2 {
        for v in basis {
            let h = dot(v, w);
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi -= *vi * h;
            }
        }
    }
}

/// Top eigenpair of a small real symmetric matrix (row-major) by cyclic Jacobi.
fn symmetric_top_eigen<T: Real>(mut a: Vec<T>, k: usize) -> (T, Vec<T>) {
    let mut v = vec![T::zero(); k * k];
    for i in 0..k {
        v[i * k + i] = T::one();
    }
    let frob2: T = a.iter().map(|x| *x * *x).sum();
    for _ in 0..64 {
        let mut off = T::zero();
        for p in 0..k {
            for q in p + 1..k {
                off += a[p * k + q] * a[p * k + q];
            }
        }
        if off <= T::epsilon() * T::epsilon() * frob2 {
            break;
        }
        for p in 0..k {
            for q in p + 1..k {
                let apq = a[p * k + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q * k + q] - a[p * k + p]) / (apq + apq);
                let sign = if theta >= T::zero() {
                    T::one()
                } else {
                    -T::one()
                };
                let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for r in 0..k {
                    let (arp, arq) = (a[r * k + p], a[r * k + q]);
                    a[r * k + p] = c * arp - s * arq;
                    a[r * k + q] = s * arp + c * arq;
                }
                for r in 0..k {
                    let (apr, aqr) = (a[p * k + r], a[q * k + r]);
                    a[p * k + r] = c * apr - s * aqr;
                    a[q * k + r] = s * apr + c * aqr;
                }
                for r in 0..k {
                    let (vrp, vrq) = (v[r * k + p], v[r * k + q]);
                    v[r * k + p] = c * vrp - s * vrq;
                    v[r * k + q] = s * vrp + c * vrq;
                }
            }
        }
    }
    let mut top = 0;
    for i in 1..k {
        if a[i * k + i] > a[top * k + top] {
            top = i;
        }
    }
    (a[top * k + top], (0..k).map(|r| v[r * k + top]).collect())
}

/// Top eigenpair of the Lanczos matrix with diagonal `alpha` and the
/// leading `alpha.len() - 1` entries of `beta` below it.
fn tridiagonal_top<T: Real>(alpha: &[T], beta: &[T]) -> (T, Vec<T>) {
    let k = alpha.len();
    let mut t = vec![T::zero(); k * k];
    for i in 0..k {
        t[i * k + i] = alpha[i];
        if i + 1 < k {
            t[i * k + i + 1] = beta[i];
            t[(i + 1) * k + i] = beta[i];
        }
    }
    symmetric_top_eigen(t, k)
}

struct Cycle<T: Real> {
    theta: T,
    ritz: Vec<Complex<T>>,
    residual: T,
    steps: usize,
}

/// One Lanczos run on `opᴴ·op` from the unit vector `x`, with full
/// reorthogonalization. An invariant subspace is extended by a random
/// direction so a deficient start cannot hide the top of the spectrum;
/// such extensions may carry the basis past `kmax`, up to twice it.
fn lanczos_cycle<T: Real, Op: LinearOperator<T> + ?Sized>(
    op: &Op,
    x: Vec<Complex<T>>,
    kmax: usize,
    rel_tol: T,
    rng: &mut ChaCha8Rng,
) -> Result<Cycle<T>> {
    let n = x.len();
    let mut y = vec![czero::<T>(); op.nrows()];
    let mut basis = vec![x];
    let mut alpha: Vec<T> = Vec::new();
    let mut beta: Vec<T> = Vec::new();
    let mut scale = T::zero();
    loop {
        let j = basis.len() - 1;
        let mut w = vec![czero::<T>(); n];
        op.apply(&basis[j], &mut y);
        op.apply_adjoint(&y, &mut w);
        if !w.iter().all(|z| is_finite(*z)) {
            return Err(Error::NonFinite("spectral norm iteration"));
        }
        let a_j = dot(&basis[j], &w).re;
        alpha.push(a_j);
        scale = scale.max(a_j.abs()).max(vec_norm(&w));
        orthogonalize(&mut w, &basis);
        let b = vec_norm(&w);
        if basis.len() == n {
            // the basis spans the whole space
            beta.push(T::zero());
            break;
        }
        let invariant = b <= T::lit(16.0) * T::epsilon() * scale;
        if invariant && basis.len() < 2 * kmax {
            w = random_vector(n, rng);
            orthogonalize(&mut w, &basis);
            let nw = vec_norm(&w);
            w.iter_mut().for_each(|z| *z = z.unscale(nw));
            beta.push(T::zero());
        } else {
            if basis.len() >= kmax {
                beta.push(b);
                break;
            }
            if basis.len().is_power_of_two() {
                let (theta, s) = tridiagonal_top(&alpha, &beta);
                if b * s[alpha.len() - 1].abs() <= rel_tol * theta {
                    beta.push(b);
                    break;
                }
            }
            w.iter_mut().for_each(|z| *z = z.unscale(b));
            beta.push(b);
        }
        basis.push(w);
    }

    let k = alpha.len();
    let (theta, s) = tridiagonal_top(&alpha, &beta);
    let mut ritz = vec![czero::<T>(); n];
    for (v, si) in basis.iter().zip(&s) {
        for (r, vi) in ritz.iter_mut().zip(v) {
            *r += vi.scale(*si);
        }
    }
    let nr = vec_norm(&ritz);
    ritz.iter_mut().for_each(|z| *z = z.unscale(nr));
    Ok(Cycle {
        theta,
        ritz,
        residual: beta[k - 1] * s[k - 1].abs(),
        steps: k,
    })
}

/// Largest singular value of `op`: power iteration on `opᴴ·op`,
/// accelerated by explicitly restarted Lanczos.
///
/// A cycle stops when the Ritz residual drops below `norm_tol` relative to
/// the Ritz value. The reported value is `‖AᴴAy‖ / ‖Ay‖` at the final Ritz
/// vector `y`, which is bounded above by `σ_max`. A start vector that does
/// not converge within `power_max_iters` applications is replaced by a
/// fresh seeded one, up to `power_restarts` times.
pub fn top_singular_value<T: Real, Op: LinearOperator<T> + ?Sized>(
    op: &Op,
    start: Option<&[Complex<T>]>,
    tol: &Tolerances,
) -> Result<SingularEstimate<T>> {
    let n = op.ncols();
    let rel_tol = T::lit(tol.norm_tol).max(T::lit(8.0) * T::epsilon());
    let stagnation = T::lit(8.0) * T::epsilon();
    let mut best = T::zero();
    let mut total = 0;
    if n == 0 {
        return Ok(SingularEstimate {
            sigma: T::zero(),
            vector: Vec::new(),
            iterations: 0,
        });
    }

    for attempt in 0..=tol.power_restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(tol.power_seed.wrapping_add(attempt as u64));
        let mut x = match (attempt, start) {
            (0, Some(s)) if s.len() == n && vec_norm(s) > T::zero() => s.to_vec(),
            _ => random_vector(n, &mut rng),
        };
        let nx = vec_norm(&x);
        x.iter_mut().for_each(|v| *v = v.unscale(nx));

        let mut used = 0;
        let mut prev: Option<T> = None;
        while used < tol.power_max_iters {
            let kmax = KRYLOV_DIM.min(n).min(tol.power_max_iters - used);
            let cyc = lanczos_cycle(op, x, kmax, rel_tol, &mut rng)?;
            used += cyc.steps;
            total += cyc.steps;
            x = cyc.ritz;
            let theta = cyc.theta.max(T::zero());
            best = best.max(theta.sqrt());
            let settled = prev.is_some_and(|p| (theta - p).abs() <= stagnation * theta);
            if cyc.residual <= rel_tol * theta || settled {
                return finish(op, x, total);
            }
            prev = Some(theta);
        }
    }
    Err(Error::NoConvergence {
        what: "spectral norm iteration",
        iterations: total,
        estimate: best.to_f64_(),
    })
}

fn finish<T: Real, Op: LinearOperator<T> + ?Sized>(
    op: &Op,
    x: Vec<Complex<T>>,
    iterations: usize,
) -> Result<SingularEstimate<T>> {
    let mut y = vec![czero::<T>(); op.nrows()];
    let mut z = vec![czero::<T>(); op.ncols()];
    op.apply(&x, &mut y);
    let ny = vec_norm(&y);
    if ny == T::zero() {
        return Ok(SingularEstimate {
            sigma: T::zero(),
            vector: x,
            iterations,
        });
    }
    op.apply_adjoint(&y, &mut z);
    let nz = vec_norm(&z);
    if !nz.is_finite() || !ny.is_finite() {
        return Err(Error::NonFinite("spectral norm iteration"));
    }
    Ok(SingularEstimate {
        sigma: nz / ny,
        vector: x,
        iterations: iterations + 1,
    })
}

/// `‖A‖₂→₂` with default tolerances.
pub fn spectral_norm<T: Real>(a: &CMatrix<T>) -> Result<T> {
    spectral_norm_with(a, &Tolerances::default())
}

pub fn spectral_norm_with<T: Real>(a: &CMatrix<T>, tol: &Tolerances) -> Result<T> {
    if a.max_abs() == T::zero() {
        return Ok(T::zero());
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("spectral norm input"));
    }
    top_singular_value(a, None, tol).map(|o| o.sigma)
}

/// A norm on the space of matrices, supplied to the bound engine.
pub trait MatrixNorm<T: Real>: Sync {
    fn name(&self) -> &'static str;
    fn norm(&self, m: &CMatrix<T>) -> Result<T>;
    /// Whether this is the operator norm induced by the Euclidean norm.
    fn is_spectral(&self) -> bool {
        false
    }
}

/// `‖·‖₂→₂`.
#[derive(Debug, Clone, Default)]
pub struct SpectralNorm {
    pub tol: Tolerances,
}

impl SpectralNorm {
    pub fn new(tol: Tolerances) -> Self {
        Self { tol }
    }
}

impl<T: Real> MatrixNorm<T> for SpectralNorm {
    fn name(&self) -> &'static str {
        "2->2"
    }
    fn norm(&self, m: &CMatrix<T>) -> Result<T> {
        spectral_norm_with(m, &self.tol)
    }
    fn is_spectral(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FrobeniusNorm;

impl<T: Real> MatrixNorm<T> for FrobeniusNorm {
    fn name(&self) -> &'static str {
        "frobenius"
    }
    fn norm(&self, m: &CMatrix<T>) -> Result<T> {
        Ok(m.frobenius_norm())
    }
}

/// Maximum column sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct OneNorm;

impl<T: Real> MatrixNorm<T> for OneNorm {
    fn name(&self) -> &'static str {
        "1->1"
    }
    fn norm(&self, m: &CMatrix<T>) -> Result<T> {
        Ok(m.one_norm())
    }
}
