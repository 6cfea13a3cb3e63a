//! Householder Hessenberg reduction and the complex Schur decomposition by
//! Wilkinson-shifted single-shift QR iteration.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::norm::spectral_norm_with;
use crate::linalg::CMatrix;
use crate::scalar::{cone, cplx, czero, Complex, Real};

/// Unitary triangularization `A = Qᴴ T Q`.
#[derive(Debug, Clone)]
pub struct SchurForm<T: Real> {
    pub q: CMatrix<T>,
    pub t: CMatrix<T>,
    pub source_dim: usize,
}

impl<T: Real> SchurForm<T> {
    /// Frobenius norms of `QQᴴ − 𝟏` and `QᴴTQ − A`, which bound the
    /// corresponding `‖·‖₂→₂` from above.
    pub fn residuals(&self, a: &CMatrix<T>) -> Result<(T, T)> {
        let qh = self.q.adjoint();
        let unit = self
            .q
            .matmul(&qh)?
            .sub(&CMatrix::identity(self.source_dim)?)?;
        let recon = qh.matmul(&self.t)?.matmul(&self.q)?.sub(a)?;
        Ok((unit.frobenius_norm(), recon.frobenius_norm()))
    }

    /// Checks both residuals against the configured per-dimension limits.
    pub fn verify(&self, a: &CMatrix<T>, tol: &Tolerances) -> Result<bool> {
        let d = T::from_usize_(self.source_dim);
        let (unit, recon) = self.residuals(a)?;
        let scale = spectral_norm_with(a, tol)?;
        Ok(unit <= T::lit(tol.unitarity_tol) * d
            && recon <= T::lit(tol.reconstruct_tol) * d * scale)
    }
}

/// Reflects `v` against rows `lo..` of every column in `cols` from the left:
/// `M ← (𝟏 − 2vvᴴ/‖v‖²) M`.
fn reflect_left<T: Real>(
    m: &mut CMatrix<T>,
    v: &[Complex<T>],
    lo: usize,
    cols: std::ops::Range<usize>,
    beta: T,
) {
    for j in cols {
        let mut s = czero::<T>();
        for (k, vk) in v.iter().enumerate() {
            s += vk.conj() * m[(lo + k, j)];
        }
        let s = s.scale(T::lit(2.0) / beta);
        for (k, vk) in v.iter().enumerate() {
            m[(lo + k, j)] -= vk * s;
        }
    }
}

/// `M ← M (𝟏 − 2vvᴴ/‖v‖²)` acting on columns `lo..`.
fn reflect_right<T: Real>(m: &mut CMatrix<T>, v: &[Complex<T>], lo: usize, beta: T) {
    for i in 0..m.rows() {
        let mut s = czero::<T>();
        for (k, vk) in v.iter().enumerate() {
            s += m[(i, lo + k)] * vk;
        }
        let s = s.scale(T::lit(2.0) / beta);
        for (k, vk) in v.iter().enumerate() {
            m[(i, lo + k)] -= s * vk.conj();
        }
    }
}

/// Returns `(Q₀, H)` with `H` upper Hessenberg and `A = Q₀ᴴ H Q₀`.
pub fn hessenberg<T: Real>(a: &CMatrix<T>) -> Result<(CMatrix<T>, CMatrix<T>)> {
    let (u, h) = hessenberg_vectors(a)?;
    Ok((u.adjoint(), h))
}

/// Returns `(U, H)` with `A = U H Uᴴ`.
fn hessenberg_vectors<T: Real>(a: &CMatrix<T>) -> Result<(CMatrix<T>, CMatrix<T>)> {
    let n = a.dim()?;
    let mut h = a.clone();
    let mut u = CMatrix::identity(n)?;
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let tail_zero = (lo + 1..n).all(|i| h[(i, k)] == czero());
        if tail_zero {
            continue;
        }
        let mut v: Vec<Complex<T>> = (lo..n).map(|i| h[(i, k)]).collect();
        let nx = super::norm::vec_norm(&v);
        let alpha = v[0];
        let phase = if alpha.norm() == T::zero() {
            cone()
        } else {
            alpha.unscale(alpha.norm())
        };
        v[0] += phase.scale(nx);
        let beta: T = v.iter().map(|z| z.norm_sqr()).sum();
        if beta == T::zero() {
            continue;
        }
        reflect_left(&mut h, &v, lo, k..n, beta);
        reflect_right(&mut h, &v, lo, beta);
        reflect_right(&mut u, &v, lo, beta);
        for i in lo + 1..n {
            h[(i, k)] = czero();
        }
    }
    Ok((u, h.check_finite("hessenberg")?))
}

/// `(c, s)` with `[c s; −s̄ c]·[x; y] = [r; 0]`, `c` real.
fn givens<T: Real>(x: Complex<T>, y: Complex<T>) -> (T, Complex<T>) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == T::zero() {
        return (T::one(), czero());
    }
    if ax == T::zero() {
        return (T::zero(), y.conj().unscale(ay));
    }
    let r = ax.hypot(ay);
    let phase = x.unscale(ax);
    (ax / r, (phase * y.conj()).unscale(r))
}

fn rotate_rows<T: Real>(
    m: &mut CMatrix<T>,
    p: usize,
    q: usize,
    c: T,
    s: Complex<T>,
    cols: std::ops::Range<usize>,
) {
    for j in cols {
        let a = m[(p, j)];
        let b = m[(q, j)];
        m[(p, j)] = a.scale(c) + s * b;
        m[(q, j)] = -(s.conj() * a) + b.scale(c);
    }
}

fn rotate_cols<T: Real>(
    m: &mut CMatrix<T>,
    p: usize,
    q: usize,
    c: T,
    s: Complex<T>,
    rows: std::ops::Range<usize>,
) {
    for i in rows {
        let a = m[(i, p)];
        let b = m[(i, q)];
        m[(i, p)] = a.scale(c) + s.conj() * b;
        m[(i, q)] = -(s * a) + b.scale(c);
    }
}

/// Eigenvalue of the trailing 2×2 block closer to its last diagonal entry.
fn wilkinson_shift<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> Complex<T> {
    let half = T::lit(0.5);
    let mid = (a + d).scale(half);
    let disc = ((a - d).scale(half).powi(2) + b * c).sqrt();
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

pub fn schur<T: Real>(a: &CMatrix<T>) -> Result<SchurForm<T>> {
    schur_with(a, &Tolerances::default())
}

pub fn schur_with<T: Real>(a: &CMatrix<T>, tol: &Tolerances) -> Result<SchurForm<T>> {
    let n = a.dim()?;
    if !a.is_finite() {
        return Err(Error::NonFinite("schur input"));
    }
    let (mut z, mut h) = hessenberg_vectors(a)?;
    let eps = T::epsilon();
    let hnorm = h.frobenius_norm();
    let tiny = T::min_positive_value() * T::from_usize_(n) / eps;
    let cap = tol.schur_sweeps_per_dim * n;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;

    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if diag == T::zero() {
                diag = hnorm;
            }
            if sub <= eps * diag || sub <= tiny {
                h[(l, l - 1)] = czero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        total += 1;
        since_deflation += 1;
        if total > cap {
            return Err(Error::NoConvergence {
                what: "schur QR iteration",
                iterations: total,
                estimate: h[(hi, hi - 1)].norm().to_f64_(),
            });
        }

        let mu = if since_deflation % 10 == 0 {
            // exceptional shift breaks cycles of the standard one
            let s = h[(hi, hi - 1)].norm()
                + if hi >= 2 {
                    h[(hi - 1, hi - 2)].norm()
                } else {
                    T::zero()
                };
            h[(hi, hi)] + cplx(T::lit(0.75) * s, T::lit(0.4375) * s)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in l..hi {
            let (x, y) = if k == l {
                (h[(l, l)] - mu, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let col_start = if k == l { l } else { k - 1 };
            rotate_rows(&mut h, k, k + 1, c, s, col_start..n);
            if k > l {
                h[(k + 1, k - 1)] = czero();
            }
            rotate_cols(&mut h, k, k + 1, c, s, 0..(k + 3).min(hi + 1));
            rotate_cols(&mut z, k, k + 1, c, s, 0..n);
        }
    }

    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = czero();
        }
    }
    Ok(SchurForm {
        q: z.adjoint(),
        t: h.check_finite("schur")?,
        source_dim: n,
    })
}

/// Spectrum of `A`, with algebraic multiplicity, in no particular order.
pub fn eigenvalues<T: Real>(a: &CMatrix<T>) -> Result<Vec<Complex<T>>> {
    Ok(schur(a)?.t.diagonal())
}

/// `T = D + N` with `D` diagonal and `N` strictly upper triangular.
pub fn split_schur<T: Real>(s: &SchurForm<T>) -> (CMatrix<T>, CMatrix<T>) {
    let n = s.t.rows();
    let d = CMatrix::from_fn(n, n, |i, j| if i == j { s.t[(i, j)] } else { czero() });
    let nil = CMatrix::from_fn(n, n, |i, j| if j > i { s.t[(i, j)] } else { czero() });
    (d, nil)
}
