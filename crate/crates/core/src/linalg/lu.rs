//! LU factorization with partial pivoting.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::norm::spectral_norm_with;
use crate::linalg::CMatrix;
use crate::scalar::{czero, Complex, Real};

/// `PA = LU`, with `L` unit lower and `U` upper triangular packed together.
#[derive(Debug, Clone)]
pub struct Lu<T: Real> {
    packed: CMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn factor(a: &CMatrix<T>) -> Result<Self> {
        let n = a.dim()?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let small = T::from_usize_(n) * T::epsilon() * a.max_abs();
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].norm()))
                    .fold(
                        (k, T::zero()),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pmax == T::zero() || pmax <= small {
                return Err(Error::Singular { column: k });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l.re == T::zero() && l.im == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Self { packed: lu, perm })
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &CMatrix<T>) -> Result<CMatrix<T>> {
        let n = self.packed.rows();
        if b.rows() != n {
            return Err(Error::DimensionMismatch {
                op: "solve",
                left: self.packed.shape(),
                right: b.shape(),
            });
        }
        let m = b.cols();
        let mut x = CMatrix::from_fn(n, m, |i, j| b[(self.perm[i], j)]);
        let mut col = vec![czero::<T>(); n];
        for j in 0..m {
            for (i, c) in col.iter_mut().enumerate() {
                *c = x[(i, j)];
            }
            self.solve_vec_in_place(&mut col);
            for (i, c) in col.iter().enumerate() {
                x[(i, j)] = *c;
            }
        }
        x.check_finite("solve")
    }

    fn solve_vec_in_place(&self, v: &mut [Complex<T>]) {
        let n = v.len();
        let lu = &self.packed;
        for i in 1..n {
            let mut s = v[i];
            for k in 0..i {
                s -= lu[(i, k)] * v[k];
            }
            v[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = v[i];
            for k in i + 1..n {
                s -= lu[(i, k)] * v[k];
            }
            v[i] = s / lu[(i, i)];
        }
    }
}

/// `X` with `A X = B`.
pub fn solve<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<CMatrix<T>> {
    Lu::factor(a)?.solve(b)
}

pub fn inverse<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.dim()?;
    solve(a, &CMatrix::identity(n)?)
}

/// `κ₂(A) = ‖A‖₂→₂ · ‖A⁻¹‖₂→₂`.
pub fn condition_number_2<T: Real>(a: &CMatrix<T>) -> Result<T> {
    condition_number_2_with(a, &Tolerances::default())
}

pub fn condition_number_2_with<T: Real>(a: &CMatrix<T>, tol: &Tolerances) -> Result<T> {
    let inv = inverse(a)?;
    Ok(spectral_norm_with(a, tol)? * spectral_norm_with(&inv, tol)?)
}
