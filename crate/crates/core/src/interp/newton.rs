use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::interp::{AnalyticFunction, NodeSet};
use crate::linalg::CMatrix;
use crate::scalar::{czero, exact_eq, Complex, Real};

/// Interpolation polynomial in Newton form.
///
/// `centers` is the order the divided-difference tableau was built in
/// (repeated nodes adjacent); the evaluation nests over it. `nodes` keeps
/// the caller's original order, which is the one `Ω` uses.
#[derive(Debug, Clone)]
pub struct NewtonPolynomial<T: Real> {
    pub nodes: NodeSet<T>,
    pub centers: Vec<Complex<T>>,
    /// `cₖ = f[centers₀, …, centersₖ]`.
    pub coeffs: Vec<Complex<T>>,
    pub warnings: Vec<String>,
}

pub fn divided_differences<T: Real, F: AnalyticFunction<T> + ?Sized>(
    f: &F,
    nodes: &NodeSet<T>,
) -> Result<NewtonPolynomial<T>> {
    divided_differences_with(f, nodes, &Tolerances::default())
}

/// Confluent divided-difference tableau.
///
/// `f[z,…,z]` with k+1 copies is `f⁽ᵏ⁾(z)/k!`; otherwise
/// `f[zᵢ…zⱼ] = (f[zᵢ₊₁…zⱼ] − f[zᵢ…zⱼ₋₁]) / (zⱼ − zᵢ)`.
pub fn divided_differences_with<T: Real, F: AnalyticFunction<T> + ?Sized>(
    f: &F,
    nodes: &NodeSet<T>,
    tol: &Tolerances,
) -> Result<NewtonPolynomial<T>> {
    let z = nodes.grouped();
    let m = z.len();
    f.check_order(nodes.max_multiplicity() - 1)?;

    let mut warnings = Vec::new();
    let distinct = nodes.distinct();
    if distinct.len() > 1 {
        let spread = distinct
            .iter()
            .flat_map(|a| distinct.iter().map(move |b| (a - b).norm()))
            .fold(T::zero(), T::max);
        let min_gap = distinct
            .iter()
            .enumerate()
            .flat_map(|(i, a)| distinct[i + 1..].iter().map(move |b| (a - b).norm()))
            .fold(T::infinity(), T::min);
        if min_gap < T::lit(tol.node_gap_warning) * spread {
            warnings.push(format!(
                "nearly coincident distinct nodes: minimum gap {:.3e} vs spread {:.3e}",
                min_gap.to_f64_(),
                spread.to_f64_()
            ));
        }
    }

    let mut d: Vec<Complex<T>> = z.iter().map(|&zi| f.eval(zi)).collect::<Result<_>>()?;
    let mut k_fact = T::one();
    for k in 1..m {
        k_fact *= T::from_usize_(k);
        for i in (k..m).rev() {
            d[i] = if exact_eq(z[i], z[i - k]) {
                f.derivative(k, z[i])?.unscale(k_fact)
            } else {
                (d[i] - d[i - 1]) / (z[i] - z[i - k])
            };
        }
    }

    let limit = T::lit(tol.coeff_growth_limit);
    for (index, c) in d.iter().enumerate() {
        let magnitude = c.norm();
        if !(magnitude <= limit) {
            return Err(Error::CoefficientGrowth {
                index,
                magnitude: magnitude.to_f64_(),
            });
        }
    }

    Ok(NewtonPolynomial {
        nodes: nodes.clone(),
        centers: z,
        coeffs: d,
        warnings,
    })
}

impl<T: Real> NewtonPolynomial<T> {
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c₀ + (z−z₁)(c₁ + (z−z₂)(…))`.
    pub fn eval_scalar(&self, z: Complex<T>) -> Complex<T> {
        let m = self.coeffs.len();
        let mut acc = self.coeffs[m - 1];
        for k in (0..m - 1).rev() {
            acc = self.coeffs[k] + (z - self.centers[k]) * acc;
        }
        acc
    }

    /// Nested evaluation at a matrix: `P ← cₖ𝟏 + (A − zₖ₊₁𝟏)P`.
    pub fn eval_matrix(&self, a: &CMatrix<T>) -> Result<CMatrix<T>> {
        let n = a.dim()?;
        let m = self.coeffs.len();
        let mut p = CMatrix::identity(n)?.scale(self.coeffs[m - 1]);
        for k in (0..m - 1).rev() {
            p = a
                .shift(-self.centers[k])?
                .matmul(&p)?
                .shift(self.coeffs[k])?;
        }
        p.check_finite("newton_eval_matrix")
    }

    /// Value and first `order` derivatives at `z`, by differentiating the
    /// nested form.
    pub fn eval_derivatives(&self, z: Complex<T>, order: usize) -> Vec<Complex<T>> {
        // Taylor coefficients of p around z, built inside-out
        let m = self.coeffs.len();
        let mut t = vec![czero::<T>(); order + 1];
        t[0] = self.coeffs[m - 1];
        for k in (0..m - 1).rev() {
            let shift = z - self.centers[k];
            for j in (0..=order).rev() {
                let carry = if j > 0 { t[j - 1] } else { czero() };
                t[j] = t[j] * shift + carry;
            }
            t[0] += self.coeffs[k];
        }
        let mut fact = T::one();
        t.iter()
            .enumerate()
            .map(|(j, c)| {
                if j > 0 {
                    fact *= T::from_usize_(j);
                }
                c.scale(fact)
            })
            .collect()
    }
}

pub fn newton_eval_scalar<T: Real>(p: &NewtonPolynomial<T>, z: Complex<T>) -> Complex<T> {
    p.eval_scalar(z)
}

pub fn newton_eval_matrix<T: Real>(p: &NewtonPolynomial<T>, a: &CMatrix<T>) -> Result<CMatrix<T>> {
    p.eval_matrix(a)
}
