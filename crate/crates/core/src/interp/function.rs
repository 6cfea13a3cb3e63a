use crate::error::{Error, Result};
use crate::linalg::{matrix_exp, CMatrix};
use crate::scalar::{creal, czero, Complex, Real};

/// A function analytic on the region of interest, with the derivative
/// evaluators the interpolation and bound machinery need.
///
/// Implementations must be safe to call from several threads at once.
pub trait AnalyticFunction<T: Real>: Send + Sync {
    fn name(&self) -> String;

    /// `f⁽ᵏ⁾(z)`; fails with [`Error::DerivativeOrder`] past [`Self::max_order`].
    fn derivative(&self, k: usize, z: Complex<T>) -> Result<Complex<T>>;

    /// `f⁽ᵏ⁾(M)` for a square matrix argument.
    fn matrix_derivative(&self, k: usize, m: &CMatrix<T>) -> Result<CMatrix<T>>;

    /// Highest derivative order available, `None` when unbounded.
    fn max_order(&self) -> Option<usize>;

    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.derivative(0, z)
    }

    /// Whether this is the exponential, which the exponential-specific
    /// bounds require.
    fn is_exp(&self) -> bool {
        false
    }

    fn check_order(&self, k: usize) -> Result<()> {
        match self.max_order() {
            Some(avail) if k > avail => Err(Error::DerivativeOrder {
                requested: k,
                available: avail,
            }),
            _ => Ok(()),
        }
    }
}

/// `f(z) = e^z`; every derivative is `e^z`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Exp;

impl<T: Real> AnalyticFunction<T> for Exp {
    fn name(&self) -> String {
        "exp".into()
    }
    fn derivative(&self, _k: usize, z: Complex<T>) -> Result<Complex<T>> {
        Ok(z.exp())
    }
    fn matrix_derivative(&self, _k: usize, m: &CMatrix<T>) -> Result<CMatrix<T>> {
        matrix_exp(m)
    }
    fn max_order(&self) -> Option<usize> {
        None
    }
    fn is_exp(&self) -> bool {
        true
    }
}

/// Polynomial `Σ cⱼ zʲ` with coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T: Real> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().map(|&c| creal(c)).collect())
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| c.re != T::zero() || c.im != T::zero())
            .unwrap_or(0)
    }

    /// Coefficients of the k-th derivative, exactly.
    pub fn differentiate(&self, k: usize) -> Polynomial<T> {
        if k >= self.coeffs.len() {
            return Polynomial::new(vec![]);
        }
        let out = (k..self.coeffs.len())
            .map(|j| {
                // j!/(j−k)!
                let falling = ((j - k + 1)..=j).fold(T::one(), |acc, x| acc * T::from_usize_(x));
                self.coeffs[j].scale(falling)
            })
            .collect();
        Polynomial::new(out)
    }

    pub fn eval_at(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(czero(), |acc, c| acc * z + c)
    }

    pub fn eval_matrix(&self, m: &CMatrix<T>) -> Result<CMatrix<T>> {
        let n = m.dim()?;
        let mut acc = CMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.matmul(m)?.shift(*c)?;
        }
        Ok(acc)
    }
}

impl<T: Real> AnalyticFunction<T> for Polynomial<T> {
    fn name(&self) -> String {
        format!("poly(degree {})", self.degree())
    }
    fn derivative(&self, k: usize, z: Complex<T>) -> Result<Complex<T>> {
        Ok(self.differentiate(k).eval_at(z))
    }
    fn matrix_derivative(&self, k: usize, m: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.differentiate(k).eval_matrix(m)
    }
    fn max_order(&self) -> Option<usize> {
        None
    }
}

type ScalarFn<T> = dyn Fn(usize, Complex<T>) -> Complex<T> + Send + Sync;
type MatrixFn<T> = dyn Fn(usize, &CMatrix<T>) -> Result<CMatrix<T>> + Send + Sync;

/// A user-supplied function given by closures.
///
/// The matrix evaluator is trusted as is; a wrong one yields a wrong
/// certificate.
pub struct ClosureFunction<T: Real> {
    name: String,
    scalar: Box<ScalarFn<T>>,
    matrix: Box<MatrixFn<T>>,
    max_order: usize,
}

impl<T: Real> ClosureFunction<T> {
    pub fn new(
        name: impl Into<String>,
        max_order: usize,
        scalar: impl Fn(usize, Complex<T>) -> Complex<T> + Send + Sync + 'static,
        matrix: impl Fn(usize, &CMatrix<T>) -> Result<CMatrix<T>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            scalar: Box::new(scalar),
            matrix: Box::new(matrix),
            max_order,
        }
    }
}

impl<T: Real> AnalyticFunction<T> for ClosureFunction<T> {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn derivative(&self, k: usize, z: Complex<T>) -> Result<Complex<T>> {
        self.check_order(k)?;
        Ok((self.scalar)(k, z))
    }
    fn matrix_derivative(&self, k: usize, m: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.check_order(k)?;
        (self.matrix)(k, m)
    }
    fn max_order(&self) -> Option<usize> {
        Some(self.max_order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn exp_derivatives_are_exp() {
        let z = cplx(0.3, -0.7);
        for k in 0..5 {
            assert_eq!(
                AnalyticFunction::<f64>::derivative(&Exp, k, z).unwrap(),
                z.exp()
            );
        }
        assert_eq!(AnalyticFunction::<f64>::eval(&Exp, z).unwrap(), z.exp());
    }

    #[test]
    fn polynomial_differentiation() {
        // 1 + 2z + 3z² → 2 + 6z → 6 → 0
        let p = Polynomial::<f64>::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(p.differentiate(1), Polynomial::from_real(&[2.0, 6.0]));
        assert_eq!(p.differentiate(2), Polynomial::from_real(&[6.0]));
        assert_eq!(p.derivative(3, cplx(5.0, 1.0)).unwrap(), cplx(0.0, 0.0));
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn polynomial_matrix_eval() {
        let p = Polynomial::<f64>::from_real(&[1.0, 0.0, 1.0]);
        let m = CMatrix::from_diag(&[cplx(2.0, 0.0), cplx(0.0, 1.0)]).unwrap();
        let v = p.eval_matrix(&m).unwrap();
        assert_eq!(v.diagonal(), vec![cplx(5.0, 0.0), cplx(0.0, 0.0)]);
    }

    #[test]
    fn closure_order_limit() {
        let f = ClosureFunction::<f64>::new("sin-ish", 1, |_, z| z, |_, m| Ok(m.clone()));
        assert!(f.derivative(1, cplx(0.0, 0.0)).is_ok());
        assert_eq!(
            f.derivative(2, cplx(0.0, 0.0)),
            Err(Error::DerivativeOrder {
                requested: 2,
                available: 1
            })
        );
    }
}
