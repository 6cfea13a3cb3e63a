use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{cmp_re_im, cone, cplx, creal, exact_eq, is_finite, Complex, Real};

/// Ordered multiset of interpolation points. Repeated values are meaningful:
/// a node occurring k times asks for matching of f up to its (k−1)-th
/// derivative there.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet<T: Real> {
    nodes: Vec<Complex<T>>,
}

impl<T: Real> NodeSet<T> {
    pub fn new(nodes: Vec<Complex<T>>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("node set must not be empty".into()));
        }
        if !nodes.iter().all(|z| is_finite(*z)) {
            return Err(Error::NonFinite("node set"));
        }
        Ok(Self { nodes })
    }

    pub fn from_real(nodes: &[T]) -> Result<Self> {
        Self::new(nodes.iter().map(|&x| creal(x)).collect())
    }

    /// Node count m.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.nodes
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex<T>> {
        self.nodes.iter()
    }

    /// Occurrences of `z` (exact equality).
    pub fn multiplicity(&self, z: Complex<T>) -> usize {
        self.nodes.iter().filter(|w| exact_eq(**w, z)).count()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.grouped()
            .chunk_by(|a, b| exact_eq(*a, *b))
            .map(<[_]>::len)
            .max()
            .unwrap_or(0)
    }

    /// Stable sort by (re, im), so equal values become adjacent.
    pub fn grouped(&self) -> Vec<Complex<T>> {
        let mut v = self.nodes.clone();
        v.sort_by(cmp_re_im);
        v
    }

    /// Distinct values in grouped order.
    pub fn distinct(&self) -> Vec<Complex<T>> {
        let mut v = self.grouped();
        v.dedup_by(|a, b| exact_eq(*a, *b));
        v
    }

    /// `β = max Re zₖ`.
    pub fn max_re(&self) -> T {
        self.nodes
            .iter()
            .map(|z| z.re)
            .fold(T::neg_infinity(), T::max)
    }

    /// The nodes translated by `c`.
    pub fn shifted(&self, c: Complex<T>) -> Self {
        Self {
            nodes: self.nodes.iter().map(|z| z + c).collect(),
        }
    }
}

/// `Ω(z) = ∏ (z − zₖ)`, multiplied in node order.
pub fn omega_at_scalar<T: Real>(nodes: &NodeSet<T>, z: Complex<T>) -> Complex<T> {
    nodes.iter().fold(cone(), |acc, zk| acc * (z - zk))
}

/// `Ω(A) = ∏ (A − zₖ𝟏)`, accumulated left to right in node order.
pub fn omega_at_matrix<T: Real>(nodes: &NodeSet<T>, a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let mut iter = nodes.iter();
    let first = iter.next().expect("node set is non-empty");
    let mut acc = a.shift(-first)?;
    for zk in iter {
        acc = acc.matmul(&a.shift(-zk)?)?;
    }
    acc.check_finite("omega_at_matrix")
}

/// Zeros of the degree-m Chebyshev polynomial of the first kind, mapped
/// affinely from [−1, 1] to [a, b], in increasing order.
pub fn chebyshev_nodes<T: Real>(m: usize, a: T, b: T) -> Result<NodeSet<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "chebyshev_nodes needs m >= 1".into(),
        ));
    }
    if !(a < b) {
        return Err(Error::InvalidArgument(format!(
            "degenerate interval [{a}, {b}]"
        )));
    }
    let half = T::lit(0.5);
    let mid = (a + b) * half;
    let rad = (b - a) * half;
    let mf = T::from_usize_(m);
    let mut pts: Vec<Complex<T>> = (1..=m)
        .map(|k| {
            let theta = T::from_usize_(2 * k - 1) * T::PI() / (T::lit(2.0) * mf);
            // cos(π/2) is not exactly zero in floating point
            let x = if 2 * k - 1 == m {
                T::zero()
            } else {
                theta.cos()
            };
            cplx(mid + rad * x, T::zero())
        })
        .collect();
    pts.reverse();
    NodeSet::new(pts)
}

/// `z₁` repeated m times: the interpolation polynomial is the Taylor polynomial.
pub fn taylor_nodes<T: Real>(z1: Complex<T>, m: usize) -> Result<NodeSet<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("taylor_nodes needs m >= 1".into()));
    }
    NodeSet::new(vec![z1; m])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        cplx(re, im)
    }

    #[test]
    fn empty_and_non_finite_rejected() {
        assert!(NodeSet::<f64>::new(vec![]).is_err());
        assert!(NodeSet::new(vec![c(f64::INFINITY, 0.0)]).is_err());
    }

    #[test]
    fn multiplicities() {
        let n = NodeSet::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(n.multiplicity(c(1.0, 0.0)), 2);
        assert_eq!(n.max_multiplicity(), 2);
        assert_eq!(n.distinct().len(), 2);
        assert_eq!(n.grouped(), vec![c(0.0, 1.0), c(1.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn omega_scalar_examples() {
        let n = NodeSet::from_real(&[1.0, -1.0]).unwrap();
        assert_eq!(omega_at_scalar(&n, c(0.0, 0.0)), c(-1.0, 0.0));
        assert_eq!(omega_at_scalar(&n, c(-1.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn omega_matrix_single_node() {
        let z = c(0.5, 2.0);
        let a = CMatrix::identity(3).unwrap().scale(z);
        let n = NodeSet::new(vec![z]).unwrap();
        assert_eq!(omega_at_matrix(&n, &a).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn omega_matrix_on_diagonal() {
        let d = [c(0.3, 0.1), c(-2.0, 0.0), c(1.0, 1.0)];
        let a = CMatrix::from_diag(&d).unwrap();
        let n = NodeSet::new(vec![c(0.0, 0.0), c(1.0, -1.0), c(0.5, 0.5)]).unwrap();
        let om = omega_at_matrix(&n, &a).unwrap();
        for (i, z) in d.iter().enumerate() {
            assert!((om[(i, i)] - omega_at_scalar(&n, *z)).norm() < 1e-14);
        }
    }

    #[test]
    fn chebyshev_small_cases() {
        assert_eq!(
            chebyshev_nodes(1, -1.0, 1.0).unwrap().as_slice(),
            &[c(0.0, 0.0)]
        );
        let two = chebyshev_nodes(2, -1.0, 1.0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((two.as_slice()[0].re + h).abs() < 1e-15);
        assert!((two.as_slice()[1].re - h).abs() < 1e-15);
        assert!(chebyshev_nodes(3, 1.0, 1.0).is_err());
        assert!(chebyshev_nodes::<f64>(0, -1.0, 1.0).is_err());
    }

    #[test]
    fn chebyshev_mapped_interval_increasing() {
        let n = chebyshev_nodes(7, 0.0, 2.0).unwrap();
        let xs: Vec<f64> = n.iter().map(|z| z.re).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        assert!(xs[0] > 0.0 && xs[6] < 2.0);
        assert_eq!(xs[3], 1.0);
    }

    #[test]
    fn taylor_nodes_repeat() {
        let n = taylor_nodes(c(1.0, 2.0), 3).unwrap();
        assert_eq!(n.multiplicity(c(1.0, 2.0)), 3);
        assert!(taylor_nodes(c(0.0, 0.0), 0).is_err());
    }
}
