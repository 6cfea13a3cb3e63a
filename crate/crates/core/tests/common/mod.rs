#![allow(dead_code)]

use interpcert::experiment::{random_trial_matrix, Rect, TrialMatrices};
use interpcert::linalg::{spectral_norm, CMatrix};
use interpcert::{Complex, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_in_disc(rng: &mut ChaCha8Rng) -> C64 {
    loop {
        let z = random_complex(rng);
        if z.norm() <= 1.0 {
            return z;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> CMatrix<f64> {
    CMatrix::from_fn(d, d, |_, _| random_complex(rng))
}

/// Product of three Householder reflectors.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMatrix<f64> {
    let mut q = CMatrix::identity(d).unwrap();
    for _ in 0..3 {
        let v: Vec<C64> = (0..d).map(|_| random_complex(rng)).collect();
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let h = CMatrix::from_fn(d, d, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            c(delta, 0.0) - v[i] * v[j].conj() * (2.0 / vv)
        });
        q = q.matmul(&h).unwrap();
    }
    q
}

/// `Q diag(λ) Qᴴ` with random unitary Q.
pub fn random_normal(rng: &mut ChaCha8Rng, eigs: &[C64]) -> CMatrix<f64> {
    let q = random_unitary(rng, eigs.len());
    q.matmul(&CMatrix::from_diag(eigs).unwrap())
        .unwrap()
        .matmul(&q.adjoint())
        .unwrap()
}

pub fn kappa(m: &TrialMatrices) -> f64 {
    spectral_norm(&m.t).unwrap() * spectral_norm(&m.t_inv).unwrap()
}

/// `T D T⁻¹` with `κ(T) ≤ kappa_max`, redrawing as needed.
pub fn diagonalizable(
    rng: &mut ChaCha8Rng,
    d: usize,
    rect: &Rect,
    kappa_max: f64,
) -> (TrialMatrices, f64) {
    loop {
        let m = random_trial_matrix(d, rect, rng).unwrap();
        let k = kappa(&m);
        if k <= kappa_max {
            return (m, k);
        }
    }
}

/// Largest distance in a greedy nearest-neighbour pairing of two multisets.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
