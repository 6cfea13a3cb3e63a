mod common;

use common::*;
use interpcert::experiment::Rect;
use interpcert::linalg::{
    condition_number_2, eigenvalues, inverse, matrix_exp, matrix_exp_info, schur, solve,
    spectral_norm, split_schur, CMatrix,
};
use interpcert::Tolerances;
use proptest::prelude::*;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn schur_residual_and_unitarity(d in 1usize..=32, seed in any::<u64>()) {
        let a = random_matrix(&mut rng(seed), d);
        let s = schur(&a).unwrap();
        prop_assert!(s.t.is_upper_triangular());
        let (unit, recon) = s.residuals(&a).unwrap();
        let df = d as f64;
        prop_assert!(unit <= 1e-10 * df, "unitarity {unit:e}");
        prop_assert!(recon <= 1e-10 * df * spectral_norm(&a).unwrap(), "reconstruction {recon:e}");
        prop_assert!(s.verify(&a, &Tolerances::default()).unwrap());
    }

    #[test]
    fn eigenvalues_invariant_under_similarity(d in 1usize..=16, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, d);
        let p = CMatrix::identity(d).unwrap().add(&random_matrix(&mut r, d).scale_real(0.1 / d as f64)).unwrap();
        let b = p.matmul(&a).unwrap().matmul(&inverse(&p).unwrap()).unwrap();
        let gap = multiset_distance(&eigenvalues(&a).unwrap(), &eigenvalues(&b).unwrap());
        prop_assert!(gap <= 1e-8, "{gap:e}");
    }

    #[test]
    fn exp_group_property(d in 1usize..=16, norm in 0.0f64..5.0, seed in any::<u64>()) {
        let a0 = random_matrix(&mut rng(seed), d);
        let a = a0.scale_real(norm / spectral_norm(&a0).unwrap());
        let prod = matrix_exp(&a).unwrap().matmul(&matrix_exp(&a.scale_real(-1.0)).unwrap()).unwrap();
        let err = prod.sub(&CMatrix::identity(d).unwrap()).unwrap().frobenius_norm();
        prop_assert!(err <= 1e-10, "{err:e}");
    }

    #[test]
    fn exp_matches_diagonalization(d in 2usize..=16, seed in any::<u64>()) {
        let (m, kappa) = diagonalizable(&mut rng(seed), d, &Rect::default(), 1e3);
        let expd: Vec<_> = m.d.iter().map(|z| z.exp()).collect();
        let sharp = m.t.matmul(&CMatrix::from_diag(&expd).unwrap()).unwrap().matmul(&m.t_inv).unwrap();
        let err = matrix_exp(&m.a).unwrap().sub(&sharp).unwrap().frobenius_norm();
        let scale = expd.iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-8 * kappa * scale, "{err:e} vs kappa {kappa:e}");
    }

    #[test]
    fn norm_of_adjoint(d in 1usize..=16, cols in 1usize..=16, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = CMatrix::from_fn(d, cols, |_, _| random_complex(&mut r));
        let n = spectral_norm(&a).unwrap();
        let nh = spectral_norm(&a.adjoint()).unwrap();
        prop_assert!((n - nh).abs() <= 1e-10 * n);
        // ‖A‖_F / √rank ≤ ‖A‖₂ ≤ ‖A‖_F
        let f = a.frobenius_norm();
        prop_assert!(n <= f * (1.0 + 1e-12));
        prop_assert!(n * (d.min(cols) as f64).sqrt() >= f * (1.0 - 1e-12));
    }

    #[test]
    fn solve_inverts(d in 1usize..=16, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = CMatrix::identity(d).unwrap().scale_real(3.0).add(&random_matrix(&mut r, d)).unwrap();
        let b = random_matrix(&mut r, d);
        let x = solve(&a, &b).unwrap();
        let res = a.matmul(&x).unwrap().sub(&b).unwrap().frobenius_norm();
        prop_assert!(res <= 1e-12 * b.frobenius_norm().max(1.0) * d as f64);
    }
}

#[test]
fn split_of_normal_matrix_has_small_nilpotent_part() {
    let mut r = rng(11);
    let eigs: Vec<_> = (0..10).map(|_| random_complex(&mut r)).collect();
    let a = random_normal(&mut r, &eigs);
    let (dg, n) = split_schur(&schur(&a).unwrap());
    assert!(n.frobenius_norm() <= 1e-12);
    let gap = multiset_distance(&dg.diagonal(), &eigs);
    assert!(gap <= 1e-12, "{gap:e}");
}

#[test]
fn squaring_count_grows_with_norm() {
    let a = CMatrix::<f64>::identity(3).unwrap();
    let (_, small) = matrix_exp_info(&a.scale_real(0.01)).unwrap();
    let (_, big) = matrix_exp_info(&a.scale_real(100.0)).unwrap();
    assert_eq!(small.squarings, 0);
    assert!(big.squarings > 0);
}

#[test]
fn condition_number_of_unitary_is_one() {
    let q = random_unitary(&mut rng(2), 12);
    assert!((condition_number_2(&q).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn single_precision_schur() {
    let a = random_matrix(&mut rng(4), 8).cast::<f32>();
    let s = schur(&a).unwrap();
    let (unit, recon) = s.residuals(&a).unwrap();
    assert!(
        unit < 1e-4 && recon < 1e-4 * a.frobenius_norm(),
        "{unit:e} {recon:e}"
    );
}
