use idemsum_core::families::{
    cuntz_five_family, cuntz_isometries, diag_phi_psi_family, functional_apply, orbit_rep_a40,
    phi_block_norms, q42_pair_family, rep_q1_two_dim, sl2_diffop_family, su2_family, FunctionalGen,
    OrbitCase,
};
use idemsum_core::numerics::random::{complex_normal, random_idempotent};
use idemsum_core::numerics::{hermitian_deviation, re, CMat, C64};
use idemsum_core::orbits::{orbit_enumerate, rat};
use idemsum_core::verify::relation_report;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn q1_family_relations(y in 1e-3f64..50.0) {
        let fam = rep_q1_two_dim(y).unwrap();
        prop_assert!(relation_report(&fam, 1e-10).pass);
    }

    #[test]
    fn pair_families_from_random_idempotents(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_idempotent(n, rng.random_range(0..=n), &mut rng);
        let b = random_idempotent(n, rng.random_range(0..=n), &mut rng);
        let fam = q42_pair_family(&a, &b).unwrap();
        prop_assert_eq!(fam.lambda, Some(re(2.0)));
        prop_assert!(relation_report(&fam, 1e-9).pass);
    }

    #[test]
    fn diag_phi_psi_any_lambda(re_l in -4.0f64..6.0, im_l in -3.0f64..3.0) {
        prop_assume!((C64::new(re_l, im_l) - re(2.0)).norm() > 1e-3);
        let fam = diag_phi_psi_family(C64::new(re_l, im_l), 12).unwrap();
        prop_assert!(relation_report(&fam, 1e-10).pass);
    }

    #[test]
    fn cuntz_any_lambda(re_l in -5.0f64..5.0, im_l in -5.0f64..5.0) {
        let fam = cuntz_five_family(C64::new(re_l, im_l), 64).unwrap();
        prop_assert!(relation_report(&fam, 1e-10).pass);
    }

    #[test]
    fn sl2_both_branches(re_l in -3.0f64..7.0, im_l in -2.0f64..2.0, d in 2usize..7) {
        let lambda = C64::new(re_l, im_l);
        prop_assume!((lambda - re(2.0)).norm() > 0.1);
        for branch in [1, -1] {
            let op = sl2_diffop_family(lambda, branch, d).unwrap();
            prop_assert!(relation_report(&op.family().unwrap(), 1e-9).pass);
        }
    }

    #[test]
    fn functional_relations_pointwise(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<C64> = (0..4).map(|_| complex_normal(&mut rng)).collect();
        let f = move |z: C64| coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c);
        let z = complex_normal(&mut rng);
        let lambda = C64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let mut total = C64::new(0.0, 0.0);
        for g in FunctionalGen::ALL {
            let once = functional_apply(&[g], &f, z, lambda).unwrap();
            let twice = functional_apply(&[g, g], &f, z, lambda).unwrap();
            prop_assert!((twice - once).norm() <= 1e-9 * (1.0 + once.norm()));
            total += once;
        }
        let want = lambda * f(z);
        prop_assert!((total - want).norm() <= 1e-9 * (1.0 + want.norm()));
    }
}

#[test]
fn su2_projections_are_hermitian_with_fixed_trace() {
    for k in 1..=8 {
        for sign in [1, -1] {
            let fam = su2_family(k, sign).unwrap();
            let lambda = fam.lambda.unwrap().re;
            let dim = fam.dim() as f64;
            for q in &fam.q {
                assert!(hermitian_deviation(q) < 1e-12);
                assert!((q.trace() - re(lambda * dim / 4.0)).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn phi_norms_grow_without_bound() {
    for lambda in [re(0.0), re(1.5), C64::new(0.7, 0.3), re(-3.0)] {
        let norms = phi_block_norms(lambda, 30);
        for w in norms[2..].windows(2) {
            assert!(w[1] > w[0]);
        }
    }
}

#[test]
fn cuntz_isometry_relations_on_interior() {
    let n = 64;
    let (s1, s2) = cuntz_isometries(n);
    let i = CMat::identity(n);
    // Inputs below n/2 map inside the truncation.
    let cols: Vec<usize> = (0..n / 2).collect();
    let rows: Vec<usize> = (0..n).collect();
    let on = |m: &CMat| m.select(&rows, &cols);
    assert_eq!(on(&s1.adjoint().matmul(&s1)), on(&i));
    assert_eq!(on(&s2.adjoint().matmul(&s2)), on(&i));
    assert_eq!(on(&s1.adjoint().matmul(&s2)).max_abs(), 0.0);
    let sum = &s1.matmul(&s1.adjoint()) + &s2.matmul(&s2.adjoint());
    assert_eq!(sum, i);
}

#[test]
fn orbit_rep_spectrum_is_the_orbit() {
    let depth = 8;
    let rep = orbit_rep_a40(OrbitCase::I(rat(1, 4)), depth).unwrap();
    let mut diag: Vec<f64> = (0..rep.quad.dim()).map(|j| rep.quad.p[(j, j)].re).collect();
    let p_off = (0..rep.quad.dim())
        .flat_map(|i| (0..rep.quad.dim()).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| rep.quad.p[(i, j)].norm())
        .fold(0.0, f64::max);
    assert_eq!(p_off, 0.0);
    let mut want: Vec<f64> = orbit_enumerate(&rat(1, 4), depth)
        .unwrap()
        .values()
        .iter()
        .map(idemsum_core::orbits::to_f64)
        .collect();
    diag.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    assert_eq!(diag.len(), want.len());
    for (a, b) in diag.iter().zip(&want) {
        assert!((a - b).abs() < 1e-12);
    }
}
