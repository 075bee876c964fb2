use idemsum_core::numerics::random::{ginibre, random_hermitian, random_unitary};
use idemsum_core::numerics::text::{format_matrix, parse_matrix};
use idemsum_core::numerics::{hermitian_psd_sqrt, null_space, op_norm, rank, CMat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>(), r in 1usize..7, c in 1usize..7) {
        let m = ginibre(r, c, &mut rng(seed));
        prop_assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn op_norm_of_adjoint(seed in any::<u64>(), r in 1usize..7, c in 1usize..7) {
        let m = ginibre(r, c, &mut rng(seed));
        prop_assert!((op_norm(&m.adjoint()) - op_norm(&m)).abs() < 1e-12 * (1.0 + op_norm(&m)));
    }

    #[test]
    fn psd_sqrt_squares_back(seed in any::<u64>(), n in 1usize..8, rank_def in 0usize..3) {
        let mut g = rng(seed);
        let k = n.saturating_sub(rank_def).max(1);
        let b = ginibre(n, k, &mut g);
        let m = b.matmul(&b.adjoint());
        let s = hermitian_psd_sqrt(&m).unwrap();
        let err = op_norm(&(&s.matmul(&s) - &m));
        prop_assert!(err < 1e-9 * (1.0 + op_norm(&m)), "err {err:e}");
    }

    #[test]
    fn rank_is_unitarily_invariant(seed in any::<u64>(), k in 0usize..7) {
        let mut g = rng(seed);
        let m = if k == 0 { CMat::zeros(6, 6) } else { ginibre(6, k, &mut g).matmul(&ginibre(k, 6, &mut g)) };
        let (u, v) = (random_unitary(6, &mut g), random_unitary(6, &mut g));
        let r = rank(&m, 1e-10);
        prop_assert_eq!(r, k);
        prop_assert_eq!(rank(&u.matmul(&m), 1e-10), r);
        prop_assert_eq!(rank(&m.matmul(&v), 1e-10), r);
    }

    #[test]
    fn null_space_is_annihilated(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..8) {
        let m = ginibre(rows, cols, &mut rng(seed));
        let ns = null_space(&m, 1e-10);
        prop_assert_eq!(ns.len(), cols.saturating_sub(rows));
        for v in &ns {
            let mv = m.mul_vec(v);
            prop_assert!(mv.iter().all(|z| z.norm() < 1e-10));
        }
    }

    #[test]
    fn text_round_trip_is_exact(seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let m = ginibre(r, c, &mut rng(seed));
        let back = parse_matrix(&format_matrix(&m)).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn hermitian_sampler_is_hermitian(seed in any::<u64>(), n in 1usize..7) {
        let h = random_hermitian(n, &mut rng(seed));
        prop_assert_eq!(h.adjoint(), h);
    }
}
