use idemsum_core::equivalence::{hom_space, unitarize};
use idemsum_core::families::{q42_pair_family, su2_family, IdempotentFamily};
use idemsum_core::numerics::random::{random_idempotent, random_unitary, random_with_condition};
use idemsum_core::numerics::{inverse, CMat};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pair(n: usize, rng: &mut ChaCha8Rng) -> IdempotentFamily {
    let a = random_idempotent(n, rng.random_range(0..=n), rng);
    let b = random_idempotent(n, rng.random_range(0..=n), rng);
    q42_pair_family(&a, &b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hom_dim_ignores_unitary_conjugation(seed in any::<u64>(), n in 1usize..5, m in 1usize..5, star in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = pair(n, &mut rng);
        let b = if rng.random_bool(0.5) { a.direct_sum(&pair(m, &mut rng)).unwrap() } else { pair(m, &mut rng) };
        let d = hom_space(&a, &b, star).unwrap().dim;
        let ua = a.unitary_conjugate(&random_unitary(a.dim(), &mut rng));
        let ub = b.unitary_conjugate(&random_unitary(b.dim(), &mut rng));
        prop_assert_eq!(hom_space(&ua, &ub, star).unwrap().dim, d);
    }

    #[test]
    fn star_hom_dim_is_symmetric(seed in any::<u64>(), n in 1usize..5, m in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = pair(n, &mut rng);
        let b = a.direct_sum(&pair(m, &mut rng)).unwrap();
        let ab = hom_space(&a, &b, true).unwrap().dim;
        let ba = hom_space(&b, &a, true).unwrap().dim;
        prop_assert_eq!(ab, ba);
        prop_assert!(ab >= 1);
    }

    #[test]
    fn unitarize_is_idempotent(seed in any::<u64>(), k in 2u32..5, plus in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fam = su2_family(k, if plus { 1 } else { -1 }).unwrap();
        let t = random_with_condition(fam.dim(), 30.0, &mut rng);
        let skewed = fam.similar(&t, &inverse(&t).unwrap());
        let once = unitarize(&skewed).unwrap();
        prop_assert!(once.raw_deviation < 1e-8);
        let twice = unitarize(&once.star_fam).unwrap();
        let n = twice.g.rows();
        let g = twice.g.scale_re(n as f64 / twice.g.trace().re);
        prop_assert!(g.max_diff(&CMat::identity(n)) < 1e-8, "G far from I: {:e}", g.max_diff(&CMat::identity(n)));
    }
}
