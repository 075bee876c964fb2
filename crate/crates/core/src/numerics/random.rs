//! Random matrices for tests, trials and generic combinations.

use rand::Rng;
use rand_distr::StandardNormal;

use super::linalg::{from_na, to_na};
use super::{CMat, C64};

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex normal entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase fix).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let qr = to_na(&ginibre(n, n, rng)).qr();
    let q = from_na(&qr.q());
    let r = qr.r();
    CMat::from_fn(n, n, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        q[(i, j)] * phase
    })
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = ginibre(n, n, rng);
    (&g + &g.adjoint()).scale_re(0.5)
}

/// Invertible matrix `U·diag(s)·V*` whose singular values are spread
/// geometrically over `[1, cond]`.
pub fn random_with_condition<R: Rng + ?Sized>(n: usize, cond: f64, rng: &mut R) -> CMat {
    let u = random_unitary(n, rng);
    let v = random_unitary(n, rng);
    let s: Vec<f64> = (0..n)
        .map(|k| {
            if n == 1 {
                1.0
            } else {
                cond.powf(k as f64 / (n - 1) as f64)
            }
        })
        .collect();
    let us = CMat::from_fn(n, n, |i, j| u[(i, j)] * s[j]);
    us.matmul(&v.adjoint())
}

/// Generic (non-Hermitian) idempotent of the given rank: `T·P·T⁻¹`.
pub fn random_idempotent<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> CMat {
    let t = random_with_condition(n, 10.0, rng);
    let t_inv = super::inverse(&t).expect("well-conditioned by construction");
    let mut p = CMat::zeros(n, n);
    for i in 0..rank.min(n) {
        p[(i, i)] = C64::new(1.0, 0.0);
    }
    t.matmul(&p).matmul(&t_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(5, &mut rng);
        assert!(u.adjoint().matmul(&u).max_diff(&CMat::identity(5)) < 1e-13);
    }

    #[test]
    fn conditioned_matrix_hits_its_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_with_condition(4, 1e3, &mut rng);
        let sv = crate::numerics::singular_values(&t);
        assert!((sv[0] / sv[3] - 1e3).abs() < 1e-6);
    }

    #[test]
    fn idempotent_squares_to_itself() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_idempotent(4, 2, &mut rng);
        assert!(p.matmul(&p).max_diff(&p) < 1e-10);
        assert!((p.trace().re - 2.0).abs() < 1e-10);
    }
}
