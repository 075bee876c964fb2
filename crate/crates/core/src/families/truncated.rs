//! Truncations of unbounded or infinite-dimensional constructions: the
//! block-diagonal `φ/ψ` family and the five idempotents over Cuntz isometries.

use serde_json::json;

use super::{c64_json, FamilyError, IdempotentFamily};
use crate::numerics::{op_norm, re, CMat, C64};

/// `φ(t) = [[t, t − t²], [1, 1 − t]]`.
pub fn phi(t: C64) -> CMat {
    CMat::from_rows(&[vec![t, t - t * t], vec![re(1.0), re(1.0) - t]])
}

/// `ψ(t) = [[t, −(t − t²)], [−1, 1 − t]]`.
pub fn psi(t: C64) -> CMat {
    CMat::from_rows(&[vec![t, -(t - t * t)], vec![re(-1.0), re(1.0) - t]])
}

fn x_j(lambda: C64, j: usize) -> C64 {
    (lambda / 2.0 - 1.0) * j as f64
}

/// Block-diagonal family
/// `Q₁ = diag(φ(x₁), φ(x₃), …)`, `Q₂ = diag(ψ(x₁), ψ(x₃), …)`,
/// `Q₃ = diag(1, φ(x₂), φ(x₄), …)`, `Q₄ = diag(1, ψ(x₂), ψ(x₄), …)` with
/// `x_j = j(λ/2 − 1)`, cut to dimension `2·blocks − 1`. The last index holds
/// an incomplete block of `Q₁`, `Q₂` and is left out of the interior.
pub fn diag_phi_psi_family(lambda: C64, blocks: usize) -> Result<IdempotentFamily, FamilyError> {
    if blocks < 2 {
        return Err(FamilyError::BadParameter(format!(
            "need at least 2 blocks, got {blocks}"
        )));
    }
    let dim = 2 * blocks - 1;
    let mut q = vec![CMat::zeros(dim, dim); 4];
    // Odd-indexed parameters on the even offsets.
    for b in 0..blocks {
        let t = x_j(lambda, 2 * b + 1);
        let off = 2 * b;
        if off + 1 < dim {
            q[0].set_block(off, off, &phi(t));
            q[1].set_block(off, off, &psi(t));
        } else {
            q[0][(off, off)] = t;
            q[1][(off, off)] = t;
        }
    }
    q[2][(0, 0)] = re(1.0);
    q[3][(0, 0)] = re(1.0);
    for b in 1..blocks {
        let t = x_j(lambda, 2 * b);
        let off = 2 * b - 1;
        q[2].set_block(off, off, &phi(t));
        q[3].set_block(off, off, &psi(t));
    }
    let interior = (0..dim - 1).collect();
    Ok(IdempotentFamily::from_parts(
        "diagphipsi",
        json!({ "lambda": c64_json(lambda), "blocks": blocks }),
        Some(lambda),
        q,
    )?
    .with_interior(interior))
}

/// `‖φ(x_j)‖` for `j = 1..=count`.
pub fn phi_block_norms(lambda: C64, count: usize) -> Vec<f64> {
    (1..=count).map(|j| op_norm(&phi(x_j(lambda, j)))).collect()
}

/// Truncated shifts `S₁e_k = e_{2k}`, `S₂e_k = e_{2k+1}` on `C^n`; images
/// falling outside the truncation are dropped.
pub fn cuntz_isometries(n: usize) -> (CMat, CMat) {
    let mut s1 = CMat::zeros(n, n);
    let mut s2 = CMat::zeros(n, n);
    for k in 0..n {
        if 2 * k < n {
            s1[(2 * k, k)] = re(1.0);
        }
        if 2 * k + 1 < n {
            s2[(2 * k + 1, k)] = re(1.0);
        }
    }
    (s1, s2)
}

/// Five idempotents on three copies of `C^n` summing to `λ` on the interior,
/// built from the Cuntz isometries. Any complex `λ` is accepted.
pub fn cuntz_five_family(lambda: C64, n: usize) -> Result<IdempotentFamily, FamilyError> {
    if n < 8 || n % 2 != 0 {
        return Err(FamilyError::BadParameter(format!(
            "truncation size must be even and at least 8, got {n}"
        )));
    }
    let (a, b, c, d) = cuntz_coefficients(lambda);
    let (s1, s2) = cuntz_isometries(n);
    let (s1a, s2a) = (s1.adjoint(), s2.adjoint());
    let id = CMat::identity(n);
    let s = |z: C64| Some(id.scale(z));
    let m = |x: &CMat, z: C64| Some(x.scale(z));
    let z0 = || None::<CMat>;

    let q1 = CMat::from_blocks(&[
        vec![s(a), s(3.0 * a), s(b)],
        vec![s(a), s(3.0 * a), s(b)],
        vec![s(a), s(3.0 * a), s(b)],
    ]);
    let q2 = CMat::from_blocks(&[
        vec![s(a), s(-3.0 * a), s(b)],
        vec![s(-a), s(3.0 * a), s(-b)],
        vec![s(a), s(-3.0 * a), s(b)],
    ]);
    let zero = Some(CMat::zeros(n, n));
    let q3 = CMat::from_blocks(&[
        vec![s(4.0 * a), zero.clone(), s(-2.0 * b)],
        vec![zero.clone(), zero.clone(), zero.clone()],
        vec![s(-2.0 * a), zero.clone(), s(b)],
    ]);
    let two_dc = 2.0 * d * c;
    let q4 = CMat::from_blocks(&[
        vec![s(2.0 * c), z0(), m(&s1a, two_dc)],
        vec![z0(), s(2.0 * c), m(&s2a, two_dc)],
        vec![Some(s1.clone()), Some(s2.clone()), s(d)],
    ]);
    let q5 = CMat::from_blocks(&[
        vec![s(2.0 * c), z0(), m(&s1a, -two_dc)],
        vec![z0(), s(2.0 * c), m(&s2a, -two_dc)],
        vec![Some(-&s1), Some(-&s2), s(d)],
    ]);
    let half = n / 2;
    let interior = (0..3)
        .flat_map(|copy| (0..half).map(move |k| copy * n + k))
        .collect();
    Ok(IdempotentFamily::from_parts(
        "cuntz5",
        json!({ "lambda": c64_json(lambda), "N": n }),
        Some(lambda),
        vec![q1, q2, q3, q4, q5],
    )?
    .with_interior(interior))
}

/// `(a, b, c, d) = ((5−2λ)/6, (4λ−7)/3, (3λ−5)/4, (7−3λ)/2)`.
pub(crate) fn cuntz_coefficients(lambda: C64) -> (C64, C64, C64, C64) {
    (
        (5.0 - 2.0 * lambda) / 6.0,
        (4.0 * lambda - 7.0) / 3.0,
        (3.0 * lambda - 5.0) / 4.0,
        (7.0 - 3.0 * lambda) / 2.0,
    )
}
