//! Finite-dimensional families from spin representations of su(2).

use serde_json::json;

use super::{c64_json, FamilyError, IdempotentFamily};
use crate::numerics::{re, CMat, C64, I};
use crate::orbits::{format_rational, lambda4bd_member, to_f64, Lambda4Member, Rational};

/// Hermitian spin matrices `J₁, J₂, J₃` of dimension `k` (spin `j = (k−1)/2`),
/// with `J₃ = diag(j, j−1, …, −j)`.
pub fn spin_matrices(k: usize) -> [CMat; 3] {
    let j = (k as f64 - 1.0) / 2.0;
    let ms: Vec<f64> = (0..k).map(|i| j - i as f64).collect();
    let mut jp = CMat::zeros(k, k);
    for i in 1..k {
        let m = ms[i];
        jp[(i - 1, i)] = re((j * (j + 1.0) - m * (m + 1.0)).sqrt());
    }
    let jm = jp.adjoint();
    let j1 = (&jp + &jm).scale_re(0.5);
    let j2 = (&jp - &jm).scale(C64::new(0.0, -0.5));
    let j3 = CMat::diag_real(&ms);
    [j1, j2, j3]
}

fn sigmas() -> [CMat; 3] {
    let z = re(0.0);
    [
        CMat::from_rows(&[vec![z, I], vec![I, z]]),
        CMat::from_rows(&[vec![z, re(1.0)], vec![re(-1.0), z]]),
        CMat::from_rows(&[vec![-I, z], vec![z, I]]),
    ]
}

/// `x_i = X_i ⊗ σ_i` with `X_i = −i·J_i`, so that `[X₁, X₂] = X₃` cyclically.
pub fn su2_x_generators(k: usize) -> [CMat; 3] {
    let js = spin_matrices(k);
    let s = sigmas();
    [0, 1, 2].map(|i| js[i].scale(-I).kron(&s[i]))
}

/// The `2k`-dimensional family with `λ = 2 + sign·2/k`.
pub fn su2_family(k: u32, sign: i8) -> Result<IdempotentFamily, FamilyError> {
    if k == 0 || !(sign == 1 || sign == -1) {
        return Err(FamilyError::BadParameter(format!(
            "need k >= 1 and sign = ±1, got k = {k}, sign = {sign}"
        )));
    }
    let lam = 2.0 + f64::from(sign) * 2.0 / f64::from(k);
    let x = su2_x_generators(k as usize);
    let dim = 2 * k as usize;

    let want = 1.0 / (lam - 2.0).powi(2) - 0.25;
    let cas = x
        .iter()
        .fold(CMat::zeros(dim, dim), |acc, xi| &acc + &xi.matmul(xi));
    let cas_res = cas.max_diff(&CMat::scalar(dim, re(want))) / want.abs().max(1.0);
    if cas_res > 1e-10 {
        return Err(FamilyError::CasimirMismatch(cas_res));
    }

    let c = re((lam - 2.0) / 2.0);
    let shift = re(lam / 4.0);
    let signs: [[f64; 3]; 4] = [
        [-1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0],
        [-1.0, -1.0, -1.0],
    ];
    let q = signs
        .iter()
        .map(|sg| {
            let comb = &(&x[0].scale_re(sg[0]) + &x[1].scale_re(sg[1])) + &x[2].scale_re(sg[2]);
            comb.scale(c).add_scalar(shift)
        })
        .collect();
    IdempotentFamily::exact(
        "su2",
        json!({ "k": k, "sign": sign, "lambda": c64_json(re(lam)) }),
        Some(re(lam)),
        q,
    )
}

/// Builds the su(2) family at `λ` when `λ = 2 ± 2/k` exactly.
pub fn su2_family_at(lambda: &Rational) -> Result<IdempotentFamily, FamilyError> {
    match lambda4bd_member(lambda)? {
        Some(Lambda4Member::Point { k, sign }) => {
            let k = u32::try_from(k).map_err(|_| {
                FamilyError::BadParameter(format!("k = {k} is too large to realize"))
            })?;
            su2_family(k, sign)
        }
        Some(Lambda4Member::Center) => Err(FamilyError::BadParameter(
            "lambda = 2 has no su(2) realization; use a pair family".into(),
        )),
        None => Err(FamilyError::NotInLambda4bd {
            lambda: format_rational(lambda),
            nearest: crate::orbits::nearest_members(to_f64(lambda), 1000),
        }),
    }
}
