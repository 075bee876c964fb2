//! Small exact representations: one idempotent, three projections summing
//! to 3/2, the star-orthogonal pairs, and pair families at λ = 2.

use serde_json::json;

use super::{FamilyError, GenRef, IdempotentFamily};
use crate::numerics::{re, CMat};

/// The two-dimensional irreducible idempotent `[[1, y], [0, 0]]`, `y > 0`.
pub fn rep_q1_two_dim(y: f64) -> Result<IdempotentFamily, FamilyError> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(FamilyError::BadParameter(format!(
            "y must be positive and finite, got {y}"
        )));
    }
    let q = CMat::from_real_rows(&[&[1.0, y], &[0.0, 0.0]]);
    IdempotentFamily::exact("q1", json!({ "y": y }), None, vec![q])
}

/// The unique irreducible triple of projections with sum `3/2`.
pub fn rep_p3_32() -> Result<IdempotentFamily, FamilyError> {
    let h = 3f64.sqrt() / 4.0;
    let p1 = CMat::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
    let p2 = CMat::from_real_rows(&[&[0.25, h], &[h, 0.75]]);
    let p3 = CMat::from_real_rows(&[&[0.25, -h], &[-h, 0.75]]);
    IdempotentFamily::exact("p332", json!({}), Some(re(1.5)), vec![p1, p2, p3])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    First,
    Second,
}

/// Products that vanish for a star-orthogonal pair: `q₁q₂ = q₂q₁ = 0` and
/// `q₁q₂* = q₂*q₁ = 0`.
pub(crate) fn star_orthogonal_products() -> Vec<(GenRef, GenRef)> {
    vec![
        (GenRef::plain(0), GenRef::plain(1)),
        (GenRef::plain(1), GenRef::plain(0)),
        (GenRef::plain(0), GenRef::star(1)),
        (GenRef::star(1), GenRef::plain(0)),
    ]
}

/// Two-dimensional star-orthogonal pair: one generator is `[[1, α], [0, 0]]`,
/// the other is zero.
pub fn rep_q2perp(alpha: f64, which: Which) -> Result<IdempotentFamily, FamilyError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(FamilyError::BadParameter(format!(
            "alpha must be positive and finite, got {alpha}"
        )));
    }
    let e = CMat::from_real_rows(&[&[1.0, alpha], &[0.0, 0.0]]);
    let z = CMat::zeros(2, 2);
    let (q, tag) = match which {
        Which::First => (vec![e, z], "first"),
        Which::Second => (vec![z, e], "second"),
    };
    Ok(
        IdempotentFamily::exact("q2perp", json!({ "alpha": alpha, "which": tag }), None, q)?
            .with_zero_products(star_orthogonal_products()),
    )
}

/// One-dimensional star-orthogonal pair `(ε₁, ε₂)` with `ε₁ε₂ = 0`.
pub fn rep_q21_one_dim(eps1: u8, eps2: u8) -> Result<IdempotentFamily, FamilyError> {
    if eps1 > 1 || eps2 > 1 || eps1 * eps2 != 0 {
        return Err(FamilyError::BadParameter(format!(
            "need eps in {{0,1}} with eps1*eps2 = 0, got ({eps1}, {eps2})"
        )));
    }
    let one = |e: u8| CMat::scalar(1, re(f64::from(e)));
    Ok(IdempotentFamily::exact(
        "q21",
        json!({ "eps1": eps1, "eps2": eps2 }),
        None,
        vec![one(eps1), one(eps2)],
    )?
    .with_zero_products(star_orthogonal_products()))
}

/// `{A, I − A, B, I − B}` for idempotents `A`, `B`: a family with `λ = 2`.
pub fn q42_pair_family(a: &CMat, b: &CMat) -> Result<IdempotentFamily, FamilyError> {
    if a.rows() != b.rows() || !a.is_square() || !b.is_square() {
        return Err(FamilyError::DimensionMismatch(
            "pair family needs two square matrices of one size".into(),
        ));
    }
    let i = CMat::identity(a.rows());
    IdempotentFamily::exact(
        "q42pair",
        json!({ "dim": a.rows() }),
        Some(re(2.0)),
        vec![a.clone(), &i - a, b.clone(), &i - b],
    )
}
