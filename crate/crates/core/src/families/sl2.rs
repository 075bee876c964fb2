//! Unbounded idempotents from the differential operators of sl(2, R) acting
//! on polynomial coefficient vectors.
//!
//! With `l` the representation parameter,
//! `A₁ = 2lx + (1 − x²)d/dx`, `A₂ = −2lx + (1 + x²)d/dx`, `A₃ = 2l − 2x·d/dx`.
//! On monomials: `A₁xᵐ = m xᵐ⁻¹ + (2l − m)xᵐ⁺¹`, `A₂xᵐ = m xᵐ⁻¹ + (m − 2l)xᵐ⁺¹`,
//! `A₃xᵐ = (2l − 2m)xᵐ`.

use serde_json::json;

use super::{c64_json, FamilyError, IdempotentFamily};
use crate::numerics::{re, CMat, C64, I};

/// The operators on `C² ⊗ Poly_{≤d+2}`. Inputs of degree at most `d` in
/// either copy are mapped exactly, including under one further composition.
#[derive(Debug, Clone)]
pub struct PolyOpPair {
    pub d: usize,
    pub lambda: C64,
    pub l: C64,
    /// `A₁, A₂, A₃` as `(d+3)×(d+3)` coefficient matrices.
    pub a: [CMat; 3],
    /// `Q₁..Q₄` as `2(d+3)×2(d+3)` matrices.
    pub q: [CMat; 4],
}

fn a_ops(l: C64, size: usize) -> [CMat; 3] {
    let mut a1 = CMat::zeros(size, size);
    let mut a2 = CMat::zeros(size, size);
    let mut a3 = CMat::zeros(size, size);
    for m in 0..size {
        let mf = m as f64;
        if m >= 1 {
            a1[(m - 1, m)] = re(mf);
            a2[(m - 1, m)] = re(mf);
        }
        if m + 1 < size {
            a1[(m + 1, m)] = 2.0 * l - mf;
            a2[(m + 1, m)] = mf - 2.0 * l;
        }
        a3[(m, m)] = 2.0 * l - 2.0 * mf;
    }
    [a1, a2, a3]
}

/// Builds the operator family at `λ ≠ 2`. `branch = ±1` selects the root
/// `l = −1/2 ± 1/(λ − 2)` of `l(l + 1) = 1/(λ − 2)² − 1/4`.
pub fn sl2_diffop_family(lambda: C64, branch: i8, d: usize) -> Result<PolyOpPair, FamilyError> {
    if (lambda - 2.0).norm() == 0.0 {
        return Err(FamilyError::BadParameter(
            "lambda must differ from 2".into(),
        ));
    }
    if !(branch == 1 || branch == -1) {
        return Err(FamilyError::BadParameter(format!(
            "branch must be ±1, got {branch}"
        )));
    }
    if d < 2 {
        return Err(FamilyError::BadParameter(format!(
            "degree bound must be at least 2, got {d}"
        )));
    }
    let l = -0.5 + f64::from(branch) / (lambda - 2.0);
    let size = d + 3;
    let a = a_ops(l, size);
    let [a1, a2, a3] = &a;
    let c = (lambda - 2.0) / 4.0;
    let shift = lambda / 4.0;
    let blk = |tl: CMat, tr: CMat, bl: CMat, br: CMat| {
        CMat::from_blocks(&[vec![Some(tl), Some(tr)], vec![Some(bl), Some(br)]])
            .scale(c)
            .add_scalar(shift)
    };
    let q = [
        blk(-a3, a1 + a2, a1 - a2, a3.clone()),
        blk(-a3, -(a1 + a2), a2 - a1, a3.clone()),
        blk(a3.clone(), a2 - a1, -(a1 + a2), -a3),
        blk(a3.clone(), a1 - a2, a1 + a2, -a3),
    ];
    Ok(PolyOpPair { d, lambda, l, a, q })
}

impl PolyOpPair {
    /// Coefficient indices of input degree `≤ d` in both copies.
    pub fn interior(&self) -> Vec<usize> {
        let size = self.d + 3;
        (0..=self.d).chain(size..=size + self.d).collect()
    }

    /// `Q_i` restricted to inputs of degree `≤ d`: a `2(d+3)×2(d+1)` map.
    pub fn restricted(&self, i: usize) -> CMat {
        let rows: Vec<usize> = (0..self.q[i].rows()).collect();
        self.q[i].select(&rows, &self.interior())
    }

    pub fn family(&self) -> Result<IdempotentFamily, FamilyError> {
        let branch = if ((self.l + 0.5) * (self.lambda - 2.0) - 1.0).norm() < 1e-9 {
            1
        } else {
            -1
        };
        Ok(IdempotentFamily::from_parts(
            "sl2diff",
            json!({ "lambda": c64_json(self.lambda), "branch": branch, "d": self.d }),
            Some(self.lambda),
            self.q.to_vec(),
        )?
        .with_interior(self.interior()))
    }

    fn input_block(&self, m: &CMat) -> CMat {
        let rows: Vec<usize> = (0..m.rows()).collect();
        let cols: Vec<usize> = (0..=self.d).collect();
        m.select(&rows, &cols)
    }

    /// Largest coefficient residual of `[A₁,A₂] + 2A₃`, `[A₂,A₃] + 2A₁`,
    /// `[A₃,A₁] − 2A₂` on inputs of degree `≤ d`.
    pub fn commutator_residuals(&self) -> [f64; 3] {
        let [a1, a2, a3] = &self.a;
        let r1 = &a1.commutator(a2) + &a3.scale_re(2.0);
        let r2 = &a2.commutator(a3) + &a1.scale_re(2.0);
        let r3 = &a3.commutator(a1) - &a2.scale_re(2.0);
        [r1, r2, r3].map(|r| self.input_block(&r).max_abs())
    }

    /// Residual of `X₁² + X₂² + X₃² = −l(l + 1)` with `X₁ = iA₁/2`,
    /// `X₂ = A₂/2`, `X₃ = −iA₃/2`.
    pub fn casimir_residual(&self) -> f64 {
        let [a1, a2, a3] = &self.a;
        let x1 = a1.scale(I * 0.5);
        let x2 = a2.scale_re(0.5);
        let x3 = a3.scale(-I * 0.5);
        let cas = &(&x1.matmul(&x1) + &x2.matmul(&x2)) + &x3.matmul(&x3);
        let target = -(self.l * (self.l + 1.0));
        self.input_block(&cas.add_scalar(-target)).max_abs()
    }
}
