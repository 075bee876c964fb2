//! Explicit idempotent families, exact or truncated.
//!
//! Every constructor returns an [`IdempotentFamily`]: `n` square matrices
//! `q_i` with a target `λ` such that `q_i² = q_i` and `Σ q_i = λ I`. Truncated
//! constructions carry an `interior`, the basis indices on which the
//! relations hold exactly.

mod basic;
mod functional;
mod manifest;
mod orbit_rep;
mod sl2;
mod su2;
mod truncated;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::numerics::{CMat, NumericsError, C64};
use crate::orbits::OrbitError;

pub use basic::{q42_pair_family, rep_p3_32, rep_q1_two_dim, rep_q21_one_dim, rep_q2perp, Which};
pub use functional::{functional_apply, FunctionalGen};
pub use manifest::{load_family, save_family, save_family_with, Manifest};
pub use orbit_rep::{orbit_rep_a40, OrbitCase, OrbitRep};
pub use sl2::{sl2_diffop_family, PolyOpPair};
pub use su2::{spin_matrices, su2_family, su2_family_at, su2_x_generators};
pub use truncated::{
    cuntz_five_family, cuntz_isometries, diag_phi_psi_family, phi, phi_block_norms, psi,
};

/// Residual budget checked when an untruncated family is built.
pub const CONSTRUCTION_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("Casimir identity fails (residual {0:e})")]
    CasimirMismatch(f64),
    #[error("{lambda} is not of the form 2 ± 2/k; nearest admissible values {nearest:?}")]
    NotInLambda4bd { lambda: String, nearest: Vec<f64> },
    #[error("generator shapes disagree: {0}")]
    DimensionMismatch(String),
    #[error("constructed family violates {relation} (residual {residual:e})")]
    Construction { relation: String, residual: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed manifest: {0}")]
    Manifest(String),
}

/// A generator `q_i` or its adjoint, used to name vanishing products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenRef {
    pub index: usize,
    pub star: bool,
}

impl GenRef {
    pub fn plain(index: usize) -> Self {
        GenRef { index, star: false }
    }

    pub fn star(index: usize) -> Self {
        GenRef { index, star: true }
    }

    pub fn label(&self) -> String {
        format!("q{}{}", self.index + 1, if self.star { "*" } else { "" })
    }
}

#[derive(Debug, Clone)]
pub struct IdempotentFamily {
    /// Target of `Σ q_i = λ I`; `None` for algebras without a sum relation.
    pub lambda: Option<C64>,
    pub q: Vec<CMat>,
    pub q_star: Vec<CMat>,
    pub kind: String,
    /// Constructor parameters, recorded for reports and manifests.
    pub params: Value,
    /// Basis indices where relations are claimed exactly; `None` means all.
    pub interior: Option<Vec<usize>>,
    /// Products `a·b` that must vanish in addition to the defining relations.
    pub zero_products: Vec<(GenRef, GenRef)>,
}

impl IdempotentFamily {
    /// Wraps generators without checking relations. Shapes are validated.
    pub fn from_parts(
        kind: impl Into<String>,
        params: Value,
        lambda: Option<C64>,
        q: Vec<CMat>,
    ) -> Result<Self, FamilyError> {
        let dim = q.first().map(CMat::rows).ok_or_else(|| {
            FamilyError::DimensionMismatch("a family needs at least one generator".into())
        })?;
        for (i, m) in q.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(FamilyError::DimensionMismatch(format!(
                    "q{} is {}x{}, expected {dim}x{dim}",
                    i + 1,
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_finite() {
                return Err(FamilyError::BadParameter(format!(
                    "q{} has non-finite entries",
                    i + 1
                )));
            }
        }
        let q_star = q.iter().map(CMat::adjoint).collect();
        Ok(IdempotentFamily {
            lambda,
            q,
            q_star,
            kind: kind.into(),
            params,
            interior: None,
            zero_products: Vec::new(),
        })
    }

    /// Like [`from_parts`](Self::from_parts) but also checks `q_i² = q_i` and
    /// `Σ q_i = λ I` on the whole space.
    pub fn exact(
        kind: impl Into<String>,
        params: Value,
        lambda: Option<C64>,
        q: Vec<CMat>,
    ) -> Result<Self, FamilyError> {
        let fam = Self::from_parts(kind, params, lambda, q)?;
        fam.check_construction()?;
        Ok(fam)
    }

    pub fn with_interior(mut self, interior: Vec<usize>) -> Self {
        self.interior = Some(interior);
        self
    }

    pub fn with_zero_products(mut self, pairs: Vec<(GenRef, GenRef)>) -> Self {
        self.zero_products = pairs;
        self
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn dim(&self) -> usize {
        self.q[0].rows()
    }

    pub fn is_truncated(&self) -> bool {
        self.interior.is_some()
    }

    pub fn generator(&self, g: GenRef) -> &CMat {
        if g.star {
            &self.q_star[g.index]
        } else {
            &self.q[g.index]
        }
    }

    /// Basis indices on which relations are checked.
    pub fn check_indices(&self) -> Vec<usize> {
        match &self.interior {
            Some(ix) => ix.clone(),
            None => (0..self.dim()).collect(),
        }
    }

    fn check_construction(&self) -> Result<(), FamilyError> {
        let scale = self
            .q
            .iter()
            .map(|m| m.max_abs())
            .fold(1.0f64, f64::max)
            .powi(2);
        for (i, m) in self.q.iter().enumerate() {
            let r = m.matmul(m).max_diff(m) / scale;
            if r > CONSTRUCTION_TOL {
                return Err(FamilyError::Construction {
                    relation: format!("q{}^2 = q{}", i + 1, i + 1),
                    residual: r,
                });
            }
        }
        let Some(lambda) = self.lambda else {
            return Ok(());
        };
        let r = self.sum().max_diff(&CMat::scalar(self.dim(), lambda)) / scale;
        if r > CONSTRUCTION_TOL {
            return Err(FamilyError::Construction {
                relation: "sum q_i = lambda I".into(),
                residual: r,
            });
        }
        Ok(())
    }

    pub fn sum(&self) -> CMat {
        let n = self.dim();
        self.q.iter().fold(CMat::zeros(n, n), |acc, m| &acc + m)
    }

    /// `T·q_i·T⁻¹` for every generator. The interior is dropped because a
    /// generic similarity mixes basis vectors.
    pub fn similar(&self, t: &CMat, t_inv: &CMat) -> Self {
        let q: Vec<CMat> = self.q.iter().map(|m| t.matmul(m).matmul(t_inv)).collect();
        let q_star = q.iter().map(CMat::adjoint).collect();
        IdempotentFamily {
            lambda: self.lambda,
            q,
            q_star,
            kind: self.kind.clone(),
            params: self.params.clone(),
            interior: None,
            zero_products: self.zero_products.clone(),
        }
    }

    /// `U·q_i·U*` for a unitary `U`.
    pub fn unitary_conjugate(&self, u: &CMat) -> Self {
        self.similar(u, &u.adjoint())
    }

    /// Block-diagonal sum of two families with the same `n` and `λ`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, FamilyError> {
        if self.n() != other.n() || self.lambda != other.lambda {
            return Err(FamilyError::DimensionMismatch(format!(
                "cannot add families ({} generators, lambda {:?}) and ({} generators, lambda {:?})",
                self.n(),
                self.lambda,
                other.n(),
                other.lambda
            )));
        }
        let q = self
            .q
            .iter()
            .zip(&other.q)
            .map(|(a, b)| CMat::direct_sum(&[a.clone(), b.clone()]))
            .collect();
        let mut fam = Self::from_parts(
            format!("{}+{}", self.kind, other.kind),
            serde_json::json!({ "left": self.params, "right": other.params }),
            self.lambda,
            q,
        )?;
        fam.zero_products = self.zero_products.clone();
        Ok(fam)
    }
}

/// Generators `p, q, r, s` of the four-idempotent algebra, with
/// `q_{1,2} = p ± r` and `q_{3,4} = q ± s`.
#[derive(Debug, Clone)]
pub struct PQRSQuad {
    pub p: CMat,
    pub q: CMat,
    pub r: CMat,
    pub s: CMat,
    pub lambda: C64,
    pub interior: Option<Vec<usize>>,
}

impl PQRSQuad {
    pub fn dim(&self) -> usize {
        self.p.rows()
    }

    pub fn from_family(fam: &IdempotentFamily) -> Result<Self, FamilyError> {
        if fam.n() != 4 {
            return Err(FamilyError::DimensionMismatch(format!(
                "need four generators, got {}",
                fam.n()
            )));
        }
        let half = |a: &CMat, b: &CMat| a.scale_re(0.5) + b.scale_re(0.5);
        let half_diff = |a: &CMat, b: &CMat| a.scale_re(0.5) - b.scale_re(0.5);
        Ok(PQRSQuad {
            p: half(&fam.q[0], &fam.q[1]),
            q: half(&fam.q[2], &fam.q[3]),
            r: half_diff(&fam.q[0], &fam.q[1]),
            s: half_diff(&fam.q[2], &fam.q[3]),
            lambda: fam.lambda.unwrap_or(C64::new(0.0, 0.0)),
            interior: fam.interior.clone(),
        })
    }

    /// The four idempotents `p + r, p − r, q + s, q − s`.
    pub fn idempotents(&self) -> [CMat; 4] {
        [
            &self.p + &self.r,
            &self.p - &self.r,
            &self.q + &self.s,
            &self.q - &self.s,
        ]
    }
}

/// Kind-specific payload for JSON params.
pub(crate) fn c64_json(z: C64) -> Value {
    serde_json::json!([z.re, z.im])
}
