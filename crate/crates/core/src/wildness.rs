//! Images of the wildness homomorphisms over finite-dimensional
//! substitutions, and the numerical fullness check.
//!
//! A substitution replaces the free generators (two self-adjoint elements
//! `a, b`, or two unitaries `u₁, u₂`) by `m × m` matrices. Every builder then
//! yields an ordinary [`IdempotentFamily`] of size `block_dim · m`.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use rand::Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::equivalence::{hom_space_mats, EquivalenceError};
use crate::families::{rep_p3_32, FamilyError, GenRef, IdempotentFamily, Manifest, PQRSQuad};
use crate::numerics::random::{random_hermitian, random_unitary};
use crate::numerics::{
    hermitian_deviation, hermitian_psd_sqrt, op_norm, re, CMat, NumericsError, I,
};
use crate::orbits::{
    format_rational, int, lambda4bd_member, to_f64, Lambda4Member, OrbitError, Rational,
};

/// Hermiticity and unitarity tolerance for substitutions.
pub const SUBSTITUTION_TOL: f64 = 1e-12;

/// Default tolerance for wildness reports.
pub const WILD_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum WildnessError {
    #[error("bad lambda {lambda}: {reason}")]
    BadLambda { lambda: String, reason: String },
    #[error("bad substitution: {0}")]
    BadSubstitution(String),
    #[error("substitutions are of different kinds")]
    KindMismatch,
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Equivalence(#[from] EquivalenceError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SubstitutionKind {
    Hermitian,
    Unitary,
}

/// Matrices standing in for the free generators.
#[derive(Debug, Clone)]
pub enum Substitution {
    Hermitian { a: CMat, b: CMat },
    Unitary { u1: CMat, u2: CMat },
}

impl Substitution {
    pub fn hermitian(a: CMat, b: CMat) -> Result<Self, WildnessError> {
        let sub = Substitution::Hermitian { a, b };
        sub.validate()?;
        Ok(sub)
    }

    pub fn unitary(u1: CMat, u2: CMat) -> Result<Self, WildnessError> {
        let sub = Substitution::Unitary { u1, u2 };
        sub.validate()?;
        Ok(sub)
    }

    pub fn random<R: Rng + ?Sized>(kind: SubstitutionKind, m: usize, rng: &mut R) -> Self {
        match kind {
            SubstitutionKind::Hermitian => Substitution::Hermitian {
                a: random_hermitian(m, rng),
                b: random_hermitian(m, rng),
            },
            SubstitutionKind::Unitary => Substitution::Unitary {
                u1: random_unitary(m, rng),
                u2: random_unitary(m, rng),
            },
        }
    }

    pub fn kind(&self) -> SubstitutionKind {
        match self {
            Substitution::Hermitian { .. } => SubstitutionKind::Hermitian,
            Substitution::Unitary { .. } => SubstitutionKind::Unitary,
        }
    }

    pub fn m(&self) -> usize {
        self.generators()[0].rows()
    }

    pub fn generators(&self) -> [&CMat; 2] {
        match self {
            Substitution::Hermitian { a, b } => [a, b],
            Substitution::Unitary { u1, u2 } => [u1, u2],
        }
    }

    fn validate(&self) -> Result<(), WildnessError> {
        let [x, y] = self.generators();
        if !x.is_square() || x.rows() == 0 || x.rows() != y.rows() || !y.is_square() {
            return Err(WildnessError::BadSubstitution(
                "generators must be square matrices of one positive size".into(),
            ));
        }
        for g in [x, y] {
            let dev = match self.kind() {
                SubstitutionKind::Hermitian => hermitian_deviation(g),
                SubstitutionKind::Unitary => {
                    g.adjoint().matmul(g).max_diff(&CMat::identity(g.rows()))
                }
            };
            if dev > SUBSTITUTION_TOL {
                return Err(WildnessError::BadSubstitution(format!(
                    "{:?} generator off by {dev:e}",
                    self.kind()
                )));
            }
        }
        Ok(())
    }

    /// `U·x·U*` applied to both generators.
    pub fn conjugate(&self, u: &CMat) -> Self {
        let c = |x: &CMat| u.matmul(x).matmul(&u.adjoint());
        match self {
            Substitution::Hermitian { a, b } => Substitution::Hermitian { a: c(a), b: c(b) },
            Substitution::Unitary { u1, u2 } => Substitution::Unitary {
                u1: c(u1),
                u2: c(u2),
            },
        }
    }

    /// Block-diagonal sum, for reducible substitutions.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, WildnessError> {
        if self.kind() != other.kind() {
            return Err(WildnessError::KindMismatch);
        }
        let [x1, y1] = self.generators();
        let [x2, y2] = other.generators();
        let x = CMat::direct_sum(&[x1.clone(), x2.clone()]);
        let y = CMat::direct_sum(&[y1.clone(), y2.clone()]);
        Ok(match self.kind() {
            SubstitutionKind::Hermitian => Substitution::Hermitian { a: x, b: y },
            SubstitutionKind::Unitary => Substitution::Unitary { u1: x, u2: y },
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Builder {
    Wild1a,
    Wild1b,
    Wild2(Rational),
}

impl Builder {
    /// The substitution kind the builder consumes. `wild2` at `λ ∈ {1, 2, 3}`
    /// reuses the `wild1a` embedding and so takes self-adjoint pairs.
    pub fn substitution_kind(&self) -> SubstitutionKind {
        match self {
            Builder::Wild2(l) if !routed_to_wild1(l) => SubstitutionKind::Unitary,
            _ => SubstitutionKind::Hermitian,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builder::Wild1a => "wild1a",
            Builder::Wild1b => "wild1b",
            Builder::Wild2(_) => "wild2",
        }
    }

    pub fn build(&self, sub: &Substitution) -> Result<PsiImage, WildnessError> {
        match self {
            Builder::Wild1a => wild1_image(Variant::A, sub),
            Builder::Wild1b => wild1_image(Variant::B, sub),
            Builder::Wild2(l) => wild2_image(l, sub),
        }
    }
}

impl fmt::Display for Builder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builder::Wild2(l) => write!(f, "wild2({})", format_rational(l)),
            other => f.write_str(other.name()),
        }
    }
}

/// Parses `wild1a`, `wild1b`, or `wild2` with a separately supplied λ.
pub fn parse_builder(name: &str, lambda: Option<Rational>) -> Result<Builder, WildnessError> {
    match (name, lambda) {
        ("wild1a", _) => Ok(Builder::Wild1a),
        ("wild1b", _) => Ok(Builder::Wild1b),
        ("wild2", Some(l)) => Ok(Builder::Wild2(l)),
        ("wild2", None) => Err(WildnessError::BadLambda {
            lambda: "none".into(),
            reason: "wild2 needs a lambda".into(),
        }),
        (other, _) => Err(WildnessError::BadSubstitution(format!(
            "unknown builder {other}"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    A,
    B,
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" => Ok(Variant::A),
            "b" => Ok(Variant::B),
            _ => Err(format!("unknown variant {s}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PsiImage {
    pub builder: String,
    pub lambda: Option<Rational>,
    /// Number of `m × m` blocks along each side.
    pub block_dim: usize,
    pub m: usize,
    pub fam: IdempotentFamily,
    /// `p, q, r, s` for the four-idempotent builders.
    pub quad: Option<PQRSQuad>,
    pub j3: Option<CMat>,
    /// Normalization of `A₁, A₂`.
    pub big_n: Option<usize>,
}

impl PsiImage {
    pub fn manifest(&self) -> Manifest {
        let mut m = Manifest::describe(&self.fam);
        m.builder = Some(self.builder.clone());
        m.substitution_dim = Some(self.m);
        m.big_n = self.big_n;
        m
    }
}

/// Block matrix from an `r × c` grid of `m × m` blocks given as a closure.
fn block_grid(r: usize, c: usize, m: usize, f: impl Fn(usize, usize) -> Option<CMat>) -> CMat {
    let mut out = CMat::zeros(r * m, c * m);
    for i in 0..r {
        for j in 0..c {
            if let Some(b) = f(i, j) {
                out.set_block(i * m, j * m, &b);
            }
        }
    }
    out
}

fn wild1a_generators(a: &CMat, b: &CMat) -> (CMat, CMat) {
    let m = a.rows();
    let e = CMat::identity(m);
    let z = a + &b.scale(I);
    let q1 = block_grid(3, 3, m, |i, j| match (i, j) {
        (0, 0) | (0, 1) => Some(e.clone()),
        (0, 2) => Some(z.clone()),
        _ => None,
    });
    let q2 = block_grid(3, 3, m, |i, j| match (i, j) {
        (0, 1) | (0, 2) => Some(e.scale_re(-1.0)),
        (1, 1) | (1, 2) => Some(e.clone()),
        _ => None,
    });
    (q1, q2)
}

/// Images of the matrix units `e₁₁, e₁₂, e₂₁, e₂₂` under the second map.
fn wild1b_units(a: &CMat, b: &CMat) -> [CMat; 4] {
    let m = a.rows();
    let e = CMat::identity(m);
    let z = a + &b.scale(I);
    let e11 = block_grid(2, 2, m, |i, j| match (i, j) {
        (0, 0) => Some(e.clone()),
        (0, 1) => Some(z.scale_re(-1.0)),
        _ => None,
    });
    let e12 = block_grid(2, 2, m, |i, j| ((i, j) == (0, 1)).then(|| e.clone()));
    let e21 = block_grid(2, 2, m, |i, j| match (i, j) {
        (0, 0) => Some(z.clone()),
        (0, 1) => Some(z.matmul(&z).scale_re(-1.0)),
        (1, 0) => Some(e.clone()),
        _ => Some(z.scale_re(-1.0)),
    });
    let e22 = &CMat::identity(2 * m) - &e11;
    [e11, e12, e21, e22]
}

pub fn wild1_image(variant: Variant, sub: &Substitution) -> Result<PsiImage, WildnessError> {
    let Substitution::Hermitian { a, b } = sub else {
        return Err(WildnessError::BadSubstitution(
            "wild1 needs a self-adjoint pair".into(),
        ));
    };
    sub.validate()?;
    let m = a.rows();
    match variant {
        Variant::A => {
            let (q1, q2) = wild1a_generators(a, b);
            let fam = IdempotentFamily::exact("wild1a", json!({ "m": m }), None, vec![q1, q2])?
                .with_zero_products(vec![
                    (GenRef::plain(0), GenRef::plain(1)),
                    (GenRef::plain(1), GenRef::plain(0)),
                ]);
            Ok(PsiImage {
                builder: "wild1a".into(),
                lambda: None,
                block_dim: 3,
                m,
                fam,
                quad: None,
                j3: None,
                big_n: None,
            })
        }
        Variant::B => {
            // The three projections summing to 3/2 generate M₂, so they are
            // fixed combinations of matrix units; push those through the map.
            let units = wild1b_units(a, b);
            let p = rep_p3_32()?;
            let q =
                p.q.iter()
                    .map(|c| {
                        let coeffs = [c[(0, 0)], c[(0, 1)], c[(1, 0)], c[(1, 1)]];
                        units
                            .iter()
                            .zip(coeffs)
                            .fold(CMat::zeros(2 * m, 2 * m), |acc, (u, z)| &acc + &u.scale(z))
                    })
                    .collect();
            let fam = IdempotentFamily::exact("wild1b", json!({ "m": m }), Some(re(1.5)), q)?;
            Ok(PsiImage {
                builder: "wild1b".into(),
                lambda: Some(Rational::new(3.into(), 2.into())),
                block_dim: 2,
                m,
                fam,
                quad: None,
                j3: None,
                big_n: None,
            })
        }
    }
}

/// The isometry `J₃ = (A₁; A₂; A₃)` and the normalization `N`.
pub fn j3_isometry(u1: &CMat, u2: &CMat) -> Result<(CMat, usize), WildnessError> {
    let m = u1.rows();
    let e = CMat::identity(m);
    let a1 = block_grid(4, 5, m, |i, j| match (i, j) {
        (0, 0) | (1, 1) => Some(e.clone()),
        (2, 2) => Some(e.scale_re(2.0)),
        (3, 3) => Some(e.scale_re(3.0)),
        _ => None,
    });
    let a2 = block_grid(3, 5, m, |i, j| match (i, j) {
        (0, 0) | (0, 2) | (0, 3) | (0, 4) | (1, 2) | (2, 2) => Some(e.clone()),
        (1, 1) => Some(e.scale_re(2.0)),
        (1, 3) => Some(u1.clone()),
        (2, 4) => Some(u2.clone()),
        _ => None,
    });
    let gram = &a1.adjoint().matmul(&a1) + &a2.adjoint().matmul(&a2);
    let norm = op_norm(&gram);
    let mut big_n = 1usize;
    while norm / (big_n * big_n) as f64 >= 1.0 {
        big_n += 1;
    }
    let inv = 1.0 / big_n as f64;
    let (a1, a2) = (a1.scale_re(inv), a2.scale_re(inv));
    let rest = &CMat::identity(5 * m) - &gram.scale_re(inv * inv);
    let a3 = hermitian_psd_sqrt(&rest)?;
    let mut j3 = CMat::zeros(12 * m, 5 * m);
    j3.set_block(0, 0, &a1);
    j3.set_block(4 * m, 0, &a2);
    j3.set_block(7 * m, 0, &a3);
    Ok((j3, big_n))
}

fn routed_to_wild1(l: &Rational) -> bool {
    [1, 2, 3].iter().any(|&v| *l == int(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Wild2Case {
    /// `k ≡ 0 (mod 4)`: `λ = 2 ± 1/(2l)`.
    One,
    /// `k` odd: `λ = 2 ± 2/(2l + 1)`.
    Two,
    /// `k ≡ 2 (mod 4)`: `λ = 2 ± 1/(2l + 1)`.
    Three,
}

fn dispatch(lambda: &Rational) -> Result<(Wild2Case, u64, i8), WildnessError> {
    let bad = |reason: &str| WildnessError::BadLambda {
        lambda: format_rational(lambda),
        reason: reason.into(),
    };
    let (k, sign) = match lambda4bd_member(lambda)? {
        Some(Lambda4Member::Point { k, sign }) => (k, sign),
        Some(Lambda4Member::Center) => return Err(bad("lambda = 2 is handled by wild1")),
        None => return Err(bad("not of the form 2 ± 2/k")),
    };
    let (case, l) = if k % 4 == 0 {
        (Wild2Case::One, k / 4)
    } else if k % 2 == 1 {
        (Wild2Case::Two, (k - 1) / 2)
    } else {
        (Wild2Case::Three, (k - 2) / 4)
    };
    if l == 0 {
        return Err(bad(
            "the construction needs l >= 1; bounded families at 0 and 4 are scalar",
        ));
    }
    Ok((case, l, sign))
}

/// Diagonal values of `ψ(p)`, one per `12m` block, in exact arithmetic.
pub fn wild2_block_eigenvalues(lambda: &Rational) -> Result<Vec<Rational>, WildnessError> {
    let (case, l, sign) = dispatch(lambda)?;
    let frac = |a: u64, b: u64| Rational::new(a.into(), b.into());
    let one = Rational::one();
    let vals: Vec<Rational> = match case {
        // Position j holds λ_j: λ_{2k} = 1 − k/(2l), λ_{2k−1} = k/(2l).
        Wild2Case::One => (0..2 * l)
            .map(|j| {
                if j % 2 == 0 {
                    &one - frac(j / 2, 2 * l)
                } else {
                    frac(j.div_ceil(2), 2 * l)
                }
            })
            .collect(),
        // Position j holds λ_{j+1}: λ_{2k} = 2k/(2l+1), λ_{2k+1} = 1 − 2k/(2l+1).
        Wild2Case::Two => (1..=2 * l + 1)
            .map(|i| {
                if i % 2 == 0 {
                    frac(i, 2 * l + 1)
                } else {
                    &one - frac(i - 1, 2 * l + 1)
                }
            })
            .collect(),
        // λ_{2k} = k/(2l+1), λ_{2k+1} = 1 − k/(2l+1).
        Wild2Case::Three => (1..=2 * l + 1)
            .map(|i| {
                if i % 2 == 0 {
                    frac(i / 2, 2 * l + 1)
                } else {
                    &one - frac((i - 1) / 2, 2 * l + 1)
                }
            })
            .collect(),
    };
    Ok(if sign > 0 {
        vals
    } else {
        vals.into_iter().map(|v| &one - v).collect()
    })
}

/// The four-idempotent family at `λ = 1, 2, 3` from the pair `q₁q₂ = q₂q₁ = 0`.
fn wild2_via_wild1(lambda: &Rational, sub: &Substitution) -> Result<PsiImage, WildnessError> {
    let base = wild1_image(Variant::A, sub)?;
    let (q1, q2) = (&base.fam.q[0], &base.fam.q[1]);
    let n = q1.rows();
    let e = CMat::identity(n);
    let q = if *lambda == int(2) {
        vec![q1.clone(), &e - q1, q2.clone(), &e - q2]
    } else {
        let q3 = &(&e - q1) - q2;
        let ones = vec![q1.clone(), q2.clone(), q3, CMat::zeros(n, n)];
        if *lambda == int(1) {
            ones
        } else {
            ones.iter().map(|x| &e - x).collect()
        }
    };
    let lf = to_f64(lambda);
    let fam = IdempotentFamily::exact(
        "wild2",
        json!({ "lambda": format_rational(lambda), "m": base.m, "via": "wild1a" }),
        Some(re(lf)),
        q,
    )?;
    let quad = PQRSQuad::from_family(&fam)?;
    Ok(PsiImage {
        builder: "wild2".into(),
        lambda: Some(lambda.clone()),
        block_dim: 3,
        m: base.m,
        fam,
        quad: Some(quad),
        j3: None,
        big_n: None,
    })
}

pub fn wild2_image(lambda: &Rational, sub: &Substitution) -> Result<PsiImage, WildnessError> {
    if routed_to_wild1(lambda) {
        return wild2_via_wild1(lambda, sub);
    }
    let (case, l, _) = dispatch(lambda)?;
    let Substitution::Unitary { u1, u2 } = sub else {
        return Err(WildnessError::BadSubstitution(
            "wild2 needs a unitary pair".into(),
        ));
    };
    sub.validate()?;
    let m = u1.rows();
    let ev: Vec<f64> = wild2_block_eigenvalues(lambda)?
        .iter()
        .map(to_f64)
        .collect();
    let lf = to_f64(lambda);
    let (j3, big_n) = j3_isometry(u1, u2)?;
    let proj = j3.matmul(&j3.adjoint());
    let b = 12 * m;
    let e = CMat::identity(b);
    let nb = ev.len();
    let dim = nb * b;
    let half_shift = |x: &CMat| x.add_scalar(re(-0.5));
    // diag(v₁E_{4m}, v₂E_{3m}, v₃E_{5m})
    let param = |v: [f64; 3]| {
        let d: Vec<f64> = [(v[0], 4), (v[1], 3), (v[2], 5)]
            .iter()
            .flat_map(|&(x, c)| std::iter::repeat_n(x, c * m))
            .collect();
        CMat::diag_real(&d)
    };
    // Off-diagonal pair block: `upper` at (a, a+1), `lower` at (a+1, a).
    let put_pair = |mat: &mut CMat, a: usize, upper: &CMat, lower: &CMat| {
        mat.set_block(a * b, (a + 1) * b, upper);
        mat.set_block((a + 1) * b, a * b, lower);
    };
    // (λ/2 − μ)(1 − λ/2 + μ), the `s`-coupling at p-value μ.
    let s_coupling = |mu: f64| (lf / 2.0 - mu) * (1.0 - lf / 2.0 + mu);
    let xs = |t: f64| [t, 2.0 * t, 3.0 * t];
    let ys = |target: f64, t: f64| [target / t, target / (2.0 * t), target / (3.0 * t)];

    let mut p = CMat::zeros(dim, dim);
    for (j, &v) in ev.iter().enumerate() {
        p.set_block(j * b, j * b, &e.scale_re(v));
    }
    let mut r = CMat::zeros(dim, dim);
    let mut s = CMat::zeros(dim, dim);
    let l = l as usize;
    match case {
        Wild2Case::One => {
            for k in 1..l {
                let a = 2 * k - 1;
                put_pair(&mut r, a, &e.scale_re(ev[a] * ev[a + 1]), &e);
            }
            r.set_block((nb - 1) * b, (nb - 1) * b, &half_shift(&proj));
            for k in 0..l {
                let a = 2 * k;
                let t = s_coupling(ev[a]);
                if k == l - 1 {
                    put_pair(&mut s, a, &param(ys(t, 1.0)), &param(xs(1.0)));
                } else {
                    put_pair(&mut s, a, &e.scale_re(t), &e);
                }
            }
        }
        Wild2Case::Two => {
            for k in 1..=l {
                let a = 2 * k - 1;
                if k == 1 {
                    let w = (&proj.scale_re(2.0) - &e).scale_re((ev[a] * ev[a + 1]).sqrt());
                    put_pair(&mut r, a, &w, &w);
                } else {
                    put_pair(&mut r, a, &e.scale_re(ev[a] * ev[a + 1]), &e);
                }
            }
            for k in 1..=l {
                let a = 2 * k - 2;
                let t = s_coupling(ev[a]);
                if k <= 2 {
                    let scale = k as f64;
                    put_pair(&mut s, a, &param(ys(t, scale)), &param(xs(scale)));
                } else {
                    put_pair(&mut s, a, &e.scale_re(t), &e);
                }
            }
        }
        Wild2Case::Three => {
            for k in 1..=l {
                let a = 2 * k - 1;
                let t = ev[a] * ev[a + 1];
                if k == l {
                    put_pair(&mut r, a, &param(ys(t, 1.0)), &param(xs(1.0)));
                } else {
                    put_pair(&mut r, a, &e.scale_re(t), &e);
                }
            }
            for k in 1..=l {
                let a = 2 * k - 2;
                put_pair(&mut s, a, &e.scale_re(s_coupling(ev[a])), &e);
            }
            s.set_block((nb - 1) * b, (nb - 1) * b, &half_shift(&proj));
        }
    }
    let q = p.scale_re(-1.0).add_scalar(re(lf / 2.0));
    let gens = vec![&p + &r, &p - &r, &q + &s, &q - &s];
    let fam = IdempotentFamily::from_parts(
        "wild2",
        json!({
            "lambda": format_rational(lambda),
            "m": m,
            "case": match case { Wild2Case::One => 1, Wild2Case::Two => 2, Wild2Case::Three => 3 },
            "l": l,
            "N": big_n,
        }),
        Some(re(lf)),
        gens,
    )?;
    let quad = PQRSQuad {
        p,
        q,
        r,
        s,
        lambda: re(lf),
        interior: None,
    };
    Ok(PsiImage {
        builder: "wild2".into(),
        lambda: Some(lambda.clone()),
        block_dim: 12 * nb,
        m,
        fam,
        quad: Some(quad),
        j3: Some(j3),
        big_n: Some(big_n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fullness {
    pub dim_source: usize,
    pub dim_target: usize,
    pub equal: bool,
}

/// Compares intertwiner dimensions before and after applying the builder.
pub fn fullness_check(
    builder: &Builder,
    pi1: &Substitution,
    pi2: &Substitution,
) -> Result<Fullness, WildnessError> {
    if pi1.kind() != pi2.kind() {
        return Err(WildnessError::KindMismatch);
    }
    if pi1.kind() != builder.substitution_kind() {
        return Err(WildnessError::BadSubstitution(format!(
            "{builder} takes {:?} substitutions",
            builder.substitution_kind()
        )));
    }
    let src_a: Vec<CMat> = pi1.generators().into_iter().cloned().collect();
    let src_b: Vec<CMat> = pi2.generators().into_iter().cloned().collect();
    let dim_source = hom_space_mats(&src_a, &src_b, true)?.dim;
    let img1 = builder.build(pi1)?;
    let img2 = builder.build(pi2)?;
    let dim_target = hom_space_mats(&img1.fam.q, &img2.fam.q, true)?.dim;
    Ok(Fullness {
        dim_source,
        dim_target,
        equal: dim_source == dim_target,
    })
}

/// Substitution pairs for randomized fullness trials, cycling through an
/// equivalent pair, an independent pair, and a pair against a reducible sum.
/// Sizes stay within `1..=max_m`.
pub fn fullness_trial_pair<R: Rng + ?Sized>(
    kind: SubstitutionKind,
    trial: usize,
    max_m: usize,
    rng: &mut R,
) -> Result<(Substitution, Substitution), WildnessError> {
    let max_m = max_m.max(1);
    let m = rng.random_range(1..=max_m);
    let pi1 = Substitution::random(kind, m, rng);
    let pi2 = match trial % 3 {
        0 => pi1.conjugate(&random_unitary(m, rng)),
        1 => Substitution::random(kind, rng.random_range(1..=max_m), rng),
        _ if m < max_m => {
            let extra = Substitution::random(kind, rng.random_range(1..=max_m - m), rng);
            pi1.direct_sum(&extra)?
        }
        _ => pi1.clone(),
    };
    Ok((pi1, pi2))
}
