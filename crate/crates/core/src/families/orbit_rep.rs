//! Truncated irreducible representations of the four-idempotent algebra at
//! `λ = 0` on `l₂` of an orbit under `μ ↦ 1 − μ` and `μ ↦ −1 − μ`.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde_json::json;

use super::{FamilyError, IdempotentFamily, PQRSQuad};
use crate::numerics::{re, CMat};
use crate::orbits::{
    format_rational, one_sided_orbit_zero, orbit_enumerate, rat, to_f64, Rational, Side,
};

#[derive(Debug, Clone, PartialEq)]
pub enum OrbitCase {
    /// Generic orbit through a seed in `(−1/2, 1/2) \ {0}`.
    I(Rational),
    /// Orbit of `1/2`, where `r` acts on `e_{1/2}` by `a = ±1/2`.
    II(f64),
    /// Orbit of `−1/2`, where `s` acts on `e_{−1/2}` by `a = ±1/2`.
    III(f64),
    /// Half-orbit `{−1, 2, −3, …}` with `s e_{−1} = 0`.
    IV,
    /// Half-orbit `{1, −2, 3, …}` with `r e_1 = 0`.
    V,
}

impl OrbitCase {
    pub fn label(&self) -> &'static str {
        match self {
            OrbitCase::I(_) => "I",
            OrbitCase::II(_) => "II",
            OrbitCase::III(_) => "III",
            OrbitCase::IV => "IV",
            OrbitCase::V => "V",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrbitRep {
    pub quad: PQRSQuad,
    pub family: IdempotentFamily,
    /// Basis labels `μ`, in matrix index order.
    pub basis: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Map {
    R,
    S,
}

/// Result of applying `r` or `s` to a basis vector.
enum Step {
    Zero,
    To(Rational, f64),
}

fn step(case: &OrbitCase, map: Map, mu: &Rational) -> Step {
    let half = rat(1, 2);
    let one = Rational::one();
    match (map, case) {
        (Map::R, OrbitCase::II(a)) if *mu == half => Step::To(half, *a),
        (Map::R, OrbitCase::V) if *mu == one => Step::Zero,
        (Map::S, OrbitCase::III(a)) if *mu == -&half => Step::To(-half, *a),
        (Map::S, OrbitCase::IV) if *mu == -&one => Step::Zero,
        (Map::R, _) => {
            let nu = &one - mu;
            Step::To(nu.clone(), to_f64(&nu))
        }
        (Map::S, _) => {
            let nu = -&one - mu;
            Step::To(nu.clone(), to_f64(&(&one + mu)) * -1.0)
        }
    }
}

fn validate(case: &OrbitCase) -> Result<(), FamilyError> {
    match case {
        OrbitCase::I(x) => {
            if x.is_zero() || x.abs() >= rat(1, 2) {
                return Err(FamilyError::BadParameter(format!(
                    "case I needs a seed in (-1/2, 1/2) without 0, got {}",
                    format_rational(x)
                )));
            }
        }
        OrbitCase::II(a) | OrbitCase::III(a) => {
            if (a.abs() - 0.5).abs() > 0.0 {
                return Err(FamilyError::BadParameter(format!(
                    "a must be ±1/2, got {a}"
                )));
            }
        }
        OrbitCase::IV | OrbitCase::V => {}
    }
    Ok(())
}

/// Builds `p, q = −p, r, s` on the truncated orbit together with the
/// idempotents `p ± r`, `−p ± s`.
pub fn orbit_rep_a40(case: OrbitCase, depth: usize) -> Result<OrbitRep, FamilyError> {
    validate(&case)?;
    if depth < 4 {
        return Err(FamilyError::BadParameter(format!(
            "depth must be at least 4, got {depth}"
        )));
    }
    let orbit = match &case {
        OrbitCase::I(x) => orbit_enumerate(x, depth)?,
        OrbitCase::II(_) => orbit_enumerate(&rat(1, 2), depth)?,
        OrbitCase::III(_) => orbit_enumerate(&rat(-1, 2), depth)?,
        OrbitCase::IV => one_sided_orbit_zero(Side::Minus, depth)?,
        OrbitCase::V => one_sided_orbit_zero(Side::Plus, depth)?,
    };
    let basis = orbit.values();
    let index: HashMap<Rational, usize> = basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let n = basis.len();

    let p = CMat::diag_real(&basis.iter().map(to_f64).collect::<Vec<_>>());
    let mut r = CMat::zeros(n, n);
    let mut s = CMat::zeros(n, n);
    for (j, mu) in basis.iter().enumerate() {
        for (map, m) in [(Map::R, &mut r), (Map::S, &mut s)] {
            if let Step::To(nu, coef) = step(&case, map, mu) {
                if let Some(&i) = index.get(&nu) {
                    m[(i, j)] = re(coef);
                }
            }
        }
    }

    // A point is interior when every word of length ≤ 2 in r, s keeps it
    // inside the basis (or sends it to zero).
    let stays = |mu: &Rational, map: Map| -> Option<Option<Rational>> {
        match step(&case, map, mu) {
            Step::Zero => Some(None),
            Step::To(nu, _) => index.contains_key(&nu).then_some(Some(nu)),
        }
    };
    let interior: Vec<usize> = (0..n)
        .filter(|&j| {
            [Map::R, Map::S]
                .iter()
                .all(|&m1| match stays(&basis[j], m1) {
                    None => false,
                    Some(None) => true,
                    Some(Some(nu)) => [Map::R, Map::S].iter().all(|&m2| stays(&nu, m2).is_some()),
                })
        })
        .collect();

    let q = -&p;
    let quad = PQRSQuad {
        p: p.clone(),
        q: q.clone(),
        r: r.clone(),
        s: s.clone(),
        lambda: re(0.0),
        interior: Some(interior.clone()),
    };
    let params = match &case {
        OrbitCase::I(x) => json!({ "case": "I", "seed": format_rational(x), "depth": depth }),
        OrbitCase::II(a) | OrbitCase::III(a) => {
            json!({ "case": case.label(), "a": a, "depth": depth })
        }
        _ => json!({ "case": case.label(), "depth": depth }),
    };
    let family = IdempotentFamily::from_parts(
        "orbitA40",
        params,
        Some(re(0.0)),
        vec![&p + &r, &p - &r, &q + &s, &q - &s],
    )?
    .with_interior(interior);
    Ok(OrbitRep {
        quad,
        family,
        basis,
    })
}
