//! Exact-rational orbit dynamics under the two involutions
//! `F₁(x) = 1 − x` and `F₂(x) = −1 − x`, and the λ parameter sets.
//!
//! The two maps generate an infinite dihedral group: `F₂∘F₁` is the shift
//! `x ↦ x − 2`, so the orbit of `x` is `{x + 2m} ∪ {1 − x + 2m}`.

mod lambda;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub(crate) use lambda::nearest_members;
pub use lambda::{
    coxeter_step, intro_form_member, lambda4bd_member, lambda_set, Direction, Lambda4Member,
    LambdaKind, LambdaSeq,
};

pub type Rational = BigRational;

/// Upper bound on the BFS depth accepted by [`orbit_enumerate`].
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("depth {0} exceeds the limit of {MAX_DEPTH}")]
    DepthTooLarge(usize),
    #[error("invalid argument: {0}")]
    BadArgument(String),
    #[error("orbit of {seed} to depth {depth} does not meet [-1/2, 1/2]")]
    NotFound { seed: String, depth: usize },
    #[error("orbit meets [-1/2, 1/2] in more than one point: {points:?}")]
    NotUnique { points: Vec<String> },
    #[error("division by zero in {0}")]
    Pole(String),
    #[error("membership forms disagree at {0}")]
    FormMismatch(String),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<Rational, OrbitError> {
    let err = || OrbitError::Parse(s.to_string());
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{whole}{frac}");
        let p: BigInt = digits.parse().map_err(|_| err())?;
        let q = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(p, q));
    }
    t.parse::<BigInt>()
        .map(Rational::from_integer)
        .map_err(|_| err())
}

/// `p/q`, or just `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Involution {
    F1,
    F2,
}

impl Involution {
    pub fn apply(self, x: &Rational) -> Rational {
        match self {
            Involution::F1 => Rational::one() - x,
            Involution::F2 => -Rational::one() - x,
        }
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Involution::F1 => "F1",
            Involution::F2 => "F2",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    pub value: Rational,
    /// Shortest word reaching the point, in application order.
    pub word: Vec<Involution>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub seed: Rational,
    /// Points in breadth-first order; the seed comes first.
    pub points: Vec<OrbitPoint>,
    pub depth: usize,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.points.iter().any(|p| &p.value == x)
    }

    pub fn values(&self) -> Vec<Rational> {
        self.points.iter().map(|p| p.value.clone()).collect()
    }
}

/// Breadth-first closure of `{seed}` under `F₁`, `F₂` up to word length `depth`.
pub fn orbit_enumerate(seed: &Rational, depth: usize) -> Result<Orbit, OrbitError> {
    if depth > MAX_DEPTH {
        return Err(OrbitError::DepthTooLarge(depth));
    }
    let mut seen: HashSet<Rational> = HashSet::new();
    let mut points = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(seed.clone());
    points.push(OrbitPoint {
        value: seed.clone(),
        word: Vec::new(),
    });
    queue.push_back(0usize);
    while let Some(idx) = queue.pop_front() {
        if points[idx].word.len() >= depth {
            continue;
        }
        for g in [Involution::F1, Involution::F2] {
            let y = g.apply(&points[idx].value);
            if seen.insert(y.clone()) {
                let mut word = points[idx].word.clone();
                word.push(g);
                points.push(OrbitPoint { value: y, word });
                queue.push_back(points.len() - 1);
            }
        }
    }
    Ok(Orbit {
        seed: seed.clone(),
        points,
        depth,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// The half-orbits of zero: `plus` gives `1, −2, 3, −4, …` and `minus`
/// gives `−1, 2, −3, 4, …`, `count` points each.
pub fn one_sided_orbit_zero(side: Side, count: usize) -> Result<Orbit, OrbitError> {
    if count == 0 {
        return Err(OrbitError::BadArgument("count must be at least 1".into()));
    }
    // plus: 1 = F₁(0), then F₂, F₁, F₂, ... alternate.
    let (first, mut next) = match side {
        Side::Plus => (Involution::F1, Involution::F2),
        Side::Minus => (Involution::F2, Involution::F1),
    };
    let seed = first.apply(&Rational::zero());
    let mut points = vec![OrbitPoint {
        value: seed.clone(),
        word: Vec::new(),
    }];
    for _ in 1..count {
        let last = points.last().unwrap();
        let mut word = last.word.clone();
        word.push(next);
        points.push(OrbitPoint {
            value: next.apply(&last.value),
            word,
        });
        next = match next {
            Involution::F1 => Involution::F2,
            Involution::F2 => Involution::F1,
        };
    }
    Ok(Orbit {
        seed,
        points,
        depth: count - 1,
    })
}

fn in_tau(x: &Rational) -> bool {
    let half = rat(1, 2);
    x.abs() <= half
}

/// The unique orbit point in `[−1/2, 1/2]`.
pub fn fundamental_point(seed: &Rational, depth: usize) -> Result<Rational, OrbitError> {
    let orbit = orbit_enumerate(seed, depth)?;
    let hits: Vec<Rational> = orbit
        .points
        .into_iter()
        .map(|p| p.value)
        .filter(in_tau)
        .collect();
    match hits.len() {
        0 => Err(OrbitError::NotFound {
            seed: format_rational(seed),
            depth,
        }),
        1 => Ok(hits.into_iter().next().unwrap()),
        _ => Err(OrbitError::NotUnique {
            points: hits.iter().map(format_rational).collect(),
        }),
    }
}

/// A depth that is always enough for [`fundamental_point`].
pub fn sufficient_depth(seed: &Rational) -> usize {
    use num_traits::ToPrimitive;
    seed.abs()
        .ceil()
        .to_integer()
        .to_usize()
        .unwrap_or(MAX_DEPTH)
        + 2
}

/// The alternative closed form `{(−1)ⁿ(x − n), (−1)ⁿ(−x − n) : 0 ≤ n ≤ n_max}`
/// sometimes quoted for the orbit. It contains `−x`, which no word in `F₁`,
/// `F₂` reaches from a generic `x`; see [`closed_form_discrepancy`].
pub fn closed_form_points(x: &Rational, n_max: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for n in 0..=n_max {
        let nn = int(n as i64);
        let sign = if n % 2 == 0 { int(1) } else { int(-1) };
        for y in [&sign * (x - &nn), &sign * (-x - &nn)] {
            if !out.contains(&y) {
                out.push(y);
            }
        }
    }
    out
}

/// Points of the closed form (with `n ≤ depth`) that the word-generated orbit
/// never reaches. Each candidate is tested against the exact orbit
/// description `{x + 2m} ∪ {1 − x + 2m}`, so the answer does not depend on
/// the BFS depth.
pub fn closed_form_discrepancy(x: &Rational, depth: usize) -> Vec<Rational> {
    closed_form_points(x, depth)
        .into_iter()
        .filter(|y| !in_word_orbit(x, y))
        .collect()
}

/// Exact membership of `y` in the full (untruncated) orbit of `x`.
pub fn in_word_orbit(x: &Rational, y: &Rational) -> bool {
    let even_int = |d: Rational| d.is_integer() && (d.to_integer() % BigInt::from(2)).is_zero();
    even_int(y - x) || even_int(y - (Rational::one() - x))
}
