//! Parameter sets: the fixed small sets, the bounded set for four
//! idempotents, the continued-fraction families and Coxeter orbits.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{format_rational, int, rat, OrbitError, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaKind {
    Lambda2,
    Lambda3,
    Lambda4bd,
    Cf1,
    Cf2,
    Orb2,
    OrbHalf,
}

impl FromStr for LambdaKind {
    type Err = OrbitError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "l2" | "lambda2" => LambdaKind::Lambda2,
            "l3" | "lambda3" => LambdaKind::Lambda3,
            "l4bd" | "lambda4bd" => LambdaKind::Lambda4bd,
            "cf1" => LambdaKind::Cf1,
            "cf2" => LambdaKind::Cf2,
            "orb2" => LambdaKind::Orb2,
            "orbhalf" => LambdaKind::OrbHalf,
            _ => return Err(OrbitError::BadArgument(format!("unknown set kind {s:?}"))),
        })
    }
}

impl fmt::Display for LambdaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LambdaKind::Lambda2 => "l2",
            LambdaKind::Lambda3 => "l3",
            LambdaKind::Lambda4bd => "l4bd",
            LambdaKind::Cf1 => "cf1",
            LambdaKind::Cf2 => "cf2",
            LambdaKind::Orb2 => "orb2",
            LambdaKind::OrbHalf => "orbhalf",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSeq {
    pub n: u32,
    pub kind: LambdaKind,
    /// Distinct terms in generation order.
    pub terms: Vec<Rational>,
}

impl LambdaSeq {
    pub fn to_strings(&self) -> Vec<String> {
        self.terms.iter().map(format_rational).collect()
    }
}

/// Collects distinct values until `count` are held.
struct Distinct {
    seen: HashSet<Rational>,
    terms: Vec<Rational>,
    count: usize,
}

impl Distinct {
    fn new(count: usize) -> Self {
        Distinct {
            seen: HashSet::new(),
            terms: Vec::new(),
            count,
        }
    }

    fn full(&self) -> bool {
        self.terms.len() >= self.count
    }

    fn push(&mut self, x: Rational) {
        if !self.full() && self.seen.insert(x.clone()) {
            self.terms.push(x);
        }
    }
}

/// Generous cap on recurrence steps so a periodic orbit cannot loop forever.
fn step_cap(count: usize) -> usize {
    4 * count + 64
}

/// First `count` terms of the requested set, in generation order.
pub fn lambda_set(n: u32, kind: LambdaKind, count: usize) -> Result<LambdaSeq, OrbitError> {
    let mut out = Distinct::new(count);
    match kind {
        LambdaKind::Lambda2 => {
            for x in [int(0), int(1), int(2)] {
                out.push(x);
            }
        }
        LambdaKind::Lambda3 => {
            for x in [int(0), int(1), rat(3, 2), int(2), int(3)] {
                out.push(x);
            }
        }
        LambdaKind::Lambda4bd => {
            let mut k = 1i64;
            while !out.full() {
                out.push(int(2) - rat(2, k));
                out.push(int(2) + rat(2, k));
                if k == 1 {
                    out.push(int(2));
                }
                k += 1;
            }
        }
        LambdaKind::Cf1 | LambdaKind::Cf2 => {
            require_n5(n, kind)?;
            let n_r = int(i64::from(n));
            let (first, mut c) = if kind == LambdaKind::Cf1 {
                (int(0), &n_r - int(1))
            } else {
                (int(1), &n_r - int(2))
            };
            out.push(first);
            let mut steps = 0;
            while !out.full() && steps < step_cap(count) {
                if c.is_zero() {
                    return Err(OrbitError::Pole(format!("{kind} tail at step {steps}")));
                }
                out.push(int(1) + c.recip());
                c = (&n_r - int(2)) - c.recip();
                steps += 1;
            }
        }
        LambdaKind::Orb2 | LambdaKind::OrbHalf => {
            require_n5(n, kind)?;
            let start = if kind == LambdaKind::Orb2 {
                int(2)
            } else {
                rat(i64::from(n), 2)
            };
            out.push(start.clone());
            let (mut fwd, mut back) = (start.clone(), start);
            let mut steps = 0;
            while !out.full() && steps < step_cap(count) {
                fwd = coxeter_step(n, &fwd, Direction::Forward)?;
                out.push(fwd.clone());
                back = coxeter_step(n, &back, Direction::Backward)?;
                out.push(back.clone());
                steps += 1;
            }
        }
    }
    Ok(LambdaSeq {
        n,
        kind,
        terms: out.terms,
    })
}

fn require_n5(n: u32, kind: LambdaKind) -> Result<(), OrbitError> {
    if n < 5 {
        return Err(OrbitError::BadArgument(format!(
            "{kind} needs n >= 5, got {n}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// `forward: α ↦ (n−1) − 1/(α−1)`, `backward: α ↦ 1 + 1/(n−1−α)`.
pub fn coxeter_step(n: u32, alpha: &Rational, dir: Direction) -> Result<Rational, OrbitError> {
    if n < 5 {
        return Err(OrbitError::BadArgument(format!(
            "coxeter step needs n >= 5, got {n}"
        )));
    }
    let nm1 = int(i64::from(n) - 1);
    match dir {
        Direction::Forward => {
            let d = alpha - int(1);
            if d.is_zero() {
                return Err(OrbitError::Pole("forward step at alpha = 1".into()));
            }
            Ok(nm1 - d.recip())
        }
        Direction::Backward => {
            let d = &nm1 - alpha;
            if d.is_zero() {
                return Err(OrbitError::Pole(format!(
                    "backward step at alpha = {}",
                    n - 1
                )));
            }
            Ok(int(1) + d.recip())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lambda4Member {
    /// `λ = 2`.
    Center,
    /// `λ = 2 + sign·2/k`.
    Point { k: u64, sign: i8 },
}

impl Lambda4Member {
    pub fn value(&self) -> Rational {
        match *self {
            Lambda4Member::Center => int(2),
            Lambda4Member::Point { k, sign } => {
                int(2) + Rational::new(BigInt::from(2 * i64::from(sign)), BigInt::from(k))
            }
        }
    }
}

/// Solves `x = a/b` for a positive integer, if any.
fn positive_integer(x: &Rational) -> Option<u64> {
    if x.is_integer() && x.is_positive() {
        x.to_integer().to_u64()
    } else {
        None
    }
}

/// Membership in `{0, 1, 1 + k/(k+2), 2, 3 − k/(k+2), 3, 4 : k ≥ 1}`.
pub fn intro_form_member(q: &Rational) -> bool {
    if [0, 1, 2, 3, 4].iter().any(|&v| *q == int(v)) {
        return true;
    }
    // 1 + k/(k+2) = q  ⇔  k = 2(q−1)/(2−q); the other branch mirrors q ↦ 4 − q.
    let solve = |y: &Rational| {
        let den = int(2) - y;
        if den.is_zero() {
            return None;
        }
        positive_integer(&((y - int(1)) * int(2) / den))
    };
    solve(q).is_some() || solve(&(int(4) - q)).is_some()
}

/// Decides whether `q = 2 ± 2/k` for a positive integer `k` (or `q = 2`).
/// The answer is cross-checked against [`intro_form_member`]; a
/// disagreement is reported as [`OrbitError::FormMismatch`].
pub fn lambda4bd_member(q: &Rational) -> Result<Option<Lambda4Member>, OrbitError> {
    let d = q - int(2);
    let found = if d.is_zero() {
        Some(Lambda4Member::Center)
    } else {
        positive_integer(&(int(2) / d.abs())).map(|k| Lambda4Member::Point {
            k,
            sign: if d.is_positive() { 1 } else { -1 },
        })
    };
    if found.is_some() != intro_form_member(q) {
        return Err(OrbitError::FormMismatch(format_rational(q)));
    }
    Ok(found)
}

/// Nearest members `2 ± 2/k` on either side of `x`, for diagnostics.
pub(crate) fn nearest_members(x: f64, k_max: u64) -> Vec<f64> {
    let mut all: Vec<f64> = (1..=k_max)
        .flat_map(|k| [2.0 - 2.0 / k as f64, 2.0 + 2.0 / k as f64])
        .chain(std::iter::once(2.0))
        .collect();
    all.sort_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()));
    all.truncate(2);
    all
}
