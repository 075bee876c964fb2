//! Relation residuals for families, plus the trace and polynomial-identity
//! checks.
//!
//! Residuals are taken column by column over the family's check indices and
//! maximized. Each relation is quadratic in the generators, so residuals are
//! divided by `max(1, m²)` with `m` the largest generator entry; this keeps
//! the tolerance meaningful for the unbounded truncations whose entries grow
//! with the truncation size.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::families::{IdempotentFamily, PQRSQuad};
use crate::numerics::random::complex_normal;
use crate::numerics::{op_norm, CMat, C64};

/// Largest absolute gap accepted by [`trace_lambda_check`].
pub const TRACE_TOL: f64 = 1e-9;

/// Maximum word length accepted by [`s4_identity_residual`].
pub const S4_MAX_WORD: usize = 4;

/// Number of random words summed into each argument of the standard identity.
const S4_TERMS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("the check is meaningless on a truncated family")]
    Truncated,
    #[error("bad argument: {0}")]
    BadArgument(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub kind: String,
    pub n: usize,
    pub lambda: Option<[f64; 2]>,
    pub dim: usize,
}

impl FamilyDescriptor {
    pub fn of(fam: &IdempotentFamily) -> Self {
        FamilyDescriptor {
            kind: fam.kind.clone(),
            n: fam.n(),
            lambda: fam.lambda.map(|z| [z.re, z.im]),
            dim: fam.dim(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub relation: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub family: FamilyDescriptor,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl VerifyReport {
    fn new(family: FamilyDescriptor) -> Self {
        VerifyReport {
            family,
            checks: Vec::new(),
            pass: true,
        }
    }

    fn push(&mut self, relation: impl Into<String>, residual: f64, tolerance: f64) {
        // NaN must fail, so compare in the passing direction.
        let pass = residual <= tolerance;
        self.pass &= pass;
        self.checks.push(Check {
            relation: relation.into(),
            residual,
            tolerance,
            pass,
        });
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Restriction of `m` to the given columns, all rows kept.
fn cols(m: &CMat, ix: &[usize]) -> CMat {
    let rows: Vec<usize> = (0..m.rows()).collect();
    m.select(&rows, ix)
}

/// Largest column 2-norm.
fn max_col_norm(m: &CMat) -> f64 {
    (0..m.cols()).map(|j| m.column_norm(j)).fold(0.0, f64::max)
}

fn quadratic_scale<'a>(ms: impl IntoIterator<Item = &'a CMat>) -> f64 {
    ms.into_iter()
        .map(CMat::max_abs)
        .fold(1.0, f64::max)
        .powi(2)
}

/// The scalar matrix `z·I` restricted to columns `ix`.
fn scalar_cols(dim: usize, z: C64, ix: &[usize]) -> CMat {
    let mut out = CMat::zeros(dim, ix.len());
    for (c, &j) in ix.iter().enumerate() {
        out[(j, c)] = z;
    }
    out
}

pub fn relation_report(fam: &IdempotentFamily, tol: f64) -> VerifyReport {
    let mut report = VerifyReport::new(FamilyDescriptor::of(fam));
    let ix = fam.check_indices();
    let dim = fam.dim();
    let scale = quadratic_scale(&fam.q);
    for (i, q) in fam.q.iter().enumerate() {
        let qe = cols(q, &ix);
        let r = max_col_norm(&(&q.matmul(&qe) - &qe)) / scale;
        report.push(format!("q{}^2 = q{}", i + 1, i + 1), r, tol);
    }
    if let Some(lambda) = fam.lambda {
        let sum = fam
            .q
            .iter()
            .fold(CMat::zeros(dim, ix.len()), |acc, q| &acc + &cols(q, &ix));
        let r = max_col_norm(&(&sum - &scalar_cols(dim, lambda, &ix))) / scale;
        report.push("sum q_i = lambda I", r, tol);
        let sum_star = fam
            .q_star
            .iter()
            .fold(CMat::zeros(dim, ix.len()), |acc, q| &acc + &cols(q, &ix));
        let r = max_col_norm(&(&sum_star - &scalar_cols(dim, lambda.conj(), &ix))) / scale;
        report.push("sum q_i* = conj(lambda) I", r, tol);
    }
    for &(a, b) in &fam.zero_products {
        let prod = fam.generator(a).matmul(&cols(fam.generator(b), &ix));
        report.push(
            format!("{} {} = 0", a.label(), b.label()),
            max_col_norm(&prod) / scale,
            tol,
        );
    }
    report
}

/// Relations of the `p, q, r, s` presentation with `q = λ/2 − p`:
/// `pr = r(1 − p)`, `ps = s(λ − 1 − p)`, `r² = p(1 − p)`, `s² = q(1 − q)`,
/// and `q = λ/2 − p` itself. At `λ = 0` the star relations `pr* = rp`,
/// `ps* = sp` and `p = p*` of the orbit representations are added.
pub fn pqrs_report(quad: &PQRSQuad, tol: f64) -> VerifyReport {
    let dim = quad.dim();
    let lambda = quad.lambda;
    let mut report = VerifyReport::new(FamilyDescriptor {
        kind: "pqrs".into(),
        n: 4,
        lambda: Some([lambda.re, lambda.im]),
        dim,
    });
    let ix: Vec<usize> = match &quad.interior {
        Some(ix) => ix.clone(),
        None => (0..dim).collect(),
    };
    let (p, q, r, s) = (&quad.p, &quad.q, &quad.r, &quad.s);
    let scale = quadratic_scale([p, q, r, s]);
    let (pe, qe, re_, se) = (cols(p, &ix), cols(q, &ix), cols(r, &ix), cols(s, &ix));
    let one = scalar_cols(dim, C64::new(1.0, 0.0), &ix);
    let norm = |m: CMat| max_col_norm(&m) / scale;

    // pr − r + rp
    let pr = p.matmul(&re_);
    let rp = r.matmul(&pe);
    report.push("pr = r(1-p)", norm(&(&pr - &re_) + &rp), tol);
    // ps − (λ−1)s + sp
    let ps = p.matmul(&se);
    let sp = s.matmul(&pe);
    report.push(
        "ps = s(lambda-1-p)",
        norm(&(&ps - &se.scale(lambda - 1.0)) + &sp),
        tol,
    );
    // r² − p + p²
    let r2 = r.matmul(&re_);
    let p2 = p.matmul(&pe);
    report.push("r^2 = p(1-p)", norm(&(&r2 - &pe) + &p2), tol);
    // s² − q + q²
    let s2 = s.matmul(&se);
    let q2 = q.matmul(&qe);
    report.push("s^2 = q(1-q)", norm(&(&s2 - &qe) + &q2), tol);
    report.push(
        "q = lambda/2 - p",
        norm(&(&qe + &pe) - &one.scale(lambda * 0.5)),
        tol,
    );
    if lambda == C64::new(0.0, 0.0) {
        let r_star = r.adjoint();
        let s_star = s.adjoint();
        let prs = p.matmul(&cols(&r_star, &ix));
        report.push("pr* = rp", norm(&prs - &rp), tol);
        let pss = p.matmul(&cols(&s_star, &ix));
        report.push("ps* = sp", norm(&pss - &sp), tol);
        report.push("p = p*", norm(&pe - &cols(&p.adjoint(), &ix)), tol);
    }
    report
}

/// Redraw budget for [`nonzero_word`].
const WORD_REDRAWS: usize = 64;

/// A random word and the product of its letter norms, an a priori bound.
fn random_word<R: Rng + ?Sized>(
    fam: &IdempotentFamily,
    letter_norms: &[f64],
    word_len: usize,
    rng: &mut R,
) -> (CMat, f64) {
    let len = rng.random_range(1..=word_len);
    let mut w = CMat::identity(fam.dim());
    let mut bound = 1.0f64;
    for _ in 0..len {
        // Letter n is the identity.
        let letter = rng.random_range(0..=fam.n());
        if letter < fam.n() {
            w = w.matmul(&fam.q[letter]);
            bound *= letter_norms[letter].max(1.0);
        }
    }
    (w, bound)
}

fn nonzero_word<R: Rng + ?Sized>(
    fam: &IdempotentFamily,
    letter_norms: &[f64],
    word_len: usize,
    rng: &mut R,
) -> CMat {
    let mut last = CMat::zeros(fam.dim(), fam.dim());
    for _ in 0..WORD_REDRAWS {
        let (w, bound) = random_word(fam, letter_norms, word_len, rng);
        if op_norm(&w) > 1e-10 * bound {
            return w;
        }
        last = w;
    }
    last
}

/// Alternating sum over `S₄` of `x_σ(1)x_σ(2)x_σ(3)x_σ(4)`.
pub fn standard_polynomial(xs: &[CMat; 4]) -> CMat {
    let n = xs[0].rows();
    let mut total = CMat::zeros(n, n);
    for perm in permutations4() {
        let prod = CMat::product(perm.0.iter().map(|&k| &xs[k]));
        total = if perm.1 > 0 {
            &total + &prod
        } else {
            &total - &prod
        };
    }
    total
}

fn permutations4() -> Vec<([usize; 4], i8)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if distinct {
                        let inversions = (0..4)
                            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                            .filter(|&(i, j)| p[i] > p[j])
                            .count();
                        out.push((p, if inversions % 2 == 0 { 1 } else { -1 }));
                    }
                }
            }
        }
    }
    out
}

/// Residual of the standard identity of degree 4 on random arguments.
///
/// Each argument is a combination, with complex normal coefficients, of four
/// words of length `1..=word_len` over `{q_1, .., q_n, I}`. Returns, per trial,
/// the operator norm of the alternating sum divided by the product of the
/// argument norms. Words that vanish in the algebra (such as `q₁(1 − q₁)`
/// inside a complementary pair) are redrawn: they survive only as rounding
/// noise, which the normalization would otherwise amplify.
pub fn s4_identity_trials<R: Rng + ?Sized>(
    fam: &IdempotentFamily,
    trials: usize,
    word_len: usize,
    rng: &mut R,
) -> Result<Vec<f64>, VerifyError> {
    if fam.n() != 4 {
        return Err(VerifyError::BadArgument(format!(
            "need four generators, got {}",
            fam.n()
        )));
    }
    if trials == 0 {
        return Err(VerifyError::BadArgument("trials must be at least 1".into()));
    }
    if word_len == 0 || word_len > S4_MAX_WORD {
        return Err(VerifyError::BadArgument(format!(
            "word length must be in 1..={S4_MAX_WORD}, got {word_len}"
        )));
    }
    let n = fam.dim();
    let letter_norms: Vec<f64> = fam.q.iter().map(op_norm).collect();
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let xs: [CMat; 4] = std::array::from_fn(|_| {
            (0..S4_TERMS).fold(CMat::zeros(n, n), |acc, _| {
                let c = complex_normal(rng);
                &acc + &nonzero_word(fam, &letter_norms, word_len, rng).scale(c)
            })
        });
        let denom: f64 = xs.iter().map(op_norm).product();
        let num = op_norm(&standard_polynomial(&xs));
        out.push(if denom > 0.0 { num / denom } else { 0.0 });
    }
    Ok(out)
}

/// Maximum of [`s4_identity_trials`].
pub fn s4_identity_residual<R: Rng + ?Sized>(
    fam: &IdempotentFamily,
    trials: usize,
    word_len: usize,
    rng: &mut R,
) -> Result<f64, VerifyError> {
    Ok(s4_identity_trials(fam, trials, word_len, rng)?
        .into_iter()
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceCheck {
    pub trace_sum: C64,
    /// `λ·dim`, absent for families without a sum relation.
    pub expected: Option<C64>,
    pub traces: Vec<C64>,
    pub pass: bool,
}

/// `Σ tr q_i` against `λ·dim`, and integrality of every `tr q_i`. Families
/// without a sum relation are held to integrality only.
pub fn trace_lambda_check(fam: &IdempotentFamily) -> Result<TraceCheck, VerifyError> {
    if fam.is_truncated() {
        return Err(VerifyError::Truncated);
    }
    let traces: Vec<C64> = fam.q.iter().map(CMat::trace).collect();
    let trace_sum: C64 = traces.iter().sum();
    let expected = fam.lambda.map(|l| l * fam.dim() as f64);
    let integral = traces.iter().all(|t| {
        t.im.abs() <= TRACE_TOL && t.re > -TRACE_TOL && (t.re - t.re.round()).abs() <= TRACE_TOL
    });
    let pass = integral && expected.is_none_or(|e| (trace_sum - e).norm() <= TRACE_TOL);
    Ok(TraceCheck {
        trace_sum,
        expected,
        traces,
        pass,
    })
}
