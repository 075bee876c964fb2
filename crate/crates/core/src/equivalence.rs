//! Intertwiners between families, irreducibility, unitary equivalence and
//! unitarization of non-orthogonal families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::families::IdempotentFamily;
use crate::numerics::{
    eig_hermitian, hermitian_deviation, hermitian_psd_sqrt, inverse, CMat, NumericsError, C64, I,
};

/// Relative rank tolerance for intertwiner null spaces.
pub const HOM_RANK_TOL: f64 = 1e-8;

/// Largest intertwining residual accepted for a returned unitary.
pub const INTERTWINE_TOL: f64 = 1e-8;

/// Above this many unknowns the star-closed system is solved in the
/// eigenbasis of a generic self-adjoint element instead of densely.
const DENSE_MAX_UNKNOWNS: usize = 400;

/// Singular values above this fraction of the largest are settled from the
/// normal matrix alone.
const GRAM_SPLIT: f64 = 1e-4;

const GENERIC_SEED: u64 = 0x1d3e_55;
const PD_SEED: u64 = 0x9d_0c1;
const PD_RESTARTS: usize = 100;
const PD_STEPS: usize = 300;
const REFINE_ROUNDS: usize = 2;
const REFINE_TOL: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquivalenceError {
    #[error("families are incompatible: {0}")]
    DimensionMismatch(String),
    #[error("intertwiners are not defined for truncated families")]
    Truncated,
    #[error("family is not irreducible")]
    NotIrreducible,
    #[error("no positive definite solution found (best minimum eigenvalue ratio {best:e})")]
    NoPdSolution { best: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Solutions of `C·A_i = B_i·C`, as `dim(B) × dim(A)` matrices.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub dim: usize,
    pub basis: Vec<CMat>,
}

/// Generator pairs `(A_i, B_i)`, followed by the adjoint pairs when asked.
fn generator_pairs<'a>(
    a: &'a [CMat],
    b: &'a [CMat],
    astar: &'a [CMat],
    bstar: &'a [CMat],
    star: bool,
) -> Vec<(&'a CMat, &'a CMat)> {
    let mut pairs: Vec<_> = a.iter().zip(b).collect();
    if star {
        pairs.extend(astar.iter().zip(bstar));
    }
    pairs
}

/// Intertwiners between two generator lists of equal length.
pub fn hom_space_mats(
    a: &[CMat],
    b: &[CMat],
    with_star: bool,
) -> Result<HomSpace, EquivalenceError> {
    if a.len() != b.len() {
        return Err(EquivalenceError::DimensionMismatch(format!(
            "{} generators against {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(EquivalenceError::DimensionMismatch("no generators".into()));
    }
    let astar: Vec<CMat> = a.iter().map(CMat::adjoint).collect();
    let bstar: Vec<CMat> = b.iter().map(CMat::adjoint).collect();
    let unknowns = a[0].rows() * b[0].rows();
    if with_star && unknowns > DENSE_MAX_UNKNOWNS {
        Ok(hom_reduced(a, b, &astar, &bstar))
    } else {
        Ok(hom_dense(&generator_pairs(a, b, &astar, &bstar, with_star)))
    }
}

pub fn hom_space(
    fam_a: &IdempotentFamily,
    fam_b: &IdempotentFamily,
    with_star: bool,
) -> Result<HomSpace, EquivalenceError> {
    if fam_a.is_truncated() || fam_b.is_truncated() {
        return Err(EquivalenceError::Truncated);
    }
    hom_space_mats(&fam_a.q, &fam_b.q, with_star)
}

/// `vec(C·A − B·C) = (Aᵀ ⊗ I − I ⊗ B)·vec(C)` stacked over all pairs, with
/// column-major `vec`.
fn hom_dense(pairs: &[(&CMat, &CMat)]) -> HomSpace {
    let na = pairs[0].0.rows();
    let nb = pairs[0].1.rows();
    let u = na * nb;
    let mut k = SparseCols::new(pairs.len() * u, u);
    for (g, (a, b)) in pairs.iter().enumerate() {
        let off = g * u;
        // Row index of (C·A − B·C)[i, j] is j·nb + i; unknown C[x, y] is y·nb + x.
        for j in 0..na {
            for i in 0..nb {
                let row = off + j * nb + i;
                for y in 0..na {
                    k.add(row, y * nb + i, a[(y, j)]);
                }
                for x in 0..nb {
                    k.add(row, j * nb + x, -b[(i, x)]);
                }
            }
        }
    }
    let scale = pairs
        .iter()
        .map(|(a, b)| a.max_abs().max(b.max_abs()))
        .fold(0.0, f64::max);
    let basis: Vec<CMat> = k
        .null_space(HOM_RANK_TOL, scale)
        .into_iter()
        .map(|v| CMat::from_fn(nb, na, |x, y| v[y * nb + x]))
        .collect();
    HomSpace {
        dim: basis.len(),
        basis,
    }
}

/// Column-sparse system matrix. Intertwiner systems have a handful of
/// nonzeros per row, so the normal matrix is cheap to form.
struct SparseCols {
    rows: usize,
    cols: Vec<Vec<(usize, C64)>>,
}

impl SparseCols {
    fn new(rows: usize, cols: usize) -> Self {
        SparseCols {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    fn add(&mut self, row: usize, col: usize, z: C64) {
        if z != C64::new(0.0, 0.0) {
            self.cols[col].push((row, z));
        }
    }

    fn finish(&mut self) {
        for col in &mut self.cols {
            col.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, C64)> = Vec::with_capacity(col.len());
            for &(r, z) in col.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 += z,
                    _ => merged.push((r, z)),
                }
            }
            *col = merged;
        }
    }

    /// `K·w` as a dense vector.
    fn apply(&self, w: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for (col, &x) in self.cols.iter().zip(w) {
            for &(r, z) in col {
                out[r] += z * x;
            }
        }
        out
    }

    /// Null space at relative singular-value tolerance `tol`, measured
    /// against `max(σ_max, scale)`.
    ///
    /// The normal matrix `K*K` separates the clearly nonzero singular values;
    /// the remaining small subspace `W` is then resolved by an SVD of `K·W`,
    /// so the final rank decision sees singular values of `K` itself rather
    /// than their squares.
    fn null_space(mut self, tol: f64, scale: f64) -> Vec<Vec<C64>> {
        self.finish();
        let u = self.cols.len();
        if u == 0 {
            return Vec::new();
        }
        let mut dense = vec![C64::new(0.0, 0.0); self.rows];
        let mut gram = CMat::zeros(u, u);
        for t in 0..u {
            for &(r, z) in &self.cols[t] {
                dense[r] = z;
            }
            for t2 in t..u {
                let dot: C64 = self.cols[t2]
                    .iter()
                    .map(|&(r, z)| dense[r].conj() * z)
                    .sum();
                gram[(t, t2)] = dot;
                gram[(t2, t)] = dot.conj();
            }
            for &(r, _) in &self.cols[t] {
                dense[r] = C64::new(0.0, 0.0);
            }
        }
        let (vals, vecs) = eig_hermitian(&gram).expect("normal matrix is Hermitian");
        let sigma_max = vals.last().copied().unwrap_or(0.0).max(0.0).sqrt();
        let top = sigma_max.max(scale);
        if top == 0.0 {
            return (0..u)
                .map(|k| {
                    (0..u)
                        .map(|j| C64::new(if j == k { 1.0 } else { 0.0 }, 0.0))
                        .collect()
                })
                .collect();
        }
        let loose = (GRAM_SPLIT * top).powi(2);
        let small: Vec<usize> = (0..u).filter(|&k| vals[k] <= loose).collect();
        if small.is_empty() {
            return Vec::new();
        }
        let w = vecs.select(&(0..u).collect::<Vec<_>>(), &small);
        let mut kw = CMat::zeros(self.rows, small.len());
        for c in 0..small.len() {
            let y = self.apply(&w.column(c));
            for (r, z) in y.into_iter().enumerate() {
                kw[(r, c)] = z;
            }
        }
        let svd = crate::numerics::svd_right(&kw);
        svd.into_iter()
            .filter(|(sigma, _)| *sigma <= tol * top)
            .map(|(_, v)| w.mul_vec(&v))
            .collect()
    }
}

/// A fixed generic self-adjoint element of the *-algebra generated by the
/// list, built from the generators and their pairwise products.
fn generic_hermitian(q: &[CMat], qstar: &[CMat], coef: &[f64]) -> CMat {
    let n = q[0].rows();
    let mut h = CMat::zeros(n, n);
    let mut c = coef.iter().copied();
    let mut add = |w: &CMat, ws: &CMat, h: &mut CMat| {
        let (x, y) = (c.next().unwrap(), c.next().unwrap());
        *h = &*h + &(w + ws).scale_re(x);
        *h = &*h + &(w - ws).scale(I * y);
    };
    for (w, ws) in q.iter().zip(qstar) {
        add(w, ws, &mut h);
    }
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            let w = q[i].matmul(&q[j]);
            let ws = qstar[j].matmul(&qstar[i]);
            add(&w, &ws, &mut h);
        }
    }
    h
}

/// An intertwiner of the star-closed system commutes with any self-adjoint
/// element built the same way on both sides, so in the eigenbases of those
/// elements it only couples equal eigenvalues.
fn hom_reduced(a: &[CMat], b: &[CMat], astar: &[CMat], bstar: &[CMat]) -> HomSpace {
    let n = a.len();
    let mut rng = ChaCha8Rng::seed_from_u64(GENERIC_SEED);
    let coef: Vec<f64> = (0..n * (n + 1))
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let ha = generic_hermitian(a, astar, &coef);
    let hb = generic_hermitian(b, bstar, &coef);
    let (la, va) = eig_hermitian(&ha).expect("symmetrized element is Hermitian");
    let (lb, vb) = eig_hermitian(&hb).expect("symmetrized element is Hermitian");
    let top = la.iter().chain(&lb).fold(0.0f64, |m, x| m.max(x.abs()));
    let tau = 1e-6 * (1.0 + top);
    let (na, nb) = (la.len(), lb.len());
    let pattern: Vec<(usize, usize)> = (0..na)
        .flat_map(|ia| (0..nb).map(move |ib| (ib, ia)))
        .filter(|&(ib, ia)| (la[ia] - lb[ib]).abs() <= tau)
        .collect();
    if pattern.is_empty() {
        return HomSpace {
            dim: 0,
            basis: Vec::new(),
        };
    }
    let (va_star, vb_star) = (va.adjoint(), vb.adjoint());
    let gens: Vec<(CMat, CMat)> = a
        .iter()
        .zip(b)
        .chain(astar.iter().zip(bstar))
        .map(|(x, y)| (va_star.matmul(x).matmul(&va), vb_star.matmul(y).matmul(&vb)))
        .collect();
    let u = pattern.len();
    let block = na * nb;
    let mut k = SparseCols::new(gens.len() * block, u);
    for (g, (ap, bp)) in gens.iter().enumerate() {
        let off = g * block;
        for (t, &(ib, ia)) in pattern.iter().enumerate() {
            // (C'A')[ib, j] picks up A'[ia, j]; (B'C')[i, ia] picks up B'[i, ib].
            for j in 0..na {
                k.add(off + ib * na + j, t, ap[(ia, j)]);
            }
            for i in 0..nb {
                k.add(off + i * na + ia, t, -bp[(i, ib)]);
            }
        }
    }
    let scale = gens
        .iter()
        .map(|(a, b)| a.max_abs().max(b.max_abs()))
        .fold(0.0, f64::max);
    let basis: Vec<CMat> = k
        .null_space(HOM_RANK_TOL, scale)
        .into_iter()
        .map(|v| {
            let mut c = CMat::zeros(nb, na);
            for (t, &(ib, ia)) in pattern.iter().enumerate() {
                c[(ib, ia)] = v[t];
            }
            vb.matmul(&c).matmul(&va_star)
        })
        .collect();
    HomSpace {
        dim: basis.len(),
        basis,
    }
}

/// Largest `‖C·A_i − B_i·C‖_F` over the generators, relative to the sizes of
/// `C` and the generators.
pub fn intertwining_residual(c: &CMat, a: &[CMat], b: &[CMat]) -> f64 {
    let scale = c.frobenius_norm().max(f64::MIN_POSITIVE)
        * a.iter().chain(b).map(CMat::max_abs).fold(1.0, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (&c.matmul(x) - &y.matmul(c)).frobenius_norm())
        .fold(0.0, f64::max)
        / scale
}

pub fn is_irreducible(fam: &IdempotentFamily) -> Result<bool, EquivalenceError> {
    Ok(hom_space(fam, fam, true)?.dim == 1)
}

/// Unitary factor of the polar decomposition `C = U·|C|`, or `None` when `C`
/// is singular.
pub fn polar_unitary(c: &CMat) -> Result<Option<CMat>, EquivalenceError> {
    let abs = hermitian_psd_sqrt(&c.adjoint().matmul(c))?;
    match inverse(&abs) {
        Ok(inv) => {
            let (vals, _) = eig_hermitian(&abs)?;
            let top = vals.last().copied().unwrap_or(0.0);
            if vals.first().copied().unwrap_or(0.0) <= 1e-12 * top {
                return Ok(None);
            }
            Ok(Some(c.matmul(&inv)))
        }
        Err(NumericsError::Singular) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// A unitary `U` with `U·A_i = B_i·U`, when the irreducible families are
/// equivalent.
pub fn unitary_equivalent(
    fam_a: &IdempotentFamily,
    fam_b: &IdempotentFamily,
) -> Result<Option<CMat>, EquivalenceError> {
    if fam_a.dim() != fam_b.dim() {
        return Err(EquivalenceError::DimensionMismatch(format!(
            "dimensions {} and {}",
            fam_a.dim(),
            fam_b.dim()
        )));
    }
    if !is_irreducible(fam_a)? || !is_irreducible(fam_b)? {
        return Err(EquivalenceError::NotIrreducible);
    }
    let hom = hom_space(fam_a, fam_b, true)?;
    if hom.dim != 1 {
        return Ok(None);
    }
    let Some(u) = polar_unitary(&hom.basis[0])? else {
        return Ok(None);
    };
    let ok = intertwining_residual(&u, &fam_a.q, &fam_b.q) <= INTERTWINE_TOL
        && intertwining_residual(&u, &fam_a.q_star, &fam_b.q_star) <= INTERTWINE_TOL;
    Ok(ok.then_some(u))
}

#[derive(Debug, Clone)]
pub struct Unitarized {
    /// The positive definite metric `G` with `G·q_i = q_i*·G`.
    pub g: CMat,
    pub star_fam: IdempotentFamily,
    /// Smallest over largest eigenvalue of `G`.
    pub conditioning: f64,
    /// Largest `‖x − x*‖` over the conjugated generators, measured before
    /// the final symmetrization.
    pub raw_deviation: f64,
}

/// Real orthonormal basis (trace inner product) of the Hermitian solutions of
/// `G·q_i = q_i*·G`.
fn hermitian_solutions(q: &[CMat]) -> Vec<CMat> {
    let n = q[0].rows();
    let qs: Vec<CMat> = q.iter().map(CMat::adjoint).collect();
    // G·q_i = q_i*·G is C·A = B·C with A = q_i and B = q_i*.
    let pairs: Vec<(&CMat, &CMat)> = q.iter().zip(&qs).collect();
    let sols = hom_dense(&pairs).basis;
    let mut herm: Vec<CMat> = Vec::new();
    for s in &sols {
        let sa = s.adjoint();
        herm.push((s + &sa).scale_re(0.5));
        herm.push((s - &sa).scale(I * 0.5));
    }
    // Gram-Schmidt over the reals; the candidates span the space twice over.
    let mut basis: Vec<CMat> = Vec::new();
    for h in herm {
        let mut v = h;
        for _ in 0..2 {
            for b in &basis {
                let dot = real_dot(b, &v);
                v = &v - &b.scale_re(dot);
            }
        }
        let norm = v.frobenius_norm();
        if norm > 1e-6 {
            let v = v.scale_re(1.0 / norm);
            basis.push((&v + &v.adjoint()).scale_re(0.5));
        }
    }
    debug_assert!(basis.iter().all(|b| b.rows() == n));
    basis
}

fn real_dot(a: &CMat, b: &CMat) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x.conj() * y).re)
        .sum()
}

fn combine(basis: &[CMat], c: &[f64]) -> CMat {
    let n = basis[0].rows();
    basis
        .iter()
        .zip(c)
        .fold(CMat::zeros(n, n), |acc, (b, &x)| &acc + &b.scale_re(x))
}

/// Maximizes `λ_min(G(c))` over `tr G(c) = 1` by supergradient ascent.
/// Returns the best `λ_min/λ_max` ratio seen and its coefficients.
fn ascend(basis: &[CMat], traces: &[f64], start: &[f64]) -> Option<(f64, Vec<f64>)> {
    let t0: f64 = start.iter().zip(traces).map(|(a, b)| a * b).sum();
    if t0.abs() < 1e-12 {
        return None;
    }
    let tt: f64 = traces.iter().map(|t| t * t).sum();
    let mut c: Vec<f64> = start.iter().map(|x| x / t0).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for step in 0..PD_STEPS {
        let g = combine(basis, &c);
        let (vals, vecs) = eig_hermitian(&g).ok()?;
        let top = vals.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let ratio = vals[0] / top;
        if best.as_ref().is_none_or(|b| ratio > b.0) {
            best = Some((ratio, c.clone()));
        }
        let v = vecs.column(0);
        let mut grad: Vec<f64> = basis
            .iter()
            .map(|h| {
                let hv = h.mul_vec(&v);
                v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum()
            })
            .collect();
        let along: f64 = grad.iter().zip(traces).map(|(a, b)| a * b).sum::<f64>() / tt;
        for (g, t) in grad.iter_mut().zip(traces) {
            *g -= along * t;
        }
        let gn = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
        if gn < 1e-14 {
            break;
        }
        let cn = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        let len = 0.5 / ((step + 1) as f64).sqrt() * cn / gn;
        for (x, g) in c.iter_mut().zip(&grad) {
            *x += len * g;
        }
    }
    best
}

/// Positive definite solution of `G·q_i = q_i*·G`, scaled to max entry 1,
/// with its `λ_min/λ_max` ratio.
fn metric(q: &[CMat]) -> Result<(f64, CMat), EquivalenceError> {
    let basis = hermitian_solutions(q);
    if basis.is_empty() {
        return Err(EquivalenceError::NoPdSolution {
            best: f64::NEG_INFINITY,
        });
    }
    let traces: Vec<f64> = basis.iter().map(|b| b.trace().re).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(PD_SEED);
    // The projection of I onto the solution space comes first; random
    // restarts only run while no positive definite element has been found.
    let mut start = traces.clone();
    for _ in 0..=PD_RESTARTS {
        if let Some(found) = ascend(&basis, &traces, &start) {
            if best.as_ref().is_none_or(|b| found.0 > b.0) {
                best = Some(found);
            }
        }
        if best.as_ref().is_some_and(|b| b.0 > 0.0) {
            break;
        }
        start = (0..basis.len())
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
    }
    let (ratio, c) = best.ok_or(EquivalenceError::NoPdSolution {
        best: f64::NEG_INFINITY,
    })?;
    if ratio <= 0.0 {
        return Err(EquivalenceError::NoPdSolution { best: ratio });
    }
    let g = combine(&basis, &c);
    Ok((ratio, g.scale_re(1.0 / g.max_abs())))
}

/// `(G^{1/2}, G^{-1/2})` for positive definite `G`.
fn half_powers(g: &CMat) -> Result<(CMat, CMat), EquivalenceError> {
    let (vals, v) = eig_hermitian(g)?;
    let root = CMat::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * vals[j].sqrt());
    let inv_root = CMat::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] / vals[j].sqrt());
    Ok((root.matmul(&v.adjoint()), inv_root.matmul(&v.adjoint())))
}

/// Finds a positive definite `G` with `G·q_i = q_i*·G` and conjugates the
/// family by `G^{1/2}` into Hermitian idempotents.
pub fn unitarize(fam: &IdempotentFamily) -> Result<Unitarized, EquivalenceError> {
    if fam.is_truncated() {
        return Err(EquivalenceError::Truncated);
    }
    if let Some(l) = fam.lambda {
        if l.im != 0.0 {
            return Err(EquivalenceError::Precondition(format!(
                "lambda {l} is not real"
            )));
        }
        if l.re == 2.0 {
            return Err(EquivalenceError::Precondition(
                "lambda must differ from 2".into(),
            ));
        }
    }
    let (_, mut g) = metric(&fam.q)?;
    let (mut g_half, mut g_neg_half) = half_powers(&g)?;
    let mut star_fam = fam.similar(&g_half, &g_neg_half);
    // A second solve on the nearly Hermitian family is well conditioned and
    // removes most of the error of the first.
    for _ in 0..REFINE_ROUNDS {
        if star_fam
            .q
            .iter()
            .map(hermitian_deviation)
            .fold(0.0, f64::max)
            < REFINE_TOL
        {
            break;
        }
        let Ok((_, g2)) = metric(&star_fam.q) else {
            break;
        };
        let total = g_half.matmul(&g2).matmul(&g_half);
        let total = (&total + &total.adjoint()).scale_re(0.5);
        g = total.scale_re(1.0 / total.max_abs());
        (g_half, g_neg_half) = half_powers(&g)?;
        star_fam = fam.similar(&g_half, &g_neg_half);
    }
    let (vals, _) = eig_hermitian(&g)?;
    let ratio = vals[0] / vals[vals.len() - 1];
    let raw_deviation = star_fam
        .q
        .iter()
        .map(hermitian_deviation)
        .fold(0.0, f64::max);
    // Symmetrize away the rounding so downstream Hermitian solvers accept it.
    if raw_deviation < 1e-6 {
        star_fam.q = star_fam
            .q
            .iter()
            .map(|m| (m + &m.adjoint()).scale_re(0.5))
            .collect();
        star_fam.q_star = star_fam.q.clone();
    }
    Ok(Unitarized {
        g,
        star_fam,
        conditioning: ratio,
        raw_deviation,
    })
}
