use nalgebra::DMatrix;

use super::{CMat, NumericsError, C64, HERMITIAN_TOL, PSD_CLAMP};

pub(crate) fn to_na(m: &CMat) -> DMatrix<C64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.entries())
}

pub(crate) fn from_na(m: &DMatrix<C64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn require_square(m: &CMat) -> Result<(), NumericsError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(NumericsError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Largest entrywise deviation of `m` from its adjoint, relative to
/// `max(1, max|m_ij|)`.
pub fn hermitian_deviation(m: &CMat) -> f64 {
    let n = m.rows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev / m.max_abs().max(1.0)
}

fn require_hermitian(m: &CMat) -> Result<(), NumericsError> {
    require_square(m)?;
    let deviation = hermitian_deviation(m);
    if deviation > HERMITIAN_TOL {
        return Err(NumericsError::NotHermitian { deviation });
    }
    Ok(())
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = to_na(m).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Operator (spectral) norm.
pub fn op_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Number of singular values above `tol` times the largest one (or `tol`
/// itself when the matrix is zero).
pub fn rank(m: &CMat, tol: f64) -> usize {
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    let cutoff = tol * if top > 0.0 { top } else { 1.0 };
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// as columns.
pub fn eig_hermitian(m: &CMat) -> Result<(Vec<f64>, CMat), NumericsError> {
    require_hermitian(m)?;
    let n = m.rows();
    if n == 0 {
        return Ok((Vec::new(), CMat::zeros(0, 0)));
    }
    let sym = (m + &m.adjoint()).scale_re(0.5);
    let eig = to_na(&sym).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Eigenvalues in `[-PSD_CLAMP, 0)` are clamped to zero.
pub fn hermitian_psd_sqrt(m: &CMat) -> Result<CMat, NumericsError> {
    let (values, v) = eig_hermitian(m)?;
    let scale = m.max_abs().max(1.0);
    let mut roots = Vec::with_capacity(values.len());
    for &x in &values {
        if x < -PSD_CLAMP * scale {
            return Err(NumericsError::NotPsd { eigenvalue: x });
        }
        roots.push(x.max(0.0).sqrt());
    }
    let vd = CMat::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * roots[j]);
    let out = vd.matmul(&v.adjoint());
    Ok((&out + &out.adjoint()).scale_re(0.5))
}

/// Orthonormal basis of the (numerical) null space, one vector per entry.
/// A singular value counts as zero when it is at most `tol` times the
/// largest singular value.
pub fn null_space(m: &CMat, tol: f64) -> Vec<Vec<C64>> {
    null_space_scaled(m, tol, 0.0)
}

/// Like [`null_space`], but singular values are compared against
/// `tol · max(σ_max, scale)`. A system assembled from inputs of size `scale`
/// whose entries cancel almost exactly then counts as zero.
pub fn null_space_scaled(m: &CMat, tol: f64, scale: f64) -> Vec<Vec<C64>> {
    let n = m.cols();
    if n == 0 {
        return Vec::new();
    }
    if m.max_abs() == 0.0 {
        // The SVD of an exact zero matrix is not reliable in nalgebra.
        return (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| C64::new(if j == k { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
    }
    // Pad to at least square so the SVD yields a full right basis.
    let a = if m.rows() < n {
        let mut p = CMat::zeros(n, n);
        p.set_block(0, 0, m);
        p
    } else {
        m.clone()
    };
    let svd = to_na(&a).svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let top = svd
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
        .max(scale);
    let cutoff = tol * if top > 0.0 { top } else { 1.0 };
    (0..v_t.nrows())
        .filter(|&k| svd.singular_values[k] <= cutoff)
        .map(|k| (0..n).map(|j| v_t[(k, j)].conj()).collect())
        .collect()
}

/// Singular values paired with right singular vectors, one pair per column
/// of `m` (short matrices are zero-padded so every column gets a pair).
pub fn svd_right(m: &CMat) -> Vec<(f64, Vec<C64>)> {
    let n = m.cols();
    if n == 0 {
        return Vec::new();
    }
    let a = if m.rows() < n {
        let mut p = CMat::zeros(n, n);
        p.set_block(0, 0, m);
        p
    } else {
        m.clone()
    };
    let svd = to_na(&a).svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    (0..v_t.nrows())
        .map(|k| {
            (
                svd.singular_values[k],
                (0..n).map(|j| v_t[(k, j)].conj()).collect(),
            )
        })
        .collect()
}

/// Matrix inverse through LU.
pub fn inverse(m: &CMat) -> Result<CMat, NumericsError> {
    require_square(m)?;
    to_na(m)
        .try_inverse()
        .map(|x| from_na(&x))
        .ok_or(NumericsError::Singular)
}
