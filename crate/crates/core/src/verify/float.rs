//! Floating-point rank decisions by singular values.

use nalgebra::{Complex, ComplexField, DMatrix, SVD};

use crate::error::{Error, Result};

/// Exponent `k` of the default relative tolerance `max(dim) * sigma_1 * 2^-k`.
pub const DEFAULT_TOLERANCE_BITS: i32 = 40;

/// Iteration cap of the singular value decomposition.
pub const SVD_MAX_ITERATIONS: usize = 10_000;

/// Rank of a real or complex matrix: singular values above
/// `max(rows, cols) * sigma_1 * 2^-bits` are counted.
pub fn svd_rank<T>(m: &DMatrix<T>, bits: i32) -> Result<usize>
where
    T: ComplexField<RealField = f64>,
{
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    if !m.iter().all(|v| v.clone().modulus().is_finite()) {
        return Err(Error::Numeric("non-finite matrix entry".into()));
    }
    let svd = SVD::try_new(m.clone(), false, false, f64::EPSILON, SVD_MAX_ITERATIONS)
        .ok_or_else(|| Error::Numeric("singular value iteration did not converge".into()))?;
    let sv = svd.singular_values;
    let s1 = sv.iter().cloned().fold(0.0, f64::max);
    if s1 == 0.0 {
        return Ok(0);
    }
    let tol = m.nrows().max(m.ncols()) as f64 * s1 * 2f64.powi(-bits);
    Ok(sv.iter().filter(|&&s| s > tol).count())
}

pub fn complexify(m: &DMatrix<f64>) -> DMatrix<Complex<f64>> {
    m.map(|v| Complex::new(v, 0.0))
}

/// `lambda * I - a` over the complex numbers.
pub fn shifted(a: &DMatrix<f64>, lambda: Complex<f64>) -> DMatrix<Complex<f64>> {
    let n = a.nrows();
    DMatrix::from_fn(n, n, |r, c| {
        let d = if r == c { lambda } else { Complex::new(0.0, 0.0) };
        d - Complex::new(a[(r, c)], 0.0)
    })
}

pub fn hstack<T: nalgebra::Scalar + num_traits::Zero>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    let mut out = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out.view_mut((0, a.ncols()), (b.nrows(), b.ncols())).copy_from(b);
    out
}

/// `[B, AB, ..., A^{n-1}B]` with every block column scaled to unit norm,
/// which leaves the rank unchanged and keeps magnitudes comparable.
pub fn controllability_matrix(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let m = b.ncols();
    let mut out = DMatrix::zeros(n, n * m);
    let mut block = b.clone();
    for k in 0..n {
        for j in 0..m {
            let mut col = block.column(j).clone_owned();
            let norm = col.norm();
            if norm > 0.0 {
                col /= norm;
            }
            out.set_column(k * m + j, &col);
        }
        block = a * &block;
        for j in 0..m {
            let norm = block.column(j).norm();
            if norm > 0.0 {
                let scaled = block.column(j) / norm;
                block.set_column(j, &scaled);
            }
        }
    }
    out
}
