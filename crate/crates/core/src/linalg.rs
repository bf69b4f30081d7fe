//! Small dense complex linear-algebra helpers on top of nalgebra.
//!
//! Everything here operates on `DMatrix<Complex<f64>>`; the matrices involved
//! are tiny (ambient dimensions of the classical factors), so plain dense
//! routines are used throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as Cx;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Cx>;
pub type CVec = DVector<Cx>;

/// Entrywise conjugate of a matrix (no transpose).
pub fn conj_mat(m: &CMat) -> CMat {
    m.map(|c| c.conj())
}

/// Entrywise conjugate of a vector.
pub fn conj_vec(v: &CVec) -> CVec {
    v.map(|c| c.conj())
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    m.singular_values().max()
}

/// Ratio of extreme singular values; `f64::INFINITY` for a singular matrix.
pub fn cond_number(m: &CMat) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// `(h + h*)/2` before factoring; returns eigenvalues (ascending) and the
/// unitary of column eigenvectors.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let sym = (h + h.adjoint()) * Cx::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = h.nrows();
    let mut vecs = CMat::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Positive semi-definite square root of a Hermitian matrix.
///
/// Eigenvalues below `-neg_tol` are rejected; small negative values inside the
/// tolerance are clamped to zero before taking square roots.
pub fn hermitian_sqrt(h: &CMat, neg_tol: f64) -> Result<CMat> {
    let (vals, vecs) = hermitian_eigen(h);
    let scale = vals.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let mut d = CMat::zeros(h.nrows(), h.ncols());
    for (i, &v) in vals.iter().enumerate() {
        if v < -neg_tol * scale {
            return Err(Error::NumericalFailure(format!(
                "hermitian square root: eigenvalue {v:.3e} below tolerance"
            )));
        }
        d[(i, i)] = Cx::new(v.max(0.0).sqrt(), 0.0);
    }
    Ok(&vecs * d * vecs.adjoint())
}

/// Solve `m x = rhs` by LU with a condition-number guard.
pub fn guarded_solve(m: &CMat, rhs: &CVec, cond_limit: f64) -> Result<CVec> {
    let cond = cond_number(m);
    if !cond.is_finite() || cond > cond_limit {
        return Err(Error::NumericalFailure(format!(
            "linear solve: condition number {cond:.3e} exceeds limit {cond_limit:.1e}"
        )));
    }
    m.clone()
        .lu()
        .solve(rhs)
        .ok_or_else(|| Error::NumericalFailure("linear solve: LU factorization failed".into()))
}

/// Inverse with the same condition guard as [`guarded_solve`].
pub fn guarded_inverse(m: &CMat, cond_limit: f64) -> Result<CMat> {
    let cond = cond_number(m);
    if !cond.is_finite() || cond > cond_limit {
        return Err(Error::NumericalFailure(format!(
            "matrix inverse: condition number {cond:.3e} exceeds limit {cond_limit:.1e}"
        )));
    }
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("matrix inverse failed".into()))
}

/// Determinant via LU.
pub fn determinant(m: &CMat) -> Cx {
    m.clone().lu().determinant()
}
