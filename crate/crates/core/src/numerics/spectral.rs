use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{complex_schur, is_finite, ComplexMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS_PER_DIM: usize = 1000;

/// Eigenvalues of a general complex matrix, from its complex Schur form.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::Shape(format!("eigenvalues of a {}x{} matrix", m.nrows(), m.ncols())));
    }
    if !is_finite(m) {
        return Err(Error::Numerical("non-finite matrix entries".into()));
    }
    let (_, t) = complex_schur(m)?;
    Ok((0..m.nrows()).map(|i| t[(i, i)]).collect())
}

/// Largest real part over the spectrum of `m`.
pub fn spectral_abscissa(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Smallest eigenvalue of a Hermitian matrix (only the lower triangle is read).
pub fn hermitian_min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    if !h.is_square() {
        return Err(Error::Shape("hermitian eigenvalues of a non-square matrix".into()));
    }
    let n = h.nrows();
    let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, MAX_SWEEPS_PER_DIM * n.max(1))
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let values: DVector<f64> = eig.eigenvalues;
    Ok(values.iter().copied().fold(f64::INFINITY, f64::min))
}
