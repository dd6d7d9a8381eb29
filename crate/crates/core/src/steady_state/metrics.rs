use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graphs::AdjacencyMatrix;
use crate::numerics::{hermitian_min_eigenvalue, logdet_posdef, ComplexMatrix};

pub fn to_db(variance: f64) -> f64 {
    10.0 * variance.log10()
}

fn check_even_square(v: &DMatrix<f64>) -> Result<usize> {
    if !v.is_square() || v.nrows() % 2 != 0 || v.nrows() == 0 {
        return Err(Error::Shape(format!("covariance must be 2N x 2N, got {:?}", v.shape())));
    }
    Ok(v.nrows() / 2)
}

/// Overlap of a Gaussian state of covariance `v` with the vacuum of the same
/// quadratures: `F = 2^N / sqrt(det(I + v))`, evaluated in log space.
pub fn fidelity_from_covariance(v: &DMatrix<f64>) -> Result<f64> {
    let n = check_even_square(v)?;
    let m = DMatrix::identity(2 * n, 2 * n) + v;
    let log_f = n as f64 * std::f64::consts::LN_2 - 0.5 * logdet_posdef(&m)?;
    Ok(log_f.exp())
}

/// Diagonal of `O V O^T` with `O = [-A | I]` acting on `(x_1..x_N, p_1..p_N)`.
pub fn nullifier_variances(v_original: &DMatrix<f64>, a: &AdjacencyMatrix) -> Result<Vec<f64>> {
    let n = check_even_square(v_original)?;
    if a.n() != n {
        return Err(Error::Shape(format!("graph has {} nodes, covariance {n} modes", a.n())));
    }
    let mut o = DMatrix::zeros(n, 2 * n);
    o.view_mut((0, 0), (n, n)).copy_from(&(-a.entries()));
    o.view_mut((0, n), (n, n)).fill_with_identity();
    let onv = &o * v_original * o.transpose();
    Ok((0..n).map(|j| onv[(j, j)]).collect())
}

/// `Omega_s = [[0, I], [-I, 0]]` in `(x, p)` ordering.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        s[(j, j + n)] = 1.0;
        s[(j + n, j)] = -1.0;
    }
    s
}

/// Smallest eigenvalue of `V + i Omega_s`; non-negative for physical states.
pub fn physicality_floor(v: &DMatrix<f64>) -> Result<f64> {
    let n = check_even_square(v)?;
    let s = symplectic_form(n);
    let h = ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| Complex64::new(v[(i, j)], s[(i, j)]));
    hermitian_min_eigenvalue(&h)
}
