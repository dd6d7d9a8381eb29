//! Continuous Lyapunov equation `M C + C M^T + Q = 0`.
//!
//! The transpose is the plain one: `C` collects operator products
//! `<a_j a_k>`, not a Hermitian covariance, so `M^H` would be wrong here.

use nalgebra::DVector;
use num_complex::Complex64;

use super::{complex_schur, is_finite, kron, max_abs, policy, spectral_abscissa, ComplexMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LyapunovMethod {
    /// Complex Schur form of `M`, then a triangular column sweep. `O(n^3)`.
    #[default]
    BartelsStewart,
    /// `(I ⊗ M + M ⊗ I) vec C = -vec Q` with dense LU. `O(n^6)`; small systems only.
    Kronecker,
}

/// Solves `M C + C M^T + Q = 0` with the default method.
pub fn solve_lyapunov(m: &ComplexMatrix, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    solve_lyapunov_with(m, q, LyapunovMethod::default())
}

pub fn solve_lyapunov_with(
    m: &ComplexMatrix,
    q: &ComplexMatrix,
    method: LyapunovMethod,
) -> Result<ComplexMatrix> {
    let n = m.nrows();
    if !m.is_square() || q.shape() != (n, n) {
        return Err(Error::Shape(format!(
            "Lyapunov solve needs square M and matching Q, got {:?} and {:?}",
            m.shape(),
            q.shape()
        )));
    }
    if !is_finite(m) || !is_finite(q) {
        return Err(Error::Numerical("non-finite entries in Lyapunov input".into()));
    }
    let abscissa = spectral_abscissa(m)?;
    if abscissa >= -policy::HURWITZ_MARGIN * m.norm() {
        return Err(Error::Stability { abscissa });
    }

    let c = match method {
        LyapunovMethod::BartelsStewart => bartels_stewart(m, q)?,
        LyapunovMethod::Kronecker => kronecker(m, q)?,
    };

    let rel = lyapunov_residual(m, &c, q);
    if !rel.is_finite() || rel > policy::LYAPUNOV_RESIDUAL {
        return Err(Error::Numerical(format!(
            "Lyapunov residual {rel:.3e} exceeds {:.1e}",
            policy::LYAPUNOV_RESIDUAL
        )));
    }
    Ok(c)
}

/// `|M C + C M^T + Q|_max / (|M|_F |C|_F + |Q|_F)`.
pub fn lyapunov_residual(m: &ComplexMatrix, c: &ComplexMatrix, q: &ComplexMatrix) -> f64 {
    let r = m * c + c * m.transpose() + q;
    let scale = m.norm() * c.norm() + q.norm();
    if scale == 0.0 {
        max_abs(&r)
    } else {
        max_abs(&r) / scale
    }
}

fn bartels_stewart(m: &ComplexMatrix, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.nrows();
    // M = U T U^H, so with Y = U^H C conj(U):  T Y + Y T^T = -U^H Q conj(U).
    let (u, t) = complex_schur(m)?;
    let u_conj = u.conjugate();
    let f = -(u.adjoint() * q * &u_conj);

    let mut y = ComplexMatrix::zeros(n, n);
    // Column j of Y T^T only involves columns k >= j, so sweep j downwards.
    for j in (0..n).rev() {
        let mut rhs: DVector<Complex64> = f.column(j).into_owned();
        for k in j + 1..n {
            let tjk = t[(j, k)];
            if tjk != Complex64::new(0.0, 0.0) {
                rhs -= y.column(k) * tjk;
            }
        }
        let shift = t[(j, j)];
        // back substitution with (T + t_jj I)
        for i in (0..n).rev() {
            let mut s = rhs[i];
            for l in i + 1..n {
                s -= t[(i, l)] * y[(l, j)];
            }
            let d = t[(i, i)] + shift;
            if d.norm() == 0.0 {
                return Err(Error::Numerical(format!(
                    "eigenvalues {i} and {j} sum to zero; Lyapunov operator singular"
                )));
            }
            y[(i, j)] = s / d;
        }
    }
    Ok(&u * y * u.transpose())
}

fn kronecker(m: &ComplexMatrix, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.nrows();
    let eye = ComplexMatrix::identity(n, n);
    // column-major vec: vec(M C) = (I ⊗ M) vec C, vec(C M^T) = (M ⊗ I) vec C
    let op = kron(&eye, m) + kron(m, &eye);
    let rhs = DVector::from_iterator(n * n, q.iter().map(|z| -z));
    let lu = op.lu();
    let u = lu.u();
    let diag: Vec<f64> = (0..n * n).map(|i| u[(i, i)].norm()).collect();
    let dmax = diag.iter().copied().fold(0.0, f64::max);
    let dmin = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let cond_estimate = if dmin > 0.0 { dmax / dmin } else { f64::INFINITY };
    if !cond_estimate.is_finite() || cond_estimate > 1.0 / f64::EPSILON {
        return Err(Error::Numerical(format!(
            "vectorized Lyapunov system is singular (pivot ratio {cond_estimate:.3e})"
        )));
    }
    let x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical(format!("LU solve failed (pivot ratio {cond_estimate:.3e})")))?;
    Ok(ComplexMatrix::from_column_slice(n, n, x.as_slice()))
}
