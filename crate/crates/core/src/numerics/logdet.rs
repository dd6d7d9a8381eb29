use nalgebra::DMatrix;

use super::{max_abs_real, policy};
use crate::error::{Error, Result};

/// `ln det v` for a real symmetric positive-definite matrix, via Cholesky.
///
/// The determinant itself is never formed, so the result stays finite for
/// covariances whose determinant over- or underflows.
pub fn logdet_posdef(v: &DMatrix<f64>) -> Result<f64> {
    if !v.is_square() || v.nrows() == 0 {
        return Err(Error::Shape(format!("logdet of a {}x{} matrix", v.nrows(), v.ncols())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("non-finite entries in logdet input".into()));
    }
    let scale = max_abs_real(v).max(f64::MIN_POSITIVE);
    let asym = max_abs_real(&(v - v.transpose()));
    if asym > policy::SYMMETRY * scale {
        return Err(Error::Definiteness(format!(
            "matrix not symmetric (residual {asym:.3e}, scale {scale:.3e})"
        )));
    }
    let sym = (v + v.transpose()) * 0.5;
    let chol = sym.clone().cholesky().ok_or_else(|| {
        let min_eig = sym.symmetric_eigenvalues().min();
        Error::Definiteness(format!("Cholesky pivot failed, smallest eigenvalue {min_eig:.6e}"))
    })?;
    let l = chol.l_dirty();
    Ok(2.0 * (0..v.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scaled_identity() {
        for n in [2usize, 4, 8, 20] {
            let v = DMatrix::<f64>::identity(n, n) * 2.0;
            let got = logdet_posdef(&v).unwrap();
            assert!((got - n as f64 * 2f64.ln()).abs() < 1e-13 * n as f64);
        }
    }

    #[test]
    fn diagonal() {
        let d: [f64; 4] = [0.3, 1.7, 1e-8, 4e6];
        let v = DMatrix::from_diagonal(&DVector::from_row_slice(&d));
        let expect: f64 = d.iter().map(|x| x.ln()).sum();
        assert!((logdet_posdef(&v).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn random_spd_matches_eigen_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let g = DMatrix::<f64>::from_fn(20, 20, |_, _| rng.random_range(-1.0..1.0));
            let a = &g * g.transpose() + DMatrix::identity(20, 20) * 1e-3;
            let oracle: f64 = a.clone().symmetric_eigenvalues().iter().map(|x| x.ln()).sum();
            let got = logdet_posdef(&a).unwrap();
            assert!((got - oracle).abs() <= 1e-10 * oracle.abs().max(1.0), "{got} vs {oracle}");
        }
    }

    #[test]
    fn homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = DMatrix::<f64>::from_fn(6, 6, |_, _| rng.random_range(-1.0..1.0));
        let a = &g * g.transpose() + DMatrix::identity(6, 6);
        for alpha in [1e-3, 0.5, 7.0, 1e4] {
            let lhs = logdet_posdef(&(&a * alpha)).unwrap();
            let rhs = 6.0 * f64::ln(alpha) + logdet_posdef(&a).unwrap();
            assert!((lhs - rhs).abs() < 1e-11 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_indefinite_and_asymmetric() {
        let v = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(logdet_posdef(&v), Err(Error::Definiteness(_))));
        let w = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(logdet_posdef(&w), Err(Error::Definiteness(_))));
    }
}
