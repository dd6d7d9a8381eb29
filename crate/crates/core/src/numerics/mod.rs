//! Dense complex linear-algebra kernels.

mod logdet;
mod lyapunov;
mod schur;
mod spectral;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use logdet::logdet_posdef;
pub use lyapunov::{lyapunov_residual, solve_lyapunov, solve_lyapunov_with, LyapunovMethod};
pub use schur::complex_schur;
pub use spectral::{eigenvalues, hermitian_min_eigenvalue, spectral_abscissa};

/// Dense complex matrix; row/column indexing is `(row, col)`.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Numeric tolerances used across the crate.
pub mod policy {
    /// Relative Lyapunov residual accepted by the solver.
    pub const LYAPUNOV_RESIDUAL: f64 = 1e-10;
    /// The drift matrix must satisfy `abscissa < -HURWITZ_MARGIN * |M|`.
    pub const HURWITZ_MARGIN: f64 = 1e-14;
    /// Relative asymmetry tolerated by `logdet_posdef`.
    pub const SYMMETRY: f64 = 1e-10;
    /// Relative imaginary residue discarded after the quadrature transforms.
    pub const IMAGINARY_RESIDUE: f64 = 1e-10;
    /// Floor for the smallest eigenvalue of `V + i Omega`.
    pub const PHYSICALITY_FLOOR: f64 = -1e-9;
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_real(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn to_complex(m: &DMatrix<f64>) -> ComplexMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}
