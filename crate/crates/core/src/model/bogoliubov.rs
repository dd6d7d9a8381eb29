use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graphs::AdjacencyMatrix;
use crate::numerics::{max_abs, ComplexMatrix};

/// Interaction matrices `(X, Y)` defining the collective modes
/// `c_j = sum_j' X_jj' b_j' + Y_jj' b_j'^dagger`.
#[derive(Clone, Debug, PartialEq)]
pub struct BogoliubovPair {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
}

impl BogoliubovPair {
    pub fn new(x: ComplexMatrix, y: ComplexMatrix) -> Result<Self> {
        let n = x.nrows();
        if n == 0 || !x.is_square() || y.shape() != (n, n) {
            return Err(Error::Shape(format!(
                "Bogoliubov pair needs equal square blocks, got {:?} and {:?}",
                x.shape(),
                y.shape()
            )));
        }
        Ok(Self { x, y })
    }

    pub fn identity(n: usize) -> Self {
        Self { x: ComplexMatrix::identity(n, n), y: ComplexMatrix::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }
}

/// Residuals of the bosonic commutation conditions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BogoliubovReport {
    /// `max |X X^H - Y Y^H - I|`.
    pub norm_residual: f64,
    /// `max |X Y^T - Y X^T|`.
    pub symmetry_residual: f64,
    /// Magnitude of the cancelling terms, `max(1, |X X^H|, |Y Y^H|)`.
    pub scale: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Pair that stabilizes the finite-squeezing cluster state `C S_r |0>`:
/// `X = cosh(r) I - (i/2) e^r A`, `Y = -sinh(r) I - (i/2) e^r A`.
pub fn cluster_bogoliubov(a: &AdjacencyMatrix, r: f64) -> Result<BogoliubovPair> {
    if !r.is_finite() {
        return Err(Error::Domain(format!("squeezing parameter must be finite, got {r}")));
    }
    a.ensure_valid(1e-12 * a.max_abs().max(1.0))?;
    let n = a.n();
    let half_er = 0.5 * r.exp();
    let off = |j: usize, k: usize| Complex64::new(0.0, -half_er * a.get(j, k));
    let x = ComplexMatrix::from_fn(n, n, |j, k| {
        if j == k {
            Complex64::new(r.cosh(), 0.0) + off(j, k)
        } else {
            off(j, k)
        }
    });
    let y = ComplexMatrix::from_fn(n, n, |j, k| {
        if j == k {
            Complex64::new(-r.sinh(), 0.0) + off(j, k)
        } else {
            off(j, k)
        }
    });
    BogoliubovPair::new(x, y)
}

pub fn check_bogoliubov(pair: &BogoliubovPair, tol: f64) -> Result<BogoliubovReport> {
    let n = pair.x.nrows();
    if !pair.x.is_square() || pair.y.shape() != (n, n) {
        return Err(Error::Shape("Bogoliubov blocks have mismatched shapes".into()));
    }
    let xxh = &pair.x * pair.x.adjoint();
    let yyh = &pair.y * pair.y.adjoint();
    let norm_residual = max_abs(&(&xxh - &yyh - ComplexMatrix::identity(n, n)));
    let symmetry_residual = max_abs(&(&pair.x * pair.y.transpose() - &pair.y * pair.x.transpose()));
    let scale = max_abs(&xxh).max(max_abs(&yyh)).max(1.0);
    let pass = norm_residual <= tol * scale && symmetry_residual <= tol * scale;
    Ok(BogoliubovReport { norm_residual, symmetry_residual, scale, tol, pass })
}

/// Tolerance used when a pair is a precondition rather than the object under test.
const PRECONDITION_TOL: f64 = 1e-10;

fn ensure_symplectic(pair: &BogoliubovPair) -> Result<()> {
    let report = check_bogoliubov(pair, PRECONDITION_TOL)?;
    if report.pass {
        Ok(())
    } else {
        Err(Error::NonSymplectic { norm: report.norm_residual, symmetry: report.symmetry_residual })
    }
}

/// `B = [[X^H, -Y^T], [-Y^H, X^T]]`, mapping `(c, c^dagger)` to `(b, b^dagger)`.
pub fn bogoliubov_matrix(pair: &BogoliubovPair) -> Result<ComplexMatrix> {
    ensure_symplectic(pair)?;
    Ok(blocks2(&pair.x.adjoint(), &(-pair.y.transpose()), &(-pair.y.adjoint()), &pair.x.transpose()))
}

/// `F = [[X, Y], [Y*, X*]]`, mapping `(b, b^dagger)` to `(c, c^dagger)`.
pub fn forward_matrix(pair: &BogoliubovPair) -> ComplexMatrix {
    blocks2(&pair.x, &pair.y, &pair.y.conjugate(), &pair.x.conjugate())
}

pub(crate) fn blocks2(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    d: &ComplexMatrix,
) -> ComplexMatrix {
    let n = a.nrows();
    let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((0, n), (n, n)).copy_from(b);
    out.view_mut((n, 0), (n, n)).copy_from(c);
    out.view_mut((n, n), (n, n)).copy_from(d);
    out
}

/// Real diagonal as a complex matrix.
pub(crate) fn diag(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    ComplexMatrix::from_fn(n, n, |j, k| if j == k { Complex64::new(values[j], 0.0) } else { Complex64::new(0.0, 0.0) })
}
