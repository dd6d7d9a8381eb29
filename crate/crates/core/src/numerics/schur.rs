//! Complex Schur decomposition `M = U T U^H`.
//!
//! Hessenberg reduction followed by implicit single-shift QR with Wilkinson
//! shifts and periodic exceptional shifts. The nalgebra iteration has no
//! exceptional shifts and can stall on drift matrices whose entries span many
//! orders of magnitude.

use nalgebra::linalg::Hessenberg;
use num_complex::Complex64;

use super::{is_finite, ComplexMatrix};
use crate::error::{Error, Result};

const MAX_ITER_PER_EIGENVALUE: usize = 60;
const EXCEPTIONAL_EVERY: usize = 10;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Rotation `[[c, s], [-s*, c]]` mapping `(x, y)` to `(r, 0)`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    if y == zero() {
        return (1.0, zero());
    }
    let ax = x.norm();
    let norm = ax.hypot(y.norm());
    if ax == 0.0 {
        return (0.0, y.conj() / y.norm());
    }
    (ax / norm, (x / ax) * y.conj() / norm)
}

fn rotate_rows(h: &mut ComplexMatrix, k: usize, cols: std::ops::Range<usize>, c: f64, s: Complex64) {
    for j in cols {
        let (a, b) = (h[(k, j)], h[(k + 1, j)]);
        h[(k, j)] = a * c + s * b;
        h[(k + 1, j)] = -s.conj() * a + b * c;
    }
}

fn rotate_cols(h: &mut ComplexMatrix, k: usize, rows: std::ops::Range<usize>, c: f64, s: Complex64) {
    for i in rows {
        let (a, b) = (h[(i, k)], h[(i, k + 1)]);
        h[(i, k)] = a * c + b * s.conj();
        h[(i, k + 1)] = -a * s + b * c;
    }
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let (l1, l2) = (d + half + disc, d + half - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Returns `(U, T)` with `U` unitary and `T` upper triangular.
pub fn complex_schur(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = m.nrows();
    if !m.is_square() {
        return Err(Error::Shape(format!("Schur form of a {}x{} matrix", n, m.ncols())));
    }
    if !is_finite(m) {
        return Err(Error::Numerical("non-finite matrix entries".into()));
    }
    if n == 0 {
        return Ok((ComplexMatrix::zeros(0, 0), ComplexMatrix::zeros(0, 0)));
    }
    let (mut u, mut h) = Hessenberg::new(m.clone()).unpack();
    for j in 0..n {
        for i in j + 2..n {
            h[(i, j)] = zero();
        }
    }
    let scale = h.norm().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;

    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        // locate the active block [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if diag == 0.0 {
                diag = scale;
            }
            if sub <= eps * diag || sub <= f64::MIN_POSITIVE * scale {
                h[(lo, lo - 1)] = zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > MAX_ITER_PER_EIGENVALUE * n {
            return Err(Error::Numerical(format!("Schur iteration did not converge ({n}x{n})")));
        }

        let mu = if iter % EXCEPTIONAL_EVERY == 0 {
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.5 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        // chase the bulge from lo to hi
        let mut x = h[(lo, lo)] - mu;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            if k > lo {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let first_col = if k > lo { k - 1 } else { lo };
            rotate_rows(&mut h, k, first_col..n, c, s);
            rotate_cols(&mut h, k, 0..(k + 3).min(hi + 1), c, s);
            rotate_cols(&mut u, k, 0..n, c, s);
            if k > lo {
                h[(k + 1, k - 1)] = zero();
            }
        }
    }
    for j in 0..n {
        for i in j + 1..n {
            h[(i, j)] = zero();
        }
    }
    Ok((u, h))
}
