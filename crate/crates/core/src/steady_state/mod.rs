//! Steady state of the linearized cavity + collective-mode dynamics.
//!
//! Operators are ordered `(a_1..a_N, c_1..c_N, a_1^†..a_N^†, c_1^†..c_N^†)`.
//! Quadratures are `x = b + b^†`, `p = -i b + i b^†`, so the vacuum has unit
//! variance and `[x, p] = 2i`.
//!
//! The same dynamics can be written for `(a, b, a^†, b^†)`. There the noise is
//! diagonal and no entry grows like `e^{2r}`, so by default the original-mode
//! covariance is solved for directly (see [`Basis`]).

mod metrics;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graphs::AdjacencyMatrix;
use crate::model::{
    bogoliubov_matrix, cluster_bogoliubov, damping_matrices, effective_noise, noise_blocks, BogoliubovPair,
    NoiseBlocks, SystemParams,
};
use crate::numerics::{
    lyapunov_residual, max_abs, policy, solve_lyapunov_with, spectral_abscissa, ComplexMatrix, LyapunovMethod,
};

pub use metrics::{fidelity_from_covariance, nullifier_variances, physicality_floor, symplectic_form, to_db};

#[derive(Clone, Debug)]
pub struct SteadyStateResult {
    /// Full `4N x 4N` steady correlations `<a_i a_j>`.
    pub c_full: ComplexMatrix,
    /// Covariance of the collective-mode quadratures `(x^c, p^c)`.
    pub v_collective: DMatrix<f64>,
    /// Covariance of the original mechanical quadratures `(x, p)`.
    pub v_original: DMatrix<f64>,
    pub fidelity: f64,
    /// `<X_j^2>` of the nullifiers `p_j - sum A_jj' x_j'`.
    pub nullifier_var: Vec<f64>,
    pub nullifier_db: Vec<f64>,
    /// Spectral abscissa of the drift matrix [rad/s].
    pub stability: f64,
    /// `4 g~_k^2 / (kappa_k Xi_k)`.
    pub cooperativities: Vec<f64>,
    /// Relative Lyapunov residual of `c_full`.
    pub residual: f64,
}

impl SteadyStateResult {
    pub fn n(&self) -> usize {
        self.nullifier_var.len()
    }

    /// Smallest eigenvalue of `V + i Omega_s` for the (original, collective) covariances.
    pub fn physicality(&self) -> Result<(f64, f64)> {
        Ok((physicality_floor(&self.v_original)?, physicality_floor(&self.v_collective)?))
    }
}

fn diag_c(values: &[f64], scale: Complex64) -> ComplexMatrix {
    let n = values.len();
    ComplexMatrix::from_fn(n, n, |j, k| if j == k { scale * values[j] } else { Complex64::new(0.0, 0.0) })
}

fn place(dst: &mut ComplexMatrix, row: usize, col: usize, block: &ComplexMatrix) {
    let (r, c) = block.shape();
    dst.view_mut((row * r, col * c), (r, c)).copy_from(block);
}

/// Drift matrix `M` of `d/dt a = M a + f`.
///
/// `T` enters with a plus sign: substituting `b = X^H c - Y^T c^†` into
/// `db/dt = -gamma/2 b` gives `dc/dt = -W c + T c^† + ...`. The two signs only
/// differ when the `gamma_j` are unequal, since `T = 0` otherwise.
pub fn drift_matrix(params: &SystemParams, pair: &BogoliubovPair) -> Result<ComplexMatrix> {
    params.validate()?;
    let n = params.n();
    if pair.n() != n {
        return Err(Error::Shape(format!("pair is {}x{}, params have {n} modes", pair.n(), pair.n())));
    }
    let (w, t) = damping_matrices(pair, &params.gamma)?;
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let half_k = diag_c(&params.kappa, -0.5 * one);
    let g_minus = diag_c(&params.g_tilde, -i);
    let g_plus = diag_c(&params.g_tilde, i);

    let mut m = ComplexMatrix::zeros(4 * n, 4 * n);
    place(&mut m, 0, 0, &half_k);
    place(&mut m, 0, 1, &g_minus);
    place(&mut m, 1, 0, &g_minus);
    place(&mut m, 1, 1, &(-&w));
    place(&mut m, 1, 3, &t);
    place(&mut m, 2, 2, &half_k);
    place(&mut m, 2, 3, &g_plus);
    place(&mut m, 3, 1, &t.conjugate());
    place(&mut m, 3, 2, &g_plus);
    place(&mut m, 3, 3, &(-w.conjugate()));
    Ok(m)
}

/// Drift matrix in the original basis `(a, b, a^†, b^†)`:
/// `da/dt = -kappa/2 a - i G (X b + Y b^†)`,
/// `db/dt = -gamma/2 b - i (X^H G a + Y^T G a^†)`.
pub fn drift_matrix_original(params: &SystemParams, pair: &BogoliubovPair) -> Result<ComplexMatrix> {
    params.validate()?;
    let n = params.n();
    if pair.n() != n {
        return Err(Error::Shape(format!("pair is {}x{}, params have {n} modes", pair.n(), pair.n())));
    }
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let g = diag_c(&params.g_tilde, one);
    let (gx, gy) = (&g * &pair.x, &g * &pair.y);
    let (xg, yg) = (pair.x.adjoint() * &g, pair.y.transpose() * &g);

    let mut m = ComplexMatrix::zeros(4 * n, 4 * n);
    place(&mut m, 0, 0, &diag_c(&params.kappa, -0.5 * one));
    place(&mut m, 0, 1, &(&gx * -i));
    place(&mut m, 0, 3, &(&gy * -i));
    place(&mut m, 1, 0, &(&xg * -i));
    place(&mut m, 1, 1, &diag_c(&params.gamma, -0.5 * one));
    place(&mut m, 1, 2, &(&yg * -i));
    place(&mut m, 2, 1, &(gy.conjugate() * i));
    place(&mut m, 2, 2, &diag_c(&params.kappa, -0.5 * one));
    place(&mut m, 2, 3, &(gx.conjugate() * i));
    place(&mut m, 3, 0, &(yg.conjugate() * i));
    place(&mut m, 3, 2, &(xg.conjugate() * i));
    place(&mut m, 3, 3, &diag_c(&params.gamma, -0.5 * one));
    Ok(m)
}

/// Noise matrix in the original basis: optical vacuum and thermal mechanical baths.
pub fn noise_matrix_original(params: &SystemParams, nbar: &[f64]) -> Result<ComplexMatrix> {
    let n = params.n();
    if nbar.len() != n {
        return Err(Error::Shape(format!("{} occupancies for {n} modes", nbar.len())));
    }
    let one = Complex64::new(1.0, 0.0);
    let emit: Vec<f64> = params.gamma.iter().zip(nbar).map(|(g, nb)| g * (nb + 1.0)).collect();
    let absorb: Vec<f64> = params.gamma.iter().zip(nbar).map(|(g, nb)| g * nb).collect();
    let mut m = ComplexMatrix::zeros(4 * n, 4 * n);
    place(&mut m, 0, 2, &diag_c(&params.kappa, one));
    place(&mut m, 1, 3, &diag_c(&emit, one));
    place(&mut m, 3, 1, &diag_c(&absorb, one));
    Ok(m)
}

/// Noise correlation matrix `N` with `<f_i(t) f_j(t')> = N_ij delta(t - t')`.
pub fn noise_matrix(params: &SystemParams, blocks: &NoiseBlocks) -> Result<ComplexMatrix> {
    let n = params.n();
    for b in [&blocks.xi_mp, &blocks.xi_pm, &blocks.xi_mm, &blocks.xi_pp] {
        if b.shape() != (n, n) {
            return Err(Error::Shape(format!("noise block is {:?}, expected ({n}, {n})", b.shape())));
        }
    }
    if params.kappa.len() != n {
        return Err(Error::Shape("kappa length does not match the noise blocks".into()));
    }
    let mut m = ComplexMatrix::zeros(4 * n, 4 * n);
    place(&mut m, 0, 2, &diag_c(&params.kappa, Complex64::new(1.0, 0.0)));
    place(&mut m, 1, 1, &blocks.xi_mm);
    place(&mut m, 1, 3, &blocks.xi_mp);
    place(&mut m, 3, 1, &blocks.xi_pm);
    place(&mut m, 3, 3, &blocks.xi_pp);
    Ok(m)
}

/// `R = [[I, I], [-i I, i I]]`, so that `(x, p) = R (b, b^†)`.
pub fn quadrature_map(n: usize) -> ComplexMatrix {
    let i = Complex64::i();
    let mut r = ComplexMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        r[(j, j)] = Complex64::new(1.0, 0.0);
        r[(j, j + n)] = Complex64::new(1.0, 0.0);
        r[(j + n, j)] = -i;
        r[(j + n, j + n)] = i;
    }
    r
}

/// Symmetrized mechanical block `(C + C^T)/2` of the full correlations, in
/// whichever basis they were solved.
pub fn mechanical_block(c_full: &ComplexMatrix) -> ComplexMatrix {
    let n = c_full.nrows() / 4;
    let idx: Vec<usize> = (n..2 * n).chain(3 * n..4 * n).collect();
    let cc = ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| c_full[(idx[i], idx[j])]);
    (&cc + cc.transpose()) * Complex64::new(0.5, 0.0)
}

/// Real part of a covariance, rejecting imaginary parts above the residue policy.
pub fn real_covariance(v: &ComplexMatrix) -> Result<DMatrix<f64>> {
    let scale = max_abs(v);
    let residue = v.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()));
    let threshold = policy::IMAGINARY_RESIDUE * scale.max(f64::MIN_POSITIVE);
    if residue > threshold {
        return Err(Error::ImaginaryResidue { residue, threshold });
    }
    let re = v.map(|z| z.re);
    Ok((&re + re.transpose()) * 0.5)
}

/// Covariances `(V^c, V^b)` of a symmetrized mechanical block.
pub fn covariances(sym: &ComplexMatrix, pair: &BogoliubovPair) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = pair.n();
    let r = quadrature_map(n);
    let b = bogoliubov_matrix(pair)?;
    let vc = real_covariance(&(&r * sym * r.transpose()))?;
    let rb = &r * &b;
    let vb = real_covariance(&(&rb * sym * rb.transpose()))?;
    Ok((vc, vb))
}

/// Where the Lyapunov equation is solved. Each basis is accurate for its own
/// covariance: transforming between them cancels terms of size `n e^{4r}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Basis {
    /// Solve twice: `V^c` from `(a, c, a^†, c^†)` and `V^b` from `(a, b, a^†, b^†)`.
    #[default]
    Native,
    /// Solve once in `(a, c, a^†, c^†)` and map `V^b` through the Bogoliubov matrix.
    Collective,
}

/// `S` with `(a, c, a^†, c^†) = S (a, b, a^†, b^†)`.
#[cfg(test)]
fn full_forward(pair: &BogoliubovPair) -> ComplexMatrix {
    let n = pair.n();
    let id = ComplexMatrix::identity(n, n);
    let mut s = ComplexMatrix::zeros(4 * n, 4 * n);
    place(&mut s, 0, 0, &id);
    place(&mut s, 1, 1, &pair.x);
    place(&mut s, 1, 3, &pair.y);
    place(&mut s, 2, 2, &id);
    place(&mut s, 3, 1, &pair.y.conjugate());
    place(&mut s, 3, 3, &pair.x.conjugate());
    s
}

pub fn solve_steady(params: &SystemParams, a: &AdjacencyMatrix) -> Result<SteadyStateResult> {
    solve_steady_in(params, a, LyapunovMethod::default(), Basis::default())
}

pub fn solve_steady_with(
    params: &SystemParams,
    a: &AdjacencyMatrix,
    method: LyapunovMethod,
) -> Result<SteadyStateResult> {
    solve_steady_in(params, a, method, Basis::default())
}

pub fn solve_steady_in(
    params: &SystemParams,
    a: &AdjacencyMatrix,
    method: LyapunovMethod,
    basis: Basis,
) -> Result<SteadyStateResult> {
    params.validate()?;
    let n = params.n();
    if a.n() != n {
        return Err(Error::Shape(format!("graph has {} nodes, params {n}", a.n())));
    }
    let pair = cluster_bogoliubov(a, params.r)?;
    let nbar = params.nbar()?;
    let m = drift_matrix(params, &pair)?;
    let noise = noise_matrix(params, &noise_blocks(&pair, &params.gamma, &nbar)?)?;
    let stability = spectral_abscissa(&m)?;

    let c_full = solve_lyapunov_with(&m, &noise, method)?;
    let (v_collective, v_original) = match basis {
        Basis::Collective => covariances(&mechanical_block(&c_full), &pair)?,
        Basis::Native => {
            let r = quadrature_map(n);
            let vc = real_covariance(&(&r * mechanical_block(&c_full) * r.transpose()))?;
            let m_b = drift_matrix_original(params, &pair)?;
            let noise_b = noise_matrix_original(params, &nbar)?;
            let c_b = solve_lyapunov_with(&m_b, &noise_b, method)?;
            let vb = real_covariance(&(&r * mechanical_block(&c_b) * r.transpose()))?;
            (vc, vb)
        }
    };
    let residual = lyapunov_residual(&m, &c_full, &noise);

    let fidelity = fidelity_from_covariance(&v_collective)?;
    let nullifier_var = nullifier_variances(&v_original, a)?;
    let nullifier_db = nullifier_var.iter().map(|&v| to_db(v)).collect();
    let cooperativities = effective_noise(params, a)?.cooperativity;

    Ok(SteadyStateResult {
        c_full,
        v_collective,
        v_original,
        fidelity,
        nullifier_var,
        nullifier_db,
        stability,
        cooperativities,
        residual,
    })
}
