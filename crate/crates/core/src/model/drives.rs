//! Multifrequency drive synthesis.
//!
//! Cavity `k` is driven by `2N` tones: a red sideband `omega~_k - Omega_m`
//! (column `m`) and a blue sideband `omega~_k + Omega_m` (column `m + N`) for
//! every mechanical mode `m`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{cluster_bogoliubov, BogoliubovPair, SystemParams};
use crate::error::{Error, Result};
use crate::graphs::AdjacencyMatrix;
use crate::numerics::ComplexMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct DriveSet {
    /// Tone frequencies, `N x 2N` [rad/s]. Absolute when bare cavity
    /// frequencies are known, otherwise detunings from `omega~_k`.
    pub lambda: DMatrix<f64>,
    /// Whether `lambda` holds absolute frequencies.
    pub absolute: bool,
    /// Tone amplitudes `eps_km` [rad/s, or units of g when g is uniform].
    pub epsilon: ComplexMatrix,
    /// Intracavity coefficients `alpha_km = eps_km / (lambda_km - omega_k + i kappa_k / 2)`.
    pub alpha_bar: ComplexMatrix,
}

/// Detuning `lambda_km - omega_k` of every tone from the bare cavity.
fn bare_detunings(params: &SystemParams) -> DMatrix<f64> {
    let n = params.n();
    let delta = params.delta_or_zero();
    DMatrix::from_fn(n, 2 * n, |k, m| {
        if m < n {
            delta[k] - params.omega_m[m]
        } else {
            delta[k] + params.omega_m[m - n]
        }
    })
}

pub fn drive_frequencies(params: &SystemParams) -> Result<DMatrix<f64>> {
    params.validate()?;
    let n = params.n();
    let detuning = bare_detunings(params);
    Ok(match &params.omega_c {
        Some(wc) => DMatrix::from_fn(n, 2 * n, |k, m| wc[k] + detuning[(k, m)]),
        None => {
            let delta = params.delta_or_zero();
            DMatrix::from_fn(n, 2 * n, |k, m| detuning[(k, m)] - delta[k])
        }
    })
}

/// `alpha_km = eps_km / (lambda_km - omega_k + i kappa_k / 2)` for a tone table
/// laid out like [`drive_frequencies`].
pub fn alpha_from_epsilon(params: &SystemParams, lambda: &DMatrix<f64>, absolute: bool, epsilon: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = params.n();
    if lambda.shape() != (n, 2 * n) || epsilon.shape() != (n, 2 * n) {
        return Err(Error::Shape(format!("tone tables must be {n}x{}", 2 * n)));
    }
    let delta = params.delta_or_zero();
    Ok(ComplexMatrix::from_fn(n, 2 * n, |k, m| {
        let detuning = match (&params.omega_c, absolute) {
            (Some(wc), true) => lambda[(k, m)] - wc[k],
            _ => lambda[(k, m)] + delta[k],
        };
        epsilon[(k, m)] / Complex64::new(detuning, 0.5 * params.kappa[k])
    }))
}

/// `X_kj = g_kj alpha_kj / g~_k`, `Y_kj = g_kj alpha_k,j+N / g~_k`.
pub fn pair_from_alpha(params: &SystemParams, alpha_bar: &ComplexMatrix) -> Result<BogoliubovPair> {
    let n = params.n();
    if alpha_bar.shape() != (n, 2 * n) {
        return Err(Error::Shape(format!("alpha table must be {n}x{}", 2 * n)));
    }
    if let Some(k) = params.g_tilde.iter().position(|g| !(*g > 0.0)) {
        return Err(Error::Domain(format!("g~_{} must be > 0 to recover (X, Y)", k + 1)));
    }
    let g = params.g_single_or_uniform();
    let x = ComplexMatrix::from_fn(n, n, |k, j| alpha_bar[(k, j)] * (g[(k, j)] / params.g_tilde[k]));
    let y = ComplexMatrix::from_fn(n, n, |k, j| alpha_bar[(k, j + n)] * (g[(k, j)] / params.g_tilde[k]));
    BogoliubovPair::new(x, y)
}

/// `g~_k = sqrt(sum_j g_kj^2 (|alpha_kj|^2 - |alpha_k,j+N|^2))`; returns the
/// squared values so that a sign problem stays visible.
pub fn collective_couplings(params: &SystemParams, alpha_bar: &ComplexMatrix) -> Vec<f64> {
    let n = params.n();
    let g = params.g_single_or_uniform();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|j| g[(k, j)].powi(2) * (alpha_bar[(k, j)].norm_sqr() - alpha_bar[(k, j + n)].norm_sqr()))
                .sum()
        })
        .collect()
}

/// Tone amplitudes that realise the cluster pair of `(a, r)` at couplings `g~`.
///
/// Red tones: `eps_kj = g~_k/g_kj (delta_k - Omega_j + i kappa_k/2) X_kj`;
/// blue tones: `eps_k,j+N = g~_k/g_kj (delta_k + Omega_j + i kappa_k/2) Y_kj`,
/// with `(X, Y)` from [`cluster_bogoliubov`].
pub fn synthesize_drives(params: &SystemParams, a: &AdjacencyMatrix) -> Result<DriveSet> {
    params.validate()?;
    let n = params.n();
    if a.n() != n {
        return Err(Error::Shape(format!("graph has {} nodes, params {n}", a.n())));
    }
    let pair = cluster_bogoliubov(a, params.r)?;
    let g = params.g_single_or_uniform();
    let detuning = bare_detunings(params);
    let zero = Complex64::new(0.0, 0.0);

    let mut epsilon = ComplexMatrix::zeros(n, 2 * n);
    for k in 0..n {
        for j in 0..n {
            let (xkj, ykj) = (pair.x[(k, j)], pair.y[(k, j)]);
            if xkj == zero && ykj == zero {
                continue;
            }
            let gkj = g[(k, j)];
            if !(gkj > 0.0) {
                return Err(Error::Synthesis { k: k + 1, j: j + 1, value: gkj });
            }
            let scale = params.g_tilde[k] / gkj;
            let half_kappa = 0.5 * params.kappa[k];
            epsilon[(k, j)] = Complex64::new(detuning[(k, j)], half_kappa) * xkj * scale;
            epsilon[(k, j + n)] = Complex64::new(detuning[(k, j + n)], half_kappa) * ykj * scale;
        }
    }
    let lambda = drive_frequencies(params)?;
    let absolute = params.omega_c.is_some();
    let alpha_bar = alpha_from_epsilon(params, &lambda, absolute, &epsilon)?;
    Ok(DriveSet { lambda, absolute, epsilon, alpha_bar })
}
