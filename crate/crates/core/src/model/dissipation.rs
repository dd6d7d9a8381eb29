//! Mechanical damping and thermal noise as seen by the collective modes.

use super::bogoliubov::diag;
use super::{BogoliubovPair, SystemParams};
use crate::error::{Error, Result};
use crate::graphs::AdjacencyMatrix;
use crate::numerics::ComplexMatrix;

fn check_rates(pair: &BogoliubovPair, name: &str, v: &[f64]) -> Result<()> {
    if v.len() != pair.n() {
        return Err(Error::Shape(format!("{name} has length {}, expected {}", v.len(), pair.n())));
    }
    if v.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::Domain(format!("{name} entries must be finite and >= 0")));
    }
    Ok(())
}

/// Damping `W` and anomalous damping `T` of the collective modes:
///
/// `W_kk' = sum_j gamma_j/2 (X_kj X*_k'j - Y_kj Y*_k'j)`,
/// `T_kk' = sum_j gamma_j/2 (X_kj Y_k'j - Y_kj X_k'j)`.
///
/// Equal `gamma_j = gamma` gives `W = gamma/2 I` and `T = 0`.
pub fn damping_matrices(pair: &BogoliubovPair, gamma: &[f64]) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_rates(pair, "gamma", gamma)?;
    let half: Vec<f64> = gamma.iter().map(|g| 0.5 * g).collect();
    let g = diag(&half);
    let (x, y) = (&pair.x, &pair.y);
    let w = x * &g * x.adjoint() - y * &g * y.adjoint();
    let t = x * &g * y.transpose() - y * &g * x.transpose();
    Ok((w, t))
}

/// Delta-correlated collective noise `f_k`:
/// `<f f^dagger> = Xi^{-+}`, `<f^dagger f> = Xi^{+-}`, `<f f> = Xi^{--}`,
/// `<f^dagger f^dagger> = Xi^{++}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseBlocks {
    pub xi_mp: ComplexMatrix,
    pub xi_pm: ComplexMatrix,
    pub xi_mm: ComplexMatrix,
    pub xi_pp: ComplexMatrix,
}

pub fn noise_blocks(pair: &BogoliubovPair, gamma: &[f64], nbar: &[f64]) -> Result<NoiseBlocks> {
    check_rates(pair, "gamma", gamma)?;
    check_rates(pair, "nbar", nbar)?;
    let emit = diag(&gamma.iter().zip(nbar).map(|(g, n)| g * (n + 1.0)).collect::<Vec<_>>());
    let absorb = diag(&gamma.iter().zip(nbar).map(|(g, n)| g * n).collect::<Vec<_>>());
    let (x, y) = (&pair.x, &pair.y);
    let (xc, yc) = (x.conjugate(), y.conjugate());
    Ok(NoiseBlocks {
        xi_mp: x * &emit * x.adjoint() + y * &absorb * y.adjoint(),
        xi_pm: &xc * &absorb * x.transpose() + &yc * &emit * y.transpose(),
        xi_mm: x * &emit * y.transpose() + y * &absorb * x.transpose(),
        xi_pp: &xc * &absorb * y.adjoint() + &yc * &emit * x.adjoint(),
    })
}

/// Thermal noise felt by each collective mode and the resulting cooperativities.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveNoise {
    /// Exact `Xi_j = Xi^{+-}_jj` [rad/s].
    pub xi_exact: Vec<f64>,
    /// Large-squeezing form `e^{2r}/2 [gamma_j (n_j + 1/2) + sum_j' A_jj'^2 gamma_j' (n_j' + 1/2)]`.
    pub xi_approx: Vec<f64>,
    /// `e^{2r}/2 sum_j gamma_j (n_j + 1/2)`, the fully connected value.
    pub xi_star: f64,
    /// `4 g~_k^2 / (kappa_k Xi_k)`; `+inf` when `Xi_k = 0` and `g~_k > 0`.
    pub cooperativity: Vec<f64>,
}

impl EffectiveNoise {
    pub fn min_cooperativity(&self) -> f64 {
        self.cooperativity.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn effective_noise(params: &SystemParams, a: &AdjacencyMatrix) -> Result<EffectiveNoise> {
    params.validate()?;
    if a.n() != params.n() {
        return Err(Error::Shape(format!("graph has {} nodes, params {}", a.n(), params.n())));
    }
    let nbar = params.nbar()?;
    let pair = super::cluster_bogoliubov(a, params.r)?;
    let blocks = noise_blocks(&pair, &params.gamma, &nbar)?;
    let n = params.n();
    let e2r = (2.0 * params.r).exp();
    let weight: Vec<f64> = params.gamma.iter().zip(&nbar).map(|(g, nb)| g * (nb + 0.5)).collect();

    let xi_exact: Vec<f64> = (0..n).map(|k| blocks.xi_pm[(k, k)].re).collect();
    let xi_approx: Vec<f64> = (0..n)
        .map(|j| {
            let neigh: f64 = (0..n).map(|k| a.get(j, k).powi(2) * weight[k]).sum();
            0.5 * e2r * (weight[j] + neigh)
        })
        .collect();
    let xi_star = 0.5 * e2r * weight.iter().sum::<f64>();
    let cooperativity = (0..n)
        .map(|k| {
            let num = 4.0 * params.g_tilde[k].powi(2);
            let den = params.kappa[k] * xi_exact[k];
            if den > 0.0 {
                num / den
            } else if num > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .collect();
    Ok(EffectiveNoise { xi_exact, xi_approx, xi_star, cooperativity })
}

/// Uniform `gamma` at which `Xi* = 4 g~^2 / kappa` (unit cooperativity of the
/// fully connected graph), taking the smallest `4 g~_k^2 / kappa_k` over `k`.
pub fn unit_cooperativity_gamma(params: &SystemParams) -> Result<f64> {
    params.validate()?;
    let nbar = params.nbar()?;
    let target = (0..params.n())
        .map(|k| 4.0 * params.g_tilde[k].powi(2) / params.kappa[k])
        .fold(f64::INFINITY, f64::min);
    let per_gamma = 0.5 * (2.0 * params.r).exp() * nbar.iter().map(|nb| nb + 0.5).sum::<f64>();
    Ok(target / per_gamma)
}
