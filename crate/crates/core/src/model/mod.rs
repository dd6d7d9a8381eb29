//! Physical parameters and every analytic object derived from them.

mod bogoliubov;
mod dissipation;
mod drives;
mod rwa;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};

pub use bogoliubov::{
    bogoliubov_matrix, check_bogoliubov, cluster_bogoliubov, forward_matrix, BogoliubovPair,
    BogoliubovReport,
};
pub use dissipation::{
    damping_matrices, effective_noise, noise_blocks, unit_cooperativity_gamma, EffectiveNoise, NoiseBlocks,
};
pub use drives::{
    alpha_from_epsilon, collective_couplings, drive_frequencies, pair_from_alpha, synthesize_drives,
    DriveSet,
};
pub use rwa::{check_rwa, RwaMargin, RwaReport};

/// Bose occupancy `1 / (exp(hbar omega / k_B T) - 1)` of a mode at angular
/// frequency `omega` [rad/s] and temperature `temperature` [K].
pub fn thermal_occupancy(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("thermal occupancy needs omega > 0, got {omega}")));
    }
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::Domain(format!("temperature must be >= 0, got {temperature}")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (HBAR * omega / (K_B * temperature)).exp_m1())
}

/// All physical inputs. Frequencies and rates are angular [rad/s].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Mechanical frequencies `Omega_j`.
    pub omega_m: Vec<f64>,
    /// Optical linewidths `kappa_k`.
    pub kappa: Vec<f64>,
    /// Mechanical linewidths `gamma_j`.
    pub gamma: Vec<f64>,
    /// Bath temperature [K].
    pub temperature: f64,
    /// Collective couplings `g~_k`.
    pub g_tilde: Vec<f64>,
    /// Squeezing parameter of the target state.
    pub r: f64,
    /// Single-photon couplings `g_kj` (row = optical mode `k`). Uniform 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_single: Option<DMatrix<f64>>,
    /// Cavity shifts `delta_k = omega~_k - omega_k`; zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<f64>>,
    /// Bare cavity frequencies `omega_k`, only used to print absolute tones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_c: Option<Vec<f64>>,
    /// Replaces the Bose occupancies computed from `(Omega_j, T)`. Testing aid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nbar_override: Option<Vec<f64>>,
}

impl SystemParams {
    /// Uniform optical and mechanical rates over the given mechanical frequencies.
    pub fn uniform(omega_m: Vec<f64>, kappa: f64, gamma: f64, g_tilde: f64, temperature: f64, r: f64) -> Self {
        let n = omega_m.len();
        Self {
            omega_m,
            kappa: vec![kappa; n],
            gamma: vec![gamma; n],
            temperature,
            g_tilde: vec![g_tilde; n],
            r,
            g_single: None,
            delta: None,
            omega_c: None,
            nbar_override: None,
        }
    }

    pub fn n(&self) -> usize {
        self.omega_m.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidShape("at least one mode is required".into()));
        }
        let check_len = |name: &str, len: usize| {
            if len != n {
                Err(Error::Shape(format!("{name} has length {len}, expected {n}")))
            } else {
                Ok(())
            }
        };
        check_len("kappa", self.kappa.len())?;
        check_len("gamma", self.gamma.len())?;
        check_len("g_tilde", self.g_tilde.len())?;
        if let Some(d) = &self.delta {
            check_len("delta", d.len())?;
        }
        if let Some(w) = &self.omega_c {
            check_len("omega_c", w.len())?;
        }
        if let Some(nb) = &self.nbar_override {
            check_len("nbar_override", nb.len())?;
            if nb.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
                return Err(Error::Domain("occupancies must be finite and >= 0".into()));
            }
        }
        if let Some(g) = &self.g_single {
            if g.shape() != (n, n) {
                return Err(Error::Shape(format!("g_single is {:?}, expected ({n}, {n})", g.shape())));
            }
            if g.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
                return Err(Error::Domain("single-photon couplings must be finite and >= 0".into()));
            }
        }
        let nonneg = |name: &str, v: &[f64]| {
            if v.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
                Err(Error::Domain(format!("{name} entries must be finite and >= 0")))
            } else {
                Ok(())
            }
        };
        nonneg("kappa", &self.kappa)?;
        nonneg("gamma", &self.gamma)?;
        nonneg("g_tilde", &self.g_tilde)?;
        if self.omega_m.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
            return Err(Error::Domain("mechanical frequencies must be finite and > 0".into()));
        }
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            return Err(Error::Domain(format!("temperature must be >= 0, got {}", self.temperature)));
        }
        if !self.r.is_finite() {
            return Err(Error::Domain("squeezing parameter must be finite".into()));
        }
        Ok(())
    }

    /// Thermal occupancies `n_j` of the mechanical baths.
    pub fn nbar(&self) -> Result<Vec<f64>> {
        if let Some(nb) = &self.nbar_override {
            return Ok(nb.clone());
        }
        self.omega_m.iter().map(|&w| thermal_occupancy(w, self.temperature)).collect()
    }

    pub fn delta_or_zero(&self) -> Vec<f64> {
        self.delta.clone().unwrap_or_else(|| vec![0.0; self.n()])
    }

    /// Single-photon couplings, defaulting to uniform `g_kj = 1`.
    pub fn g_single_or_uniform(&self) -> DMatrix<f64> {
        self.g_single.clone().unwrap_or_else(|| DMatrix::from_element(self.n(), self.n(), 1.0))
    }

    /// Mechanical quality factors `Omega_j / gamma_j`.
    pub fn quality_factors(&self) -> Vec<f64> {
        self.omega_m.iter().zip(&self.gamma).map(|(w, g)| w / g).collect()
    }

    /// Smallest spacing `min_{j != j'} |Omega_j - Omega_j'|`, `None` for one mode.
    pub fn min_spacing(&self) -> Option<f64> {
        let w = &self.omega_m;
        let mut best: Option<f64> = None;
        for j in 0..w.len() {
            for k in j + 1..w.len() {
                let d = (w[j] - w[k]).abs();
                best = Some(best.map_or(d, |b: f64| b.min(d)));
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::TWO_PI;
    use proptest::prelude::*;

    #[test]
    fn zero_temperature() {
        assert_eq!(thermal_occupancy(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(thermal_occupancy(TWO_PI * 1e9, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn occupancy_one_at_ln2() {
        let t = 0.05;
        let omega = K_B * t * std::f64::consts::LN_2 / HBAR;
        assert!((thermal_occupancy(omega, t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ten_megahertz_at_ten_millikelvin() {
        // x = hbar omega / k_B T evaluated independently, n = 1/(e^x - 1)
        let x = 1.054_571_817e-34 * (2.0 * std::f64::consts::PI * 1e7) / (1.380_649e-23 * 0.01);
        let oracle = 1.0 / (x.exp() - 1.0);
        let n = thermal_occupancy(TWO_PI * 1e7, 0.01).unwrap();
        assert!((n - oracle).abs() < 1e-9 * oracle);
        assert!((n - 20.34).abs() < 0.01, "{n}");
    }

    #[test]
    fn occupancy_domain_errors() {
        assert!(matches!(thermal_occupancy(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(thermal_occupancy(-1.0, 1.0), Err(Error::Domain(_))));
        assert!(thermal_occupancy(1.0, -1.0).is_err());
    }

    #[test]
    fn params_validation() {
        let mut p = SystemParams::uniform(vec![1.0, 2.0], 0.1, 0.01, 0.02, 0.0, 1.0);
        assert!(p.validate().is_ok());
        p.kappa.push(1.0);
        assert!(matches!(p.validate(), Err(Error::Shape(_))));
        let mut p = SystemParams::uniform(vec![1.0, 0.0], 0.1, 0.01, 0.02, 0.0, 1.0);
        assert!(p.validate().is_err());
        p.omega_m[1] = 2.0;
        p.gamma[0] = -1.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn spacing() {
        let p = SystemParams::uniform(vec![1.0, 4.0, 2.5], 0.1, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(p.min_spacing(), Some(1.5));
        let p = SystemParams::uniform(vec![1.0], 0.1, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(p.min_spacing(), None);
    }

    proptest! {
        #[test]
        fn occupancy_monotone(
            w in 1e5f64..1e9, dw in 1e-3f64..1.0,
            t in 1e-3f64..10.0, dt in 1e-3f64..1.0,
        ) {
            let n0 = thermal_occupancy(w, t).unwrap();
            prop_assert!(thermal_occupancy(w * (1.0 + dw), t).unwrap() < n0);
            prop_assert!(thermal_occupancy(w, t * (1.0 + dt)).unwrap() > n0);
        }
    }
}
