//! Rotating-wave diagnostics.
//!
//! Every neglected term oscillates at some frequency difference; it is
//! negligible when its coupling is small against that frequency. Each margin
//! below is one such (coupling, frequency) pair.
//!
//! - `linewidth`: `kappa_k` against `|Omega_j - Omega_m|` (sideband resolution).
//! - `coupling`: `|g_kj alpha_km|`, `|g_kj alpha_k,m+N|` against `|Omega_j - Omega_m|`, `j != m`.
//! - `beat_difference`: `|2 g_kj beta_jkmm'|` (red-red and blue-blue tone
//!   pairs) against `|Omega_m - Omega_m'|`, `m != m'`, maximized over `j`.
//! - `beat_sum`: `|2 g_kj beta_jk,m,m'+N|`, `|2 g_kj beta_jk,m+N,m'|` against
//!   `Omega_m + Omega_m'`, maximized over `j`.
//!
//! `beta` is the mean mechanical amplitude driven by the beat of two tones,
//! `g_kj alpha alpha'* / (beat - Omega_j + i gamma_j / 2)`. With equally spaced
//! mechanical frequencies some beats hit `Omega_j` exactly and the margin is
//! limited only by `gamma_j`.

use num_complex::Complex64;

use super::{synthesize_drives, SystemParams};
use crate::error::{Error, Result};
use crate::graphs::AdjacencyMatrix;

/// One smallness condition `lhs << rhs`; indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RwaMargin {
    pub k: usize,
    pub m: usize,
    pub m_prime: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RwaReport {
    /// `max_k g~_k e^r / (2 Omega_bar)` with `Omega_bar` the smallest
    /// mechanical spacing (or `Omega_1` for a single mode).
    pub simple_ratio: f64,
    pub linewidth: Vec<RwaMargin>,
    pub coupling: Vec<RwaMargin>,
    pub beat_difference: Vec<RwaMargin>,
    pub beat_sum: Vec<RwaMargin>,
    pub safety: f64,
    /// Every ratio, all families included, is at most `1 / safety`.
    pub pass: bool,
}

fn worst(v: &[RwaMargin]) -> f64 {
    v.iter().map(|m| m.ratio).fold(0.0, f64::max)
}

impl RwaReport {
    pub fn limit(&self) -> f64 {
        1.0 / self.safety
    }

    /// Largest ratio of each family: (linewidth, coupling, beat difference, beat sum).
    pub fn worst_by_family(&self) -> [f64; 4] {
        [worst(&self.linewidth), worst(&self.coupling), worst(&self.beat_difference), worst(&self.beat_sum)]
    }

    pub fn max_ratio(&self) -> f64 {
        self.worst_by_family().into_iter().fold(self.simple_ratio, f64::max)
    }

    /// Scalar ratio, linewidths and direct couplings only (the conditions
    /// that do not involve the driven mean mechanical amplitudes).
    pub fn coupling_pass(&self) -> bool {
        let lim = self.limit();
        self.simple_ratio <= lim && worst(&self.linewidth) <= lim && worst(&self.coupling) <= lim
    }
}

fn margin(k: usize, m: usize, m_prime: usize, lhs: f64, rhs: f64) -> RwaMargin {
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    RwaMargin { k: k + 1, m: m + 1, m_prime: m_prime + 1, lhs, rhs, ratio }
}

/// `|2 g num / (den_re + i gamma/2)|`, zero when the numerator vanishes.
fn beat_term(two_g: f64, num: Complex64, den_re: f64, gamma: f64) -> f64 {
    if num.norm() == 0.0 || two_g == 0.0 {
        return 0.0;
    }
    let den = Complex64::new(den_re, 0.5 * gamma).norm();
    two_g * num.norm() / den
}

pub fn check_rwa(params: &SystemParams, a: &AdjacencyMatrix, safety: f64) -> Result<RwaReport> {
    params.validate()?;
    if !(safety >= 1.0) {
        return Err(Error::Domain(format!("RWA safety factor must be >= 1, got {safety}")));
    }
    let n = params.n();
    let w = &params.omega_m;
    for m in 0..n {
        for mp in m + 1..n {
            if w[m] == w[mp] {
                return Err(Error::DegenerateFrequencies { m: m + 1, m_prime: mp + 1 });
            }
        }
    }
    let omega_bar = params.min_spacing().unwrap_or(w[0]);
    let g_max = params.g_tilde.iter().copied().fold(0.0, f64::max);
    let simple_ratio = g_max * params.r.exp() / (2.0 * omega_bar);

    let drives = synthesize_drives(params, a)?;
    let alpha = &drives.alpha_bar;
    let g = params.g_single_or_uniform();

    let mut linewidth = Vec::new();
    let mut coupling = Vec::new();
    for k in 0..n {
        for j in 0..n {
            for m in 0..n {
                if j == m {
                    continue;
                }
                let spacing = (w[j] - w[m]).abs();
                if k == 0 {
                    // kappa_j is indexed by the mode whose sideband is addressed
                    linewidth.push(margin(j, j, m, params.kappa[j], spacing));
                }
                let lhs = g[(k, j)] * alpha[(k, m)].norm().max(alpha[(k, m + n)].norm());
                coupling.push(margin(k, j, m, lhs, spacing));
            }
        }
    }

    let mut beat_difference = Vec::new();
    let mut beat_sum = Vec::new();
    for k in 0..n {
        for m in 0..n {
            for mp in 0..n {
                let mut diff = 0.0f64;
                let mut sum = 0.0f64;
                for j in 0..n {
                    let two_g = 2.0 * g[(k, j)] * g[(k, j)];
                    let gj = params.gamma[j];
                    if m != mp {
                        let red = alpha[(k, m)] * alpha[(k, mp)].conj();
                        let blue = alpha[(k, m + n)] * alpha[(k, mp + n)].conj();
                        diff = diff
                            .max(beat_term(two_g, red, w[mp] - w[m] - w[j], gj))
                            .max(beat_term(two_g, blue, w[m] - w[mp] - w[j], gj));
                    }
                    let red_blue = alpha[(k, m)] * alpha[(k, mp + n)].conj();
                    let blue_red = alpha[(k, m + n)] * alpha[(k, mp)].conj();
                    sum = sum
                        .max(beat_term(two_g, red_blue, -w[m] - w[mp] - w[j], gj))
                        .max(beat_term(two_g, blue_red, w[m] + w[mp] - w[j], gj));
                }
                if m != mp {
                    beat_difference.push(margin(k, m, mp, diff, (w[m] - w[mp]).abs()));
                }
                beat_sum.push(margin(k, m, mp, sum, w[m] + w[mp]));
            }
        }
    }

    let mut report = RwaReport { simple_ratio, linewidth, coupling, beat_difference, beat_sum, safety, pass: false };
    report.pass = report.max_ratio() <= report.limit();
    Ok(report)
}
