#![allow(dead_code)]

use mechcluster::graphs::AdjacencyMatrix;
use mechcluster::model::{cluster_bogoliubov, noise_blocks, SystemParams};
use mechcluster::numerics::{spectral_abscissa, ComplexMatrix};
use mechcluster::steady_state::{drift_matrix, noise_matrix};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

fn lyap_rhs(m: &ComplexMatrix, c: &ComplexMatrix, q: &ComplexMatrix) -> ComplexMatrix {
    m * c + c * m.transpose() + q
}

/// Integrates `dC/dt = M C + C M^T + Q` from `C = 0` with classical RK4
/// until the slowest transient `exp(2 a t)` has decayed below `1e-10`.
pub fn integrate_lyapunov(m: &ComplexMatrix, q: &ComplexMatrix) -> ComplexMatrix {
    let n = m.nrows();
    let a = spectral_abscissa(m).unwrap();
    assert!(a < 0.0, "integration needs a stable drift, abscissa {a}");
    let rho = m.norm();
    let h = 0.05 / rho;
    let t_end = 12.0 / (-a);
    let steps = (t_end / h).ceil() as usize;
    let mut c = ComplexMatrix::zeros(n, n);
    let half = Complex64::new(0.5 * h, 0.0);
    let full = Complex64::new(h, 0.0);
    let sixth = Complex64::new(h / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    for _ in 0..steps {
        let k1 = lyap_rhs(m, &c, q);
        let k2 = lyap_rhs(m, &(&c + &k1 * half), q);
        let k3 = lyap_rhs(m, &(&c + &k2 * half), q);
        let k4 = lyap_rhs(m, &(&c + &k3 * full), q);
        c += (k1 + k2 * two + k3 * two + k4) * sixth;
    }
    c
}

/// Random weighted graph on `n` nodes.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize) -> AdjacencyMatrix {
    let mut w = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in j + 1..n {
            if rng.random_bool(0.6) {
                let v = rng.random_range(-1.2..1.2);
                w[(j, k)] = v;
                w[(k, j)] = v;
            }
        }
    }
    AdjacencyMatrix::new(w).unwrap()
}

/// Random physical model with rates of order one, so that explicit
/// integration stays cheap.
pub fn random_model<R: Rng>(rng: &mut R, n: usize) -> (SystemParams, AdjacencyMatrix) {
    let a = random_graph(rng, n);
    let params = SystemParams {
        omega_m: (1..=n).map(|j| 10.0 * j as f64).collect(),
        kappa: (0..n).map(|_| rng.random_range(0.5..2.0)).collect(),
        gamma: (0..n).map(|_| rng.random_range(0.02..0.2)).collect(),
        temperature: 0.0,
        g_tilde: (0..n).map(|_| rng.random_range(0.1..0.5)).collect(),
        r: rng.random_range(0.0..1.0),
        g_single: None,
        delta: None,
        omega_c: None,
        nbar_override: Some((0..n).map(|_| rng.random_range(0.0..3.0)).collect()),
    };
    (params, a)
}

/// Drift and noise matrices of a model.
pub fn model_matrices(params: &SystemParams, a: &AdjacencyMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let pair = cluster_bogoliubov(a, params.r).unwrap();
    let m = drift_matrix(params, &pair).unwrap();
    let blocks = noise_blocks(&pair, &params.gamma, &params.nbar().unwrap()).unwrap();
    (m, noise_matrix(params, &blocks).unwrap())
}

pub fn rel_diff(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    let scale = y.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let diff = (x - y).iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    diff / scale
}
