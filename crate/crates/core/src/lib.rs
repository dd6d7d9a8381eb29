//! Steady-state simulator and drive synthesis for Gaussian cluster states of
//! `N` mechanical resonators stabilized by `N` multifrequency-driven optical
//! modes.
//!
//! The crate is organized bottom-up:
//!
//! - [`graphs`]: adjacency matrices that define the target cluster.
//! - [`model`]: physical parameters, the Bogoliubov pair `(X, Y)`, damping and
//!   noise matrices, drive synthesis and rotating-wave diagnostics.
//! - [`numerics`]: dense complex kernels (Lyapunov solve, spectral abscissa,
//!   log-determinant).
//! - [`steady_state`]: drift/noise assembly, steady correlations, covariances,
//!   fidelity and nullifier variances.
//! - [`experiments`]: scenario configuration, presets, sweeps and CSV output.

pub mod constants;
pub mod error;
pub mod experiments;
pub mod graphs;
pub mod model;
pub mod numerics;
pub mod steady_state;

pub use error::{Error, Result};
pub use graphs::{make_graph, AdjacencyMatrix, GraphKind};
pub use model::{BogoliubovPair, SystemParams};
pub use numerics::ComplexMatrix;
pub use steady_state::{solve_steady, SteadyStateResult};
