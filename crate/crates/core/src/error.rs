use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a Bogoliubov transformation (residuals {norm:.3e}, {symmetry:.3e})")]
    NonSymplectic { norm: f64, symmetry: f64 },

    #[error("drive synthesis needs g[{k}][{j}] > 0 (1-based) but it is {value}")]
    Synthesis { k: usize, j: usize, value: f64 },

    #[error("mechanical frequencies {m} and {m_prime} (1-based) coincide; rotating-wave premise violated")]
    DegenerateFrequencies { m: usize, m_prime: usize },

    #[error("drift matrix is not Hurwitz (spectral abscissa {abscissa:.6e})")]
    Stability { abscissa: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("matrix is not positive definite: {0}")]
    Definiteness(String),

    #[error("covariance has imaginary residue {residue:.3e} above threshold {threshold:.3e}")]
    ImaginaryResidue { residue: f64, threshold: f64 },

    #[error("rotating-wave approximation violated (max ratio {max_ratio:.4e} > {limit:.4e})")]
    RwaViolated { max_ratio: f64, limit: f64 },

    #[error("config error: {0}")]
    Config(String),

    /// A failure while solving one configuration, with that configuration echoed.
    #[error("{source} [at {context}]")]
    Point { context: String, source: Box<Error> },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors that stem from the physics (instability, unphysical states)
    /// rather than from malformed input.
    pub fn is_physics(&self) -> bool {
        if let Error::Point { source, .. } = self {
            return source.is_physics();
        }
        matches!(
            self,
            Error::Stability { .. }
                | Error::Definiteness(_)
                | Error::ImaginaryResidue { .. }
                | Error::NonSymplectic { .. }
                | Error::Numerical(_)
                | Error::RwaViolated { .. }
                | Error::DegenerateFrequencies { .. }
        )
    }
}
