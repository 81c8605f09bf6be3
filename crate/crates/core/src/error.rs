use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix order {0} outside the supported range 1..=8")]
    UnsupportedDimension(usize),

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    Asymmetric(f64),

    #[error("linear system is singular")]
    Singular,

    #[error("Lyapunov solution is not positive definite (lambda_min = {0:e}); state matrix is not Hurwitz")]
    NotHurwitz(f64),

    #[error("inertia must be positive, got {0}")]
    NonPositiveInertia(f64),

    #[error("unsupported observer order {0} (expected 3 or 5)")]
    UnsupportedOrder(usize),

    #[error("{key}: {message}")]
    Config { key: String, message: String },

    #[error("bound check requires a Luenberger ESO n=3 run, got {0}")]
    UnsupportedStructure(String),

    #[error("series too short: need at least {needed} samples, got {found}")]
    SeriesTooShort { needed: usize, found: usize },

    #[error("missing signal `{0}`")]
    MissingSignal(String),

    #[error("simulation diverged at t = {0}")]
    Diverged(f64),

    #[error(
        "target J_e = {target:.4e} not bracketed: J_e ranges over [{je_high_omega:.4e}, \
         {je_low_omega:.4e}] for omega_o in [{omega_lo}, {omega_hi}]"
    )]
    Bracket {
        target: f64,
        omega_lo: f64,
        omega_hi: f64,
        je_low_omega: f64,
        je_high_omega: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
