use arccoord::poisson::PoissonError;
use arccoord::{IoError, ScanError, SpineError, StrebelError, SurfaceError};

pub const EXIT_PARSE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_NO_CONVERGENCE: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid input.
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numeric(String),
    #[error("Newton iteration did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_PARSE,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("malformed JSON: {e}"))
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SurfaceError> for CliError {
    fn from(e: SurfaceError) -> Self {
        match e {
            SurfaceError::NonPositiveLength { .. } | SurfaceError::LengthCount { .. } | SurfaceError::NotMaximal => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<SpineError> for CliError {
    fn from(e: SpineError) -> Self {
        match e {
            SpineError::NoConvergence { residual, iterations, .. } => CliError::NoConvergence { residual, iterations },
            SpineError::Surface(e) => e.into(),
            SpineError::Ribbon(_) | SpineError::InvalidTarget(_) | SpineError::ArcOutOfRange { .. } => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<PoissonError> for CliError {
    fn from(e: PoissonError) -> Self {
        match e {
            PoissonError::Surface(e) => e.into(),
            PoissonError::NotTrivalent(_) => CliError::Input(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Spine(e) => e.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<StrebelError> for CliError {
    fn from(e: StrebelError) -> Self {
        CliError::Input(e.to_string())
    }
}
