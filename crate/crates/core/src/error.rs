use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },

    #[error("generator index {index} out of range for {strands} strands")]
    InvalidGenerator { index: i64, strands: usize },

    #[error("need at least {needed} strands or points, got {got}")]
    TooSmall { needed: usize, got: usize },

    #[error("invalid torsion kind {0}; expected 0, 1 or 2")]
    InvalidTorsionKind(u8),

    #[error("cabling braid must fix its last strand")]
    CableNotFixing,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("points {0} and {1} coincide")]
    CoincidentPoints(usize, usize),

    #[error("fiber value {0} lies in {{0, 1, inf}}")]
    DegenerateFiberValue(String),

    #[error("no construction for (n = {n}, m = {m}): {reason}")]
    Infeasible { n: usize, m: usize, reason: String },

    #[error("root finding failed: residual {residual:.3e} after {iterations} iterations")]
    RootFinding { residual: f64, iterations: usize },

    #[error("separation {separation:.3e} below tolerance {tolerance:.3e}; {hint}")]
    Separation {
        separation: f64,
        tolerance: f64,
        hint: String,
    },

    #[error("ill-conditioned configuration: cross-ratio within {distance:.3e} of {{0, 1, inf}}")]
    IllConditioned { distance: f64 },

    #[error("tracking step fell below floor {floor:.1e} at t = {t:.6}")]
    TrackingFloor { t: f64, floor: f64 },

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    /// True for failures of numerical certification (root residuals,
    /// separation, conditioning, tracking), as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RootFinding { .. }
                | Error::Separation { .. }
                | Error::IllConditioned { .. }
                | Error::TrackingFloor { .. }
        )
    }
}
