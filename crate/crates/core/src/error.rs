use thiserror::Error;

/// Errors raised by geometry construction, configuration checks and the solvers.
#[derive(Debug, Error)]
pub enum CloakError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node count {0} is not supported (need an even count of at least 16)")]
    NodeCount(usize),

    #[error("unknown shape `{0}`")]
    UnknownShape(String),

    #[error("curve is not a confocal ellipse")]
    NotConfocal,

    #[error("curve is not simple or not counterclockwise: {0}")]
    BadCurve(String),

    #[error("nesting violated: {0}")]
    Nesting(String),

    #[error("shell permittivity equals background permittivity; contrast parameter is singular")]
    DegenerateContrast,

    #[error("point lies inside the region where the requested series is undefined: {0}")]
    OutsideDomain(String),

    #[error("target node lies on a distinct source curve")]
    TargetOnSource,

    #[error("linear system is singular")]
    Singular,

    #[error("linear system is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("solution was computed for different curves than the configuration")]
    CurveMismatch,

    #[error("Neumann data violate compatibility: projected mass {0:.3e}")]
    Compatibility(f64),

    #[error("degenerate optimization problem: {0}")]
    Degenerate(String),

    #[error("empty sampling set or window")]
    Empty,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CloakError {
    /// True for failures that come from the numerics rather than the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            CloakError::Singular
                | CloakError::IllConditioned(_)
                | CloakError::Compatibility(_)
                | CloakError::Degenerate(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, CloakError>;
