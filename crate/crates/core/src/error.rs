use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate linear system: {0}")]
    DegenerateSystem(String),

    #[error("underdetermined system: {rows} equations for {unknowns} unknowns")]
    Underdetermined { rows: usize, unknowns: usize },

    #[error("integration failed at x = {x}: {reason}")]
    IntegrationFailure { x: f64, reason: String },

    #[error("eigenvalue search window exhausted: found {found} of {requested} eigenvalues below {upper}")]
    SearchWindowExhausted {
        found: usize,
        requested: usize,
        upper: f64,
    },

    #[error("singular denominator at x = {x}")]
    SingularDenominator { x: f64 },

    #[error("degenerate division: {0}")]
    DivisionDegenerate(String),

    #[error("too many failed profile solves: {failed} of {total}")]
    ProfileFailure { failed: usize, total: usize },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
