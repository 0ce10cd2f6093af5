use thiserror::Error;

/// Crate-wide error type. Variants map one-to-one onto the contract
/// violations the public operations can report.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{context}: zero mode {residual:.3e} exceeds tolerance {tol:.3e}")]
    ZeroModeViolation {
        context: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("symbol is not finite at lattice frequency {mode:?}")]
    NonFiniteSymbol { mode: Vec<i64> },

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("exponent {0} outside the admitted range")]
    BadExponent(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("divergence residual {residual:.3e} exceeds certificate tolerance {tol:.3e}")]
    NotDivergenceFree { residual: f64, tol: f64 },

    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),

    #[error("order {alpha} outside (0, {dim}) for dimension {dim}")]
    BadAlpha { alpha: f64, dim: usize },

    #[error("time grid mismatch: {0}")]
    TimeGridMismatch(String),

    #[error("initial energy is zero; drift is undefined")]
    ZeroEnergy,

    #[error("trajectory was forced; conservation check applies to free evolution only")]
    NotFreeEvolution,

    #[error("exponent tuple is missing required field `{0}`")]
    MissingField(&'static str),

    #[error("exponent tuple carries field `{0}` that its condition system does not read")]
    UnexpectedField(&'static str),

    #[error("checker for `{expected}` applied to a `{got}` tuple")]
    WrongTheorem { expected: &'static str, got: String },

    #[error("no admissible point: {0}")]
    Infeasible(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid exponent: {0}")]
    ParseExponent(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
