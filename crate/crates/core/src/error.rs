use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("fields are not parallel: |E x B| = {cross:e} exceeds {limit:e}")]
    NonParallelFields { cross: f64, limit: f64 },

    #[error("null field (kappa = {kappa:e}): the complex unit vector F/|F| is undefined")]
    NullField { kappa: f64 },

    #[error("unknown splitting scheme `{0}` (expected strang_kdk, strang_dkd, euler_split or forest_ruth)")]
    UnknownScheme(String),

    #[error("invalid splitting scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("step count must be at least 1")]
    ZeroSteps,

    #[error("position {value} on axis {axis} is outside the grid range [{min}, {max}]")]
    OutOfBounds {
        axis: char,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid file line {line}: {message}")]
    GridParse { line: usize, message: String },
}
