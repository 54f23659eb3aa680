use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid turn geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid evaluation point: {0}")]
    InvalidPoint(String),

    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),

    #[error(
        "log argument vanishes near a conductor corner (r_a={r_a}, r={r_eval}, dz={dz}, phi={phi})"
    )]
    CornerSingularity {
        r_a: f64,
        r_eval: f64,
        dz: f64,
        phi: f64,
    },

    #[error("turn {index}: {source}")]
    Turn {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(
        "oracle did not converge after {levels} refinements (last relative change {last_rel:e})"
    )]
    NoConvergence { levels: usize, last_rel: f64 },

    #[error("point lies on the axis; use the on-axis oracle")]
    AxisPoint,

    #[error("design radius {index} = {value} m is outside [{lo}, {hi}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("objective vectors differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("objective vector contains a non-finite value")]
    NonFinite,

    #[error("point {index} does not dominate the hypervolume reference")]
    PointBeyondReference { index: usize },

    #[error("evaluator failed at generation {generation}: {message}")]
    EvaluatorFailure { generation: usize, message: String },

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("schema version {found} does not match supported version {expected}")]
    SchemaMismatch { found: u64, expected: u64 },

    #[error("malformed run record: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
