use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: self-loop on vertex `{label}`")]
    SelfLoop { line: usize, label: String },
    #[error("line {line}: duplicate edge {a}-{b}")]
    DuplicateEdge { line: usize, a: String, b: String },
    #[error("{}unknown vertex `{label}`", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    UnknownVertex { line: Option<usize>, label: String },

    #[error("elements belong to algebras of different dimensions")]
    AlgebraMismatch,
    #[error("rho is undefined on the diagonal (x = y)")]
    DiagonalPoint,
    #[error("the zero vector has no projective class")]
    ZeroVector,

    #[error("linear map does not preserve the bracket kernel; it does not extend to an automorphism")]
    NotBracketCompatible,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation not available in {0} mode")]
    ModeMismatch(&'static str),
    #[error("generator {index} lies outside T x L for the coherent block structure")]
    BlockStructureViolation { index: usize },
    #[error("generator {index} does not stabilize the lattice")]
    LatticeNotStabilized { index: usize },
    #[error("generator {index} is not an integer matrix of determinant +-1")]
    NonUnimodular { index: usize },

    #[error("generator {index}: {inner}")]
    Generator { index: usize, inner: Box<Error> },

    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{path}: {inner}")]
    InFile { path: String, inner: Box<Error> },

    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
