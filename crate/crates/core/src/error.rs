use thiserror::Error;

/// Errors produced by the library and mapped onto CLI exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BrfError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("space is not aligned: {reason} (residual {residual:e})")]
    NotAligned { reason: String, residual: f64 },
    #[error("misuse: {0}")]
    Misuse(String),
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("division by zero: {0}")]
    Division(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("unknown space id `{0}`")]
    UnknownSpace(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl BrfError {
    /// Process exit code: 2 bad input, 3 numerical failure, 4 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            BrfError::Parameter(_)
            | BrfError::DegenerateInput(_)
            | BrfError::UnknownSpace(_)
            | BrfError::Malformed(_)
            | BrfError::UnsupportedSpace(_)
            | BrfError::Misuse(_)
            | BrfError::NotAligned { .. }
            | BrfError::Io(_) => 2,
            BrfError::Numerical(_)
            | BrfError::SingularPoint(_)
            | BrfError::Division(_)
            | BrfError::Construction(_) => 3,
            BrfError::InternalInconsistency(_) | BrfError::Verification(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BrfError::Parameter(_) => "parameter",
            BrfError::DegenerateInput(_) => "degenerate_input",
            BrfError::Construction(_) => "construction",
            BrfError::NotAligned { .. } => "not_aligned",
            BrfError::Misuse(_) => "misuse",
            BrfError::UnsupportedSpace(_) => "unsupported_space",
            BrfError::InternalInconsistency(_) => "internal_inconsistency",
            BrfError::Numerical(_) => "numerical",
            BrfError::SingularPoint(_) => "singular_point",
            BrfError::Division(_) => "division",
            BrfError::Verification(_) => "verification",
            BrfError::UnknownSpace(_) => "unknown_space",
            BrfError::Malformed(_) => "malformed",
            BrfError::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, BrfError>;
