use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("classes live in different lattices: `{left}` vs `{right}`")]
    LatticeMismatch { left: String, right: String },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid class: {0}")]
    InvalidClass(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("not applicable: {0}")]
    Inapplicable(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("model is missing required assertions: {}", .0.join(", "))]
    MissingAssertions(Vec<String>),

    #[error("invalid sum: {}", .0.join("; "))]
    InvalidSum(Vec<String>),

    #[error("descriptor error{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Descriptor { line: Option<usize>, message: String },

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
