use thiserror::Error;

pub type Result<T> = std::result::Result<T, HolonomyError>;

/// Failure modes shared by every module in the crate.
///
/// Each variant carries enough context for a one-line, machine-parsable
/// report; [`HolonomyError::kind`] gives a stable short tag.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HolonomyError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("state is rank deficient (min eigenvalue {min_eigenvalue:e} < {floor:e}); use the closed forms")]
    SingularState { min_eigenvalue: f64, floor: f64 },

    #[error("degenerate spectrum (eigenvalue gap {gap:e}); interferometric eigenbasis is ambiguous")]
    DegenerateSpectrum { gap: f64 },

    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),

    #[error("orthogonal vertex pair (overlap {overlap:e})")]
    OrthogonalVertices { overlap: f64 },

    #[error("{name} = {value} outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("path parameter {t} outside [0, {end}]")]
    OutOfRange { t: f64, end: f64 },

    #[error("parallelity defect {defect:e} exceeds tolerance {tolerance:e}; increase the step count")]
    ParallelityDefect { defect: f64, tolerance: f64 },

    #[error("ratio undefined: {0}")]
    Undefined(String),

    #[error("spec line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl HolonomyError {
    /// Short stable tag used by the CLI's machine-parsable error line.
    pub fn kind(&self) -> &'static str {
        match self {
            HolonomyError::NonSquare { .. } => "non-square",
            HolonomyError::DimensionMismatch { .. } => "dimension-mismatch",
            HolonomyError::InvalidDimension(_) => "invalid-dimension",
            HolonomyError::InvalidState(_) => "invalid-state",
            HolonomyError::SingularState { .. } => "singular-state",
            HolonomyError::DegenerateSpectrum { .. } => "degenerate-spectrum",
            HolonomyError::DegenerateTriangle(_) => "degenerate-triangle",
            HolonomyError::OrthogonalVertices { .. } => "orthogonal-vertices",
            HolonomyError::OutOfDomain { .. } => "out-of-domain",
            HolonomyError::OutOfRange { .. } => "out-of-range",
            HolonomyError::ParallelityDefect { .. } => "parallelity-defect",
            HolonomyError::Undefined(_) => "undefined",
            HolonomyError::Parse { .. } => "parse",
        }
    }
}
