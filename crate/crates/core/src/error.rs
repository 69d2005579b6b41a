use num_complex::Complex64;

/// Errors produced anywhere in the estimation and clustering pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("polynomial degree must be at least 1")]
    InvalidDegree,

    #[error("non-finite coefficient at index {index}")]
    NonFinite { index: usize },

    #[error("root solver did not converge after {iterations} QR iterations ({} of {degree} roots found)", partial.len())]
    RootSolverFailure {
        iterations: usize,
        degree: usize,
        partial: Vec<Complex64>,
    },

    #[error("spectrum size mismatch: {left} vs {right}")]
    SpectrumSizeMismatch { left: usize, right: usize },

    #[error("degenerate spectrum: eigenvalues {i} and {j} are closer than {tol:e}")]
    DegenerateSpectrum { i: usize, j: usize, tol: f64 },

    #[error("shape error: {0}")]
    ShapeError(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("generation failed after {tries} tries: {what}")]
    GenerationFailure { what: &'static str, tries: usize },

    #[error("change-of-basis matrix is singular or ill-conditioned (condition number {cond:e})")]
    SingularBasis { cond: f64 },

    #[error("rank-deficient design: |R_ii| min {min:e} < 1e-10 * max {max:e}")]
    RankDeficient { min: f64, max: f64 },

    #[error("insufficient data: {retained} usable rows, need at least {required}")]
    InsufficientData { retained: usize, required: usize },

    #[error("exogenous inputs requested but the series has none")]
    MissingInputs,

    #[error("AR order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("requested {clusters} clusters for only {points} items")]
    TooManyClusters { clusters: usize, points: usize },

    #[error("labeling length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for failures caused by the numbers rather than by the input
    /// files or the caller's arguments.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RootSolverFailure { .. }
                | Error::DegenerateSpectrum { .. }
                | Error::GenerationFailure { .. }
                | Error::SingularBasis { .. }
                | Error::RankDeficient { .. }
        )
    }
}
