use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("matrix is not symmetric (asymmetry {asymmetry:e} relative to norm)")]
    NotSymmetric { asymmetry: f64 },

    #[error("basis is not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("unsupported regime: need N > F, got N={n}, F={f}")]
    UnsupportedRegime { n: usize, f: usize },

    #[error("spectral gap collapsed: λ_(K-1) - λ_K = {gap:e}, trace = {trace:e}")]
    SpectralGap { gap: f64, trace: f64 },

    #[error("search space of {size} partitions exceeds the limit of {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u128 },

    #[error("{what} = {value} is outside the domain [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("eigen solver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("model is degenerate: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
