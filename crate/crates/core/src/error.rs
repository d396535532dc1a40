use thiserror::Error;

/// Errors produced by chain construction, spectral analysis, the codec and
/// the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("chain has more than one recurrent class: {0}")]
    Irreducibility(String),

    #[error("vertex {0} has zero total edge weight")]
    IsolatedVertex(usize),

    #[error("detailed balance violated at ({i},{j}): |{lhs} - {rhs}| > tol")]
    NotReversible { i: usize, j: usize, lhs: f64, rhs: f64 },

    #[error("K[{0}][{0}] = {1} is not zero")]
    DiagonalNotZero(usize, f64),

    #[error("state {0} has zero row sum in the theta parametrization")]
    ZeroRow(usize),

    #[error("state {0} has zero stationary mass")]
    ZeroMassState(usize),

    #[error("tuple-chain verification requires k <= {max}, got k = {k}")]
    DimensionGuard { k: usize, max: usize },

    #[error("symbol {symbol} outside alphabet [1, {k}]")]
    Alphabet { symbol: u32, k: usize },

    #[error("bit stream ended mid-codeword")]
    TruncatedStream,

    #[error("arithmetic decoder state mismatch: {0}")]
    ModelMismatch(String),

    #[error("bad container magic")]
    BadMagic,

    #[error("search did not converge: {0}")]
    NonConvergence(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
