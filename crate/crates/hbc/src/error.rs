use thiserror::Error;

/// Errors produced by the channel, entropy, and region machinery.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Matrix or tensor-factor dimensions do not line up.
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),

    /// A matrix expected to be Hermitian is not, within tolerance.
    #[error("matrix is not Hermitian: max |A[i][j] - conj(A[j][i])| = {residual:.3e}")]
    NotHermitian { residual: f64 },

    /// A state failed a density-matrix or purity precondition.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A channel specification violates its defining invariants.
    #[error("invalid channel spec: {0}")]
    InvalidSpec(String),

    /// An input ensemble violates its invariants for the selected task.
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    /// An optimizer parameter vector cannot be decoded into an ensemble.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// The channel is not classically embedded, so the brute-force
    /// oracle does not apply.
    #[error("channel is not classically embedded: {0}")]
    NotClassical(String),

    /// The problem exceeds the built-in desk-scale size bounds.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// An iterative numerical routine failed to converge.
    #[error("numerical failure: {0}")]
    NoConvergence(String),
}
