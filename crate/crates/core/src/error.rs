//! Error taxonomy shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Evaluation at a pole of the function (e.g. Γ at a non-positive integer,
    /// ζ at 1, the kernel at τ=1).
    #[error("pole: {0}")]
    Pole(String),

    /// Input outside the documented domain of validity.
    #[error("domain: {0}")]
    Domain(String),

    /// A series or limit that genuinely diverges at the requested point
    /// (e.g. Li₁(e^{iθ}) at θ ≡ 0 mod 2π).
    #[error("divergence: {0}")]
    Divergence(String),

    /// Adaptive refinement stalled above tolerance, a contour tail failed its
    /// decay check, or an excision study did not converge.
    #[error("convergence: {0}")]
    Convergence(String),

    /// A constrained index set came out empty (t too small for the exponents).
    #[error("empty set: {0}")]
    EmptySet(String),
}

pub type Result<T> = std::result::Result<T, Error>;
