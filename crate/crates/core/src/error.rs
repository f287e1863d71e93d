//! Error types shared across the crate.
//!
//! Errors split into two families: *validation* errors (bad input, caught
//! before any numerics run) and *numerical diagnostics* (a solve hit a
//! resonance singularity, an iteration failed to converge, or a computed
//! quantity violates a bound that is guaranteed to hold — the last one
//! signals an implementation bug, never a user error).

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Structure or parameter validation failed; the message names the
    /// offending entry.
    #[error("invalid input: {0}")]
    Validation(String),

    /// Adjacent permittivities are equal, so the interface contrast is
    /// undefined. `interface` is 1-based (interface j sits at radius r_j).
    #[error("degenerate contrast at interface {interface}: adjacent permittivities are equal")]
    DegenerateContrast { interface: usize },

    /// An operation received a structure of the wrong dimension.
    #[error("dimension mismatch: expected {expected}D, got {got}D")]
    DimensionMismatch { expected: u8, got: u8 },

    /// Permittivity recovery at the spectrum endpoint lambda = -1 is
    /// unbounded.
    #[error("permittivity pole: lambda = -1 has no finite permittivity")]
    LambdaPole,

    /// Explicit enumeration was asked for a layer count past its cap.
    #[error("enumeration cap exceeded: N={n} > {cap}; use the dynamic-programming evaluator")]
    EnumerationTooLarge { n: usize, cap: usize },

    /// The linear system is numerically singular. This is the resonance
    /// signal: when present, `nearest_mode` carries the closest plasmon
    /// mode lambda.
    #[error("numerically singular system{}", match nearest_mode {
        Some(l) => format!(" (nearest plasmon mode lambda = {l})"),
        None => String::new(),
    })]
    SingularSystem { nearest_mode: Option<f64> },

    /// The eigenvalue iteration did not converge within its cap.
    #[error("eigenvalue iteration failed to converge after {iterations} sweeps")]
    EigenNonConvergence { iterations: usize },

    /// A computed quantity violates a bound that holds in exact arithmetic
    /// (real spectrum, root interval). Indicates a bug, not bad input.
    #[error("theorem violation (implementation bug): {0}")]
    TheoremViolation(String),
}

impl Error {
    /// True for errors raised by numerics rather than input validation.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularSystem { .. }
                | Error::EigenNonConvergence { .. }
                | Error::TheoremViolation(_)
        )
    }
}
