//! Crate-wide error type and exit-code mapping for the CLI.

use thiserror::Error;

/// Errors surfaced by engine operations, oracles, and the CLI layer.
///
/// Mathematically impossible states (a non-integral exponent, a divisibility
/// failure inside a proven identity) are *not* represented here; those panic,
/// because reaching one means the implementation is wrong, not the input.
#[derive(Debug, Error)]
pub enum Error {
    /// Adaptive precision escalation hit the configured bit cap before the
    /// requested quantity could be certified.
    #[error("precision cap reached at {bits} bits while {context}")]
    PrecisionCap { context: String, bits: u32 },

    /// A comparison could not be decided: the certified interval straddles
    /// the threshold even at the precision cap.
    #[error("undecided comparison: {what}")]
    Undecided { what: String },

    /// The quadrature level refinement ran out of levels before the
    /// level-to-level difference dropped below the requested tolerance.
    /// Carries the best estimate and the error it achieved.
    #[error("quadrature did not converge in {levels} levels (best {best:e}, achieved error {achieved:e})")]
    QuadratureDidNotConverge {
        best: f64,
        achieved: f64,
        levels: u32,
    },

    /// A cache or checkpoint file was produced by an incompatible tool
    /// version or with different survey parameters.
    #[error("stale {kind} at {path}: {detail}")]
    StaleFile {
        kind: &'static str,
        path: String,
        detail: String,
    },

    /// A cache/CSV line failed to parse.
    #[error("malformed {kind} record: {line:?}")]
    MalformedRecord { kind: &'static str, line: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable CLI exit code: 0 success, 2 usage, 3 undecided, 4 precision cap.
    /// Other failures map to 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Undecided { .. } => 3,
            Error::PrecisionCap { .. } => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
