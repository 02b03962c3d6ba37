use alloc::string::String;

use crate::weibull::FitDiagnostics;

/// Errors raised by the core algorithms.
///
/// Every variant except [`Error::NonConvergence`] describes invalid input;
/// front ends map the two groups onto distinct exit codes.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("negative duration {0}")]
    NegativeDuration(f64),
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("probability {0} outside the open interval (0, 1)")]
    ProbabilityOutOfRange(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("asset {asset_id}: {reason}")]
    InvalidAsset { asset_id: String, reason: String },
    #[error("insufficient events: {found} found, at least {required} required")]
    InsufficientEvents { found: usize, required: usize },
    #[error("insufficient usable curve points: {found} found, at least 2 required")]
    InsufficientPoints { found: usize },
    #[error("inconsistent probabilities: long-window {long} < short-window {short}")]
    InconsistentProbabilities { short: f64, long: f64 },
    #[error("non-monotone inversion unsupported (beta = {0} <= 1)")]
    NonMonotoneInversion(f64),
    #[error("probability {p} not reached within [0, {limit}] years")]
    ThresholdNotReached { p: f64, limit: f64 },
    #[error("fit did not converge after {} iterations", .diagnostics.iterations)]
    NonConvergence { diagnostics: FitDiagnostics },
    #[error("activity catalog has no {kind} entry for {voltage_kv} kV")]
    CatalogGap { kind: String, voltage_kv: u16 },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("reports are not comparable: {0}")]
    Incomparable(String),
}

impl Error {
    /// True for numerical failures, false for input validation problems.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
