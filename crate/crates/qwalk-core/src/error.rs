use thiserror::Error;

/// Errors raised by walk construction, evolution, and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Initial chirality pair is not unit-norm.
    #[error("initial amplitudes are not normalized: |a|^2 + |b|^2 = {norm} (must be 1 within {tol})")]
    NotNormalized { norm: f64, tol: f64 },

    /// A distribution produced m2 - m1^2 below the floating-point noise floor.
    #[error("inconsistent moments: variance {variance} is below -1e-12")]
    NegativeVariance { variance: f64 },

    /// A table schedule was asked for an angle past its last entry.
    #[error("coin schedule exhausted: step {step} exceeds table length {len}")]
    ScheduleExhausted { step: u64, len: usize },

    /// The walker window outgrew the configured site cap.
    #[error("walker window of {sites} sites exceeds cap of {cap}")]
    WindowCapExceeded { sites: usize, cap: usize },

    /// Bessel order or argument outside the supported range.
    #[error("Bessel evaluation out of range: order {order}, argument {argument}")]
    BesselOutOfRange { order: i64, argument: f64 },

    /// Sigma-coefficient extraction found A < -1e-12, i.e. sigma^2 would go
    /// negative for large effective times.
    #[error("inconsistent initial data: leading sigma coefficient A = {a} < -1e-12")]
    InconsistentInitialData { a: f64 },

    /// Not enough usable records for a fit or a localization verdict.
    #[error("insufficient data: {have} usable records, need at least {need} ({context})")]
    InsufficientData {
        have: usize,
        need: usize,
        context: &'static str,
    },

    /// A parameter failed validation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
