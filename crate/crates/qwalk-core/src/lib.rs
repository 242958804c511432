//! Discrete-time quantum walk on the line with a time-dependent coin.
//!
//! The walker carries a two-state chirality; each step applies a coin
//! rotation by an angle theta_n followed by a chirality-conditioned shift.
//! Fixing the schedule cos(theta_n) = n^(-alpha) / sqrt(2) drives the
//! wave-function spreading through five regimes as alpha grows: ballistic,
//! sub-ballistic, diffusive, sub-diffusive, and localized, with sigma(n)
//! following n^(1-alpha) for alpha < 1, ln(n) at alpha = 1, and staying
//! bounded beyond.
//!
//! The crate provides:
//!
//! - [`state`]: spinor amplitudes on a dense site window, distributions,
//!   moments;
//! - [`coin`]: the angle schedules (constant, power-law, linear, tabulated);
//! - [`evolve`]: the one-step unitary map and the series-recording driver;
//! - [`bessel`]: integer-order Bessel functions and the product-sum
//!   identities behind the moment formulas;
//! - [`analytic`]: effective time, Bessel-series amplitudes, closed-form
//!   moments and sigma coefficients, regime prediction;
//! - [`analysis`]: power-law / logarithmic fits, localization detection,
//!   smoothing;
//! - [`io`]: CSV serialization and angle-table parsing.

pub mod analysis;
pub mod analytic;
pub mod bessel;
pub mod coin;
pub mod error;
pub mod evolve;
pub mod io;
pub mod numeric;
pub mod state;

pub use num_complex::Complex64;

pub use analysis::{
    detect_localization, fit_logarithmic, fit_power_law, smooth, FitResult, LocalizationVerdict,
};
pub use analytic::{
    effective_time, predict_regime, AnalyticModel, Regime, RegimePrediction, SigmaCoefficients,
    SpreadingLaw,
};
pub use bessel::{bessel_j, bessel_j_array, bessel_product_sum, run_identity_suite};
pub use coin::CoinSchedule;
pub use error::{Error, Result};
pub use evolve::{evolve, snapshot_distribution, step, EvolutionRun, MomentSeries};
pub use state::{AmplitudeMap, Distribution, MomentRecord, Moments, Spinor, WalkerState};
