//! Deterministic time dependence of the coin angle.
//!
//! The power-law family fixes the cosine of the angle,
//! cos(theta_n) = n^(-alpha) / sqrt(2) for step counter n >= 1, so theta
//! runs from pi/4 (the Hadamard angle, at n = 1 or alpha = 0) toward pi/2.
//! The angle branch is taken in (0, pi/2], which keeps sin(theta) >= 0.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;

use crate::error::{Error, Result};

/// Rule mapping the step counter n to the coin angle theta_n (radians).
#[derive(Debug, Clone, PartialEq)]
pub enum CoinSchedule {
    /// Fixed angle every step.
    Constant { theta: f64 },
    /// cos(theta_n) = n^(-alpha) / sqrt(2), alpha >= 0.
    PowerLaw { alpha: f64 },
    /// theta_n = 2*pi*gamma*(n-1), reduced modulo 2*pi.
    Linear { gamma: f64 },
    /// Explicit angle per step; entry i is the angle at n = i+1.
    Table { angles: Vec<f64> },
}

impl CoinSchedule {
    pub fn constant(theta: f64) -> CoinSchedule {
        CoinSchedule::Constant { theta }
    }

    /// The constant Hadamard coin, theta = pi/4.
    pub fn hadamard() -> CoinSchedule {
        CoinSchedule::Constant {
            theta: std::f64::consts::FRAC_PI_4,
        }
    }

    pub fn power_law(alpha: f64) -> Result<CoinSchedule> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "power-law exponent must be finite and >= 0, got {alpha}"
            )));
        }
        Ok(CoinSchedule::PowerLaw { alpha })
    }

    pub fn linear(gamma: f64) -> Result<CoinSchedule> {
        if !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "linear coefficient must be finite, got {gamma}"
            )));
        }
        Ok(CoinSchedule::Linear { gamma })
    }

    pub fn table(angles: Vec<f64>) -> Result<CoinSchedule> {
        if angles.is_empty() {
            return Err(Error::InvalidParameter(
                "angle table must not be empty".into(),
            ));
        }
        if let Some(bad) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "angle table contains non-finite entry {bad}"
            )));
        }
        Ok(CoinSchedule::Table { angles })
    }

    /// Coin angle at step counter `n` (n >= 1).
    pub fn theta_at(&self, n: u64) -> Result<f64> {
        assert!(n >= 1, "step counter starts at 1");
        match self {
            CoinSchedule::Constant { theta } => Ok(*theta),
            CoinSchedule::PowerLaw { alpha } => {
                Ok((FRAC_1_SQRT_2 * (n as f64).powf(-alpha)).acos())
            }
            CoinSchedule::Linear { gamma } => {
                // Reduce gamma*(n-1) modulo 1 before scaling by 2*pi so the
                // trig argument stays bounded at large n.
                let turns = (gamma * (n - 1) as f64).fract();
                Ok(TAU * turns)
            }
            CoinSchedule::Table { angles } => angles
                .get((n - 1) as usize)
                .copied()
                .ok_or(Error::ScheduleExhausted {
                    step: n,
                    len: angles.len(),
                }),
        }
    }

    /// (cos theta_n, sin theta_n). For the power-law family the cosine is
    /// formed directly from the defining expression and the sine from
    /// sqrt(1 - cos^2), which pins sin >= 0 on the chosen branch.
    pub fn cos_sin_at(&self, n: u64) -> Result<(f64, f64)> {
        match self {
            CoinSchedule::PowerLaw { alpha } => {
                assert!(n >= 1, "step counter starts at 1");
                let c = FRAC_1_SQRT_2 * (n as f64).powf(-alpha);
                Ok((c, (1.0 - c * c).sqrt()))
            }
            _ => {
                let theta = self.theta_at(n)?;
                Ok((theta.cos(), theta.sin()))
            }
        }
    }

    /// Number of steps the schedule can serve, if bounded.
    pub fn horizon(&self) -> Option<u64> {
        match self {
            CoinSchedule::Table { angles } => Some(angles.len() as u64),
            _ => None,
        }
    }

    /// Short textual tag, used to label recorded series.
    pub fn descriptor(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CoinSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoinSchedule::Constant { theta } => write!(f, "constant(theta={theta})"),
            CoinSchedule::PowerLaw { alpha } => write!(f, "powerlaw(alpha={alpha})"),
            CoinSchedule::Linear { gamma } => write!(f, "linear(gamma={gamma})"),
            CoinSchedule::Table { angles } => write!(f, "table(len={})", angles.len()),
        }
    }
}
