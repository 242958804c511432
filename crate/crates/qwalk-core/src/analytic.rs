//! Closed-form asymptotics of the slowly-varying-coin walk: the effective
//! time, the Bessel-series amplitude reconstruction, and the moment /
//! sigma-coefficient formulas that serve as an independent oracle against
//! the discrete map.
//!
//! Everything here assumes the power-law schedule (slow coin variation);
//! the formulas are not claimed for linear or tabulated schedules.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::bessel;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::state::{AmplitudeMap, Moments, Spinor, WalkerState, NORM_TOL};

/// Default reference step at which the model is seeded from a discrete
/// state. Early enough that the seeded formulas track the discrete map's
/// growth, late enough that t0 is well above the step duration.
pub const DEFAULT_N0: u64 = 10;

/// Bessel terms below this magnitude are outside the reconstruction range.
const AMPLITUDE_TRUNCATION: f64 = 1e-16;

/// Effective dimensionless time between steps n0 and n under the power-law
/// schedule:
///
///   t* = (n^(1-alpha) - n0^(1-alpha)) / (sqrt(2) (1 - alpha))   for alpha != 1
///   t* = ln(n / n0) / sqrt(2)                                    for alpha == 1
///
/// Evaluated through exp_m1 so the two branches join continuously at
/// alpha = 1.
pub fn effective_time(alpha: f64, n0: u64, n: u64) -> f64 {
    assert!(alpha >= 0.0 && alpha.is_finite(), "alpha must be >= 0");
    assert!(n0 >= 1 && n >= n0, "need n >= n0 >= 1");
    let ln_n = (n as f64).ln();
    let ln_n0 = (n0 as f64).ln();
    if alpha == 1.0 {
        FRAC_1_SQRT_2 * (ln_n - ln_n0)
    } else {
        let q = 1.0 - alpha;
        FRAC_1_SQRT_2 * ((q * ln_n).exp_m1() - (q * ln_n0).exp_m1()) / q
    }
}

/// Spreading regimes selected by the power-law exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Ballistic,
    SubBallistic,
    Diffusive,
    SubDiffusive,
    Localized,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Regime::Ballistic => "ballistic",
            Regime::SubBallistic => "sub-ballistic",
            Regime::Diffusive => "diffusive",
            Regime::SubDiffusive => "sub-diffusive",
            Regime::Localized => "localized",
        };
        f.write_str(name)
    }
}

/// Asymptotic growth law of the standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpreadingLaw {
    /// sigma ~ n^exponent
    PowerLaw { exponent: f64 },
    /// sigma ~ ln n
    Logarithmic,
    /// sigma stays bounded
    Bounded,
}

impl SpreadingLaw {
    /// The power-law exponent, when the law is a power law.
    pub fn exponent(&self) -> Option<f64> {
        match self {
            SpreadingLaw::PowerLaw { exponent } => Some(*exponent),
            _ => None,
        }
    }
}

impl fmt::Display for SpreadingLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpreadingLaw::PowerLaw { exponent } => write!(f, "n^{exponent}"),
            SpreadingLaw::Logarithmic => f.write_str("ln n"),
            SpreadingLaw::Bounded => f.write_str("bounded"),
        }
    }
}

/// Regime and growth law predicted for a power-law schedule exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimePrediction {
    pub regime: Regime,
    pub law: SpreadingLaw,
}

/// Classify the spreading driven by cos(theta_n) = n^(-alpha)/sqrt(2):
/// ballistic at alpha = 0, power-law n^(1-alpha) up to alpha = 1 (with a
/// logarithmic marginal case there), bounded beyond.
pub fn predict_regime(alpha: f64) -> Result<RegimePrediction> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "regime prediction needs alpha >= 0, got {alpha}"
        )));
    }
    let prediction = if alpha == 0.0 {
        RegimePrediction {
            regime: Regime::Ballistic,
            law: SpreadingLaw::PowerLaw { exponent: 1.0 },
        }
    } else if alpha < 0.5 {
        RegimePrediction {
            regime: Regime::SubBallistic,
            law: SpreadingLaw::PowerLaw {
                exponent: 1.0 - alpha,
            },
        }
    } else if alpha == 0.5 {
        RegimePrediction {
            regime: Regime::Diffusive,
            law: SpreadingLaw::PowerLaw { exponent: 0.5 },
        }
    } else if alpha < 1.0 {
        RegimePrediction {
            regime: Regime::SubDiffusive,
            law: SpreadingLaw::PowerLaw {
                exponent: 1.0 - alpha,
            },
        }
    } else if alpha == 1.0 {
        RegimePrediction {
            regime: Regime::SubDiffusive,
            law: SpreadingLaw::Logarithmic,
        }
    } else {
        RegimePrediction {
            regime: Regime::Localized,
            law: SpreadingLaw::Bounded,
        }
    };
    Ok(prediction)
}

/// Coefficients of sigma(t*) = sqrt(A t*^2 + B t* + C).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SigmaCoefficients {
    /// sigma at the given effective time; the radicand is clamped at zero
    /// against floating-point noise.
    pub fn sigma_at(&self, t_star: f64) -> f64 {
        (self.a * t_star * t_star + self.b * t_star + self.c).max(0.0).sqrt()
    }
}

/// Amplitudes frozen at a reference step, with the initial-condition sums
/// the moment formulas need:
///
///   S1 = sum_j Re[a_j a*_{j-1} + b_j b*_{j-1}]
///   S2 = sum_j Re[a_j a*_{j-2} + b_j b*_{j-2}]
///   S3 = sum_j (2j - 1) Re[a_j a*_{j-1} + b_j b*_{j-1}]
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticModel {
    n0: u64,
    alpha: f64,
    seed: AmplitudeMap,
    s1: f64,
    s2: f64,
    s3: f64,
    m1_0: f64,
    m2_0: f64,
}

impl AnalyticModel {
    /// Seed the model from a discrete-map state; the reference step n0 is
    /// the state's current step counter.
    pub fn from_state(state: &WalkerState, alpha: f64) -> Result<Self> {
        Self::from_amplitudes(state.step(), alpha, state.amplitudes().clone())
    }

    /// Seed the model from an explicit amplitude window.
    pub fn from_amplitudes(n0: u64, alpha: f64, seed: AmplitudeMap) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "analytic model needs alpha >= 0, got {alpha}"
            )));
        }
        if n0 < 1 {
            return Err(Error::InvalidParameter(
                "reference step n0 must be >= 1".into(),
            ));
        }
        let norm = seed.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm,
                tol: NORM_TOL,
            });
        }

        let spinors = seed.spinors();
        let mut s1 = CompensatedSum::new();
        let mut s2 = CompensatedSum::new();
        let mut s3 = CompensatedSum::new();
        for i in 1..spinors.len() {
            let j = seed.k_min() + i as i64;
            let lag1 = (spinors[i].a * spinors[i - 1].a.conj()
                + spinors[i].b * spinors[i - 1].b.conj())
            .re;
            s1.add(lag1);
            s3.add((2 * j - 1) as f64 * lag1);
        }
        for i in 2..spinors.len() {
            let lag2 = (spinors[i].a * spinors[i - 2].a.conj()
                + spinors[i].b * spinors[i - 2].b.conj())
            .re;
            s2.add(lag2);
        }
        let m0 = seed.probability().moments()?;

        Ok(AnalyticModel {
            n0,
            alpha,
            seed,
            s1: s1.value(),
            s2: s2.value(),
            s3: s3.value(),
            m1_0: m0.m1,
            m2_0: m0.m2,
        })
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn seed(&self) -> &AmplitudeMap {
        &self.seed
    }

    pub fn initial_moments(&self) -> (f64, f64) {
        (self.m1_0, self.m2_0)
    }

    /// Effective time elapsed from the reference step to step n.
    pub fn t_star(&self, n: u64) -> f64 {
        effective_time(self.alpha, self.n0, n)
    }

    /// Reconstruct the amplitude window at effective time t* >= 0:
    ///
    ///   a_k(t*) = sum_l (-1)^(k-l) a_l(0) J_{k-l}(t*)
    ///
    /// and likewise for b. The output window extends past the seed support
    /// only as far as the Bessel factors stay above 1e-16.
    pub fn amplitudes_at(&self, t_star: f64) -> Result<AmplitudeMap> {
        assert!(t_star >= 0.0, "effective time must be >= 0");
        if t_star == 0.0 {
            return Ok(self.seed.clone());
        }

        let cutoff = bessel::significant_order_limit(t_star);
        let j = bessel::bessel_j_array(cutoff, t_star)?;
        let reach = match j.iter().rposition(|v| v.abs() >= AMPLITUDE_TRUNCATION) {
            Some(m) => m as i64,
            None => 0,
        };

        let seed = self.seed.spinors();
        let k_lo = self.seed.k_min() - reach;
        let k_hi = self.seed.k_max() + reach;
        let mut out = vec![Spinor::ZERO; (k_hi - k_lo + 1) as usize];
        for (slot, k) in out.iter_mut().zip(k_lo..=k_hi) {
            let mut a = Complex64::new(0.0, 0.0);
            let mut b = Complex64::new(0.0, 0.0);
            for (i, s) in seed.iter().enumerate() {
                let l = self.seed.k_min() + i as i64;
                let order = k - l;
                if order.abs() > reach {
                    continue;
                }
                // J_{-m} = (-1)^m J_m combined with the (-1)^(k-l) prefactor:
                // negative orders contribute with weight +J_|m|.
                let weight = if order >= 0 {
                    let v = j[order as usize];
                    if order % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                } else {
                    j[(-order) as usize]
                };
                a += s.a * weight;
                b += s.b * weight;
            }
            *slot = Spinor::new(a, b);
        }
        Ok(AmplitudeMap::new(k_lo, out))
    }

    /// Moments at effective time t*:
    ///
    ///   m1(t*) = -t* S1 + m1(0)
    ///   m2(t*) = (t*^2 / 2)(1 + S2) - t* S3 + m2(0)
    pub fn closed_form_moments(&self, t_star: f64) -> Moments {
        let m1 = -t_star * self.s1 + self.m1_0;
        let m2 = 0.5 * t_star * t_star * (1.0 + self.s2) - t_star * self.s3 + self.m2_0;
        Moments {
            m1,
            m2,
            sigma: (m2 - m1 * m1).max(0.0).sqrt(),
        }
    }

    /// Coefficients of sigma^2 = A t*^2 + B t* + C implied by the seed:
    ///
    ///   A = (1 + S2)/2 - S1^2
    ///   B = -S3 + 2 S1 m1(0)
    ///   C = m2(0) - m1(0)^2
    pub fn sigma_coefficients(&self) -> Result<SigmaCoefficients> {
        let a = 0.5 * (1.0 + self.s2) - self.s1 * self.s1;
        if a < -1e-12 {
            return Err(Error::InconsistentInitialData { a });
        }
        let b = -self.s3 + 2.0 * self.s1 * self.m1_0;
        let c = self.m2_0 - self.m1_0 * self.m1_0;
        Ok(SigmaCoefficients {
            a: a.max(0.0),
            b,
            c: c.max(0.0),
        })
    }

    /// The (S1, S2, S3) initial-condition sums.
    pub fn seed_sums(&self) -> (f64, f64, f64) {
        (self.s1, self.s2, self.s3)
    }
}
