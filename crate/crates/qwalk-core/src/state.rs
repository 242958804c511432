//! Walker state on the integer line: a two-component complex amplitude per
//! site, stored densely over the interval of sites that can be nonzero.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Tolerance for unit-norm checks on states and distributions.
pub const NORM_TOL: f64 = 1e-12;

/// Variance below this is treated as an internal inconsistency rather than
/// floating-point noise.
pub const VARIANCE_FLOOR: f64 = -1e-12;

/// Two-component amplitude at one site; `a` is the left-moving (upper)
/// component, `b` the right-moving (lower) one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Spinor {
    pub a: Complex64,
    pub b: Complex64,
}

impl Spinor {
    pub const ZERO: Spinor = Spinor {
        a: Complex64::new(0.0, 0.0),
        b: Complex64::new(0.0, 0.0),
    };

    pub fn new(a: Complex64, b: Complex64) -> Self {
        Spinor { a, b }
    }

    /// Site probability |a|^2 + |b|^2.
    #[inline]
    pub fn prob(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }
}

/// Dense window of spinor amplitudes starting at site `k_min`.
///
/// Shared by the discrete walker state and the Bessel-series amplitude
/// reconstruction, which produce the same shape of data.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeMap {
    k_min: i64,
    amps: Vec<Spinor>,
}

impl AmplitudeMap {
    pub fn new(k_min: i64, amps: Vec<Spinor>) -> Self {
        assert!(!amps.is_empty(), "amplitude window must be non-empty");
        AmplitudeMap { k_min, amps }
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.amps.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn spinors(&self) -> &[Spinor] {
        &self.amps
    }

    /// Amplitude at site `k`; zero outside the window.
    pub fn at(&self, k: i64) -> Spinor {
        if k < self.k_min || k > self.k_max() {
            Spinor::ZERO
        } else {
            self.amps[(k - self.k_min) as usize]
        }
    }

    /// Iterate `(site, spinor)` in ascending site order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Spinor)> {
        self.amps
            .iter()
            .enumerate()
            .map(move |(i, s)| (self.k_min + i as i64, s))
    }

    /// Total probability, compensated.
    pub fn norm(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for s in &self.amps {
            acc.add(s.prob());
        }
        acc.value()
    }

    /// Position probabilities P_k = |a_k|^2 + |b_k|^2 over the window.
    pub fn probability(&self) -> Distribution {
        Distribution {
            k_min: self.k_min,
            probs: self.amps.iter().map(Spinor::prob).collect(),
        }
    }

    /// Drop leading/trailing sites whose probability is at or below `floor`.
    /// Interior sites are untouched, so the window stays an interval.
    pub(crate) fn trim(&mut self, floor: f64) {
        let first = self.amps.iter().position(|s| s.prob() > floor);
        let first = match first {
            Some(i) => i,
            None => return, // nothing above floor; keep as is
        };
        let last = self.amps.iter().rposition(|s| s.prob() > floor).unwrap();
        if first > 0 {
            self.amps.copy_within(first..=last, 0);
        }
        self.amps.truncate(last - first + 1);
        self.k_min += first as i64;
    }
}

/// Full walker state: amplitudes plus the discrete step counter `n`
/// (the physical time is t = (n-1) in units of the step duration).
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    map: AmplitudeMap,
    step: u64,
}

impl WalkerState {
    /// Walker concentrated on a single site with chirality `(a, b)`,
    /// at step counter n = 1.
    pub fn new_localized(site: i64, a: Complex64, b: Complex64) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm,
                tol: NORM_TOL,
            });
        }
        Ok(WalkerState {
            map: AmplitudeMap::new(site, vec![Spinor::new(a, b)]),
            step: 1,
        })
    }

    pub(crate) fn from_parts(map: AmplitudeMap, step: u64) -> Self {
        WalkerState { map, step }
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn window(&self) -> (i64, i64) {
        (self.map.k_min(), self.map.k_max())
    }

    pub fn site_count(&self) -> usize {
        self.map.len()
    }

    pub fn amplitudes(&self) -> &AmplitudeMap {
        &self.map
    }

    pub fn norm(&self) -> f64 {
        self.map.norm()
    }

    pub fn probability(&self) -> Distribution {
        self.map.probability()
    }
}

/// Position probabilities over a dense site window.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    k_min: i64,
    probs: Vec<f64>,
}

impl Distribution {
    #[cfg(test)]
    pub(crate) fn new(k_min: i64, probs: Vec<f64>) -> Self {
        Distribution { k_min, probs }
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.probs.len() as i64 - 1
    }

    /// Probability at site `k`; zero outside the window.
    pub fn at(&self, k: i64) -> f64 {
        if k < self.k_min || k > self.k_max() {
            0.0
        } else {
            self.probs[(k - self.k_min) as usize]
        }
    }

    /// Iterate `(site, probability)` in ascending site order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.k_min + i as i64, p))
    }

    /// Total probability, compensated.
    pub fn total(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for &p in &self.probs {
            acc.add(p);
        }
        acc.value()
    }

    /// Largest |k| whose probability exceeds `threshold`, if any.
    pub fn support_edge(&self, threshold: f64) -> Option<i64> {
        self.iter()
            .filter(|&(_, p)| p > threshold)
            .map(|(k, _)| k.abs())
            .max()
    }

    /// First and second moments and the standard deviation.
    ///
    /// A variance in [-1e-12, 0) is clamped to zero; anything lower is
    /// reported as an inconsistency.
    pub fn moments(&self) -> Result<Moments> {
        let mut m1 = CompensatedSum::new();
        let mut m2 = CompensatedSum::new();
        for (k, p) in self.iter() {
            let kf = k as f64;
            m1.add(kf * p);
            m2.add(kf * kf * p);
        }
        Moments::from_raw(m1.value(), m2.value())
    }
}

/// First moment, second moment, and standard deviation of a distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub m1: f64,
    pub m2: f64,
    pub sigma: f64,
}

impl Moments {
    /// Build from raw moment sums, clamping tiny negative variance.
    pub fn from_raw(m1: f64, m2: f64) -> Result<Self> {
        let variance = m2 - m1 * m1;
        if variance < VARIANCE_FLOOR {
            return Err(Error::NegativeVariance { variance });
        }
        Ok(Moments {
            m1,
            m2,
            sigma: variance.max(0.0).sqrt(),
        })
    }
}

/// One (n, m1, m2, sigma) sample of an evolution run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRecord {
    pub n: u64,
    pub m1: f64,
    pub m2: f64,
    pub sigma: f64,
}

impl MomentRecord {
    pub fn new(n: u64, moments: Moments) -> Self {
        MomentRecord {
            n,
            m1: moments.m1,
            m2: moments.m2,
            sigma: moments.sigma,
        }
    }
}
