//! Scaling-law extraction from recorded moment series: power-law and
//! logarithmic fits of sigma(n), localization detection, and the moving
//! average used to tame the step-parity oscillations before a log fit.

use crate::error::{Error, Result};
use crate::evolve::MomentSeries;
use crate::state::MomentRecord;

/// Minimum usable records for a fit.
pub const MIN_FIT_POINTS: usize = 10;

/// Minimum records past the cut for a localization verdict.
pub const MIN_LOCALIZATION_POINTS: usize = 50;

/// Trailing relative range of sigma below which a series counts as bounded.
pub const LOCALIZATION_RANGE_THRESHOLD: f64 = 0.5;

/// Absolute rank-correlation above which sigma is considered trending.
pub const LOCALIZATION_TREND_THRESHOLD: f64 = 0.3;

/// The trend test only applies when sigma's range exceeds this fraction of
/// its mean; drift below that resolution (a converged series still creeping
/// toward its limit) is not a trend.
const TREND_RESOLUTION_FRACTION: f64 = 1e-3;

/// Default smoothing window for logarithmic-regime fits.
pub const DEFAULT_SMOOTH_WINDOW: usize = 101;

/// Result of fitting sigma(n) over a step window.
///
/// For [`fit_power_law`], `exponent` and `prefactor` parameterize
/// sigma = prefactor * n^exponent. For [`fit_logarithmic`] the fit is
/// sigma = exponent * ln(n) + prefactor, i.e. the slope lands in
/// `exponent` and the intercept in `prefactor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub n_lo: u64,
    pub n_hi: u64,
}

fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = mean_y - slope * mean_x;

    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - (slope * x + intercept);
        ss_res += r * r;
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else if ss_res <= 1e-24 {
        1.0
    } else {
        0.0
    };
    (slope, intercept, r_squared)
}

/// Ordinary least squares of log(sigma) on log(n) over records with
/// n in [n_lo, n_hi]. Records with sigma <= 0 are excluded.
pub fn fit_power_law(series: &MomentSeries, n_lo: u64, n_hi: u64) -> Result<FitResult> {
    if n_lo >= n_hi {
        return Err(Error::InvalidParameter(format!(
            "fit window [{n_lo}, {n_hi}] is empty"
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in series.window(n_lo, n_hi) {
        if r.sigma > 0.0 {
            xs.push((r.n as f64).ln());
            ys.push(r.sigma.ln());
        }
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            have: xs.len(),
            need: MIN_FIT_POINTS,
            context: "power-law fit needs records with sigma > 0 in the window",
        });
    }
    let (slope, intercept, r_squared) = ols(&xs, &ys);
    Ok(FitResult {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared,
        n_lo,
        n_hi,
    })
}

/// Ordinary least squares of sigma on ln(n) over records with n in
/// [n_lo, n_hi]. The slope is returned in the `exponent` field and the
/// intercept in `prefactor`.
pub fn fit_logarithmic(series: &MomentSeries, n_lo: u64, n_hi: u64) -> Result<FitResult> {
    if n_lo >= n_hi {
        return Err(Error::InvalidParameter(format!(
            "fit window [{n_lo}, {n_hi}] is empty"
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in series.window(n_lo, n_hi) {
        xs.push((r.n as f64).ln());
        ys.push(r.sigma);
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            have: xs.len(),
            need: MIN_FIT_POINTS,
            context: "logarithmic fit needs records in the window",
        });
    }
    let (slope, intercept, r_squared) = ols(&xs, &ys);
    Ok(FitResult {
        exponent: slope,
        prefactor: intercept,
        r_squared,
        n_lo,
        n_hi,
    })
}

/// Verdict on whether sigma has stopped spreading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationVerdict {
    pub is_localized: bool,
    pub sigma_mean: f64,
    pub sigma_range: f64,
}

/// Average ranks (ties share the mean rank).
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mean_rank = (i + j) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mean_rank;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

/// Rank correlation of sigma against n. When sigma's whole range sits below
/// the resolution floor the correlation is reported as zero: ranking noise
/// or sub-resolution convergence drift is not a trend.
fn rank_trend(records: &[&MomentRecord], sigma_mean: f64, sigma_range: f64) -> f64 {
    if sigma_range <= sigma_mean.abs() * TREND_RESOLUTION_FRACTION {
        return 0.0;
    }
    let sigmas: Vec<f64> = records.iter().map(|r| r.sigma).collect();
    let steps: Vec<f64> = records.iter().map(|r| r.n as f64).collect();
    pearson(&average_ranks(&steps), &average_ranks(&sigmas))
}

/// Decide whether the trailing part of the series (records with n >= n_lo)
/// is bounded: relative range below 0.5 and no monotone trend in the
/// rank correlation sense.
pub fn detect_localization(series: &MomentSeries, n_lo: u64) -> Result<LocalizationVerdict> {
    let tail: Vec<&MomentRecord> = series.records.iter().filter(|r| r.n >= n_lo).collect();
    if tail.len() < MIN_LOCALIZATION_POINTS {
        return Err(Error::InsufficientData {
            have: tail.len(),
            need: MIN_LOCALIZATION_POINTS,
            context: "localization verdict needs records past the cut",
        });
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for r in &tail {
        min = min.min(r.sigma);
        max = max.max(r.sigma);
        sum += r.sigma;
    }
    let sigma_mean = sum / tail.len() as f64;
    let sigma_range = max - min;
    let rel_range = if sigma_mean > 0.0 {
        sigma_range / sigma_mean
    } else {
        0.0
    };
    let trend = rank_trend(&tail, sigma_mean, sigma_range);
    Ok(LocalizationVerdict {
        is_localized: rel_range < LOCALIZATION_RANGE_THRESHOLD
            && trend.abs() < LOCALIZATION_TREND_THRESHOLD,
        sigma_mean,
        sigma_range,
    })
}

/// Centered moving average of m1, m2, and sigma with an odd window;
/// endpoints shrink the half-width symmetrically.
pub fn smooth(series: &MomentSeries, window: usize) -> Result<MomentSeries> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "smoothing window must be odd and >= 1, got {window}"
        )));
    }
    let recs = &series.records;
    let half = window / 2;
    let mut out = Vec::with_capacity(recs.len());
    for i in 0..recs.len() {
        let e = half.min(i).min(recs.len() - 1 - i);
        let slice = &recs[i - e..=i + e];
        let w = slice.len() as f64;
        out.push(MomentRecord {
            n: recs[i].n,
            m1: slice.iter().map(|r| r.m1).sum::<f64>() / w,
            m2: slice.iter().map(|r| r.m2).sum::<f64>() / w,
            sigma: slice.iter().map(|r| r.sigma).sum::<f64>() / w,
        });
    }
    Ok(MomentSeries {
        records: out,
        schedule_descriptor: series.schedule_descriptor.clone(),
    })
}
