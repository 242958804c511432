//! Cylindrical Bessel functions J_m(x) of integer order, and the product
//! sums over them that close the moment formulas.
//!
//! Evaluation is a Miller-type backward recurrence: seed far above the
//! turning point, recurse down with J_{m-1} = (2m/x) J_m - J_{m+1}, and
//! normalize with J_0 + 2 (J_2 + J_4 + ...) = 1. Past the turning point
//! m ~ x + 40 x^(1/3) the functions decay super-exponentially, so orders
//! beyond it are reported as exact zeros.

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Largest order served before the range guard trips.
pub const MAX_ORDER: i64 = 1_000_000;

/// Largest argument served before the range guard trips.
pub const MAX_ARGUMENT: f64 = 500_000.0;

/// Order beyond which |J_m(x)| has dropped below any tolerance used here.
pub fn significant_order_limit(x: f64) -> usize {
    (x + 40.0 * x.cbrt() + 50.0).ceil() as usize
}

/// Extra orders above the turning point used to seed the recurrence.
const SEED_MARGIN: usize = 52;

/// Rescale threshold while the downward recurrence grows.
const RESCALE_AT: f64 = 1e250;

fn check_range(order: i64, x: f64) -> Result<()> {
    if !x.is_finite() || !(0.0..=MAX_ARGUMENT).contains(&x) || order.abs() > MAX_ORDER {
        return Err(Error::BesselOutOfRange { order, argument: x });
    }
    Ok(())
}

/// J_0(x) ..= J_max(x) for x >= 0.
pub fn bessel_j_array(max_order: usize, x: f64) -> Result<Vec<f64>> {
    check_range(max_order as i64, x)?;
    if x == 0.0 {
        let mut out = vec![0.0; max_order + 1];
        out[0] = 1.0;
        return Ok(out);
    }

    let cutoff = significant_order_limit(x);
    let top = cutoff + SEED_MARGIN;
    let mut f = vec![0.0f64; top + 2];
    f[top] = 1e-30;
    for m in (1..=top).rev() {
        f[m - 1] = (2.0 * m as f64 / x) * f[m] - f[m + 1];
        if f[m - 1].abs() > RESCALE_AT {
            for v in f.iter_mut() {
                *v *= 1.0 / RESCALE_AT;
            }
        }
    }

    let mut norm = CompensatedSum::new();
    norm.add(f[0]);
    for m in (2..=top).step_by(2) {
        norm.add(2.0 * f[m]);
    }
    let norm = norm.value();

    let mut out = vec![0.0; max_order + 1];
    for (m, slot) in out.iter_mut().enumerate() {
        if m <= cutoff {
            *slot = f[m] / norm;
        }
    }
    Ok(out)
}

/// J_order(x) for integer order (either sign) and x >= 0, using
/// J_{-m}(x) = (-1)^m J_m(x).
pub fn bessel_j(order: i64, x: f64) -> Result<f64> {
    check_range(order, x)?;
    let m = order.unsigned_abs() as usize;
    let arr = bessel_j_array(m, x)?;
    let v = arr[m];
    if order < 0 && order % 2 != 0 {
        Ok(-v)
    } else {
        Ok(v)
    }
}

/// Direct truncated summation of sum_mu mu^p J(mu) J(mu - nu) given an
/// order-indexed evaluator. Exposed with a pluggable evaluator so a harness
/// can feed corrupted values and watch the identity checks fail.
pub fn product_sum_with(j: impl Fn(i64) -> f64, p: u32, nu: i64, mu_limit: i64) -> f64 {
    assert!(p <= 2, "only p in {{0, 1, 2}} is defined");
    let mut acc = CompensatedSum::new();
    for mu in -mu_limit..=mu_limit {
        let weight = match p {
            0 => 1.0,
            1 => mu as f64,
            _ => (mu as f64) * (mu as f64),
        };
        acc.add(weight * j(mu) * j(mu - nu));
    }
    acc.value()
}

/// sum_mu mu^p J_mu(t) J_{mu-nu}(t) by direct truncated summation.
pub fn bessel_product_sum(p: u32, nu: i64, t: f64) -> Result<f64> {
    let mu_limit = significant_order_limit(t) as i64 + nu.abs() + 2;
    let arr = bessel_j_array(mu_limit as usize, t)?;
    let j = |m: i64| -> f64 {
        let idx = m.unsigned_abs() as usize;
        if idx >= arr.len() {
            return 0.0;
        }
        if m < 0 && m % 2 != 0 {
            -arr[idx]
        } else {
            arr[idx]
        }
    };
    Ok(product_sum_with(j, p, nu, mu_limit))
}

/// Closed form the product sums must reproduce:
///   p = 0: delta(nu, 0)
///   p = 1: (t/2) [delta(nu, -1) + delta(nu, 1)]
///   p = 2: (t/2)^2 [delta(nu, -2) + 2 delta(nu, 0) + delta(nu, 2)]
///          + (t/2) [delta(nu, 1) - delta(nu, -1)]
///
/// The odd part of the p = 2 case follows from applying
/// mu J_mu = (t/2)(J_{mu-1} + J_{mu+1}) twice and reducing with the p = 0
/// orthogonality sum.
pub fn bessel_product_sum_closed_form(p: u32, nu: i64, t: f64) -> f64 {
    assert!(p <= 2, "only p in {{0, 1, 2}} is defined");
    let d = |v: i64| if nu == v { 1.0 } else { 0.0 };
    let h = t / 2.0;
    match p {
        0 => d(0),
        1 => h * (d(-1) + d(1)),
        _ => h * h * (d(-2) + 2.0 * d(0) + d(2)) + h * (d(1) - d(-1)),
    }
}

/// One checked identity instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCase {
    pub p: u32,
    pub nu: i64,
    pub t: f64,
    pub computed: f64,
    pub expected: f64,
    pub abs_err: f64,
}

/// Outcome of the full identity sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub cases: Vec<IdentityCase>,
    pub max_abs_err: f64,
}

/// Arguments the identity sweep covers by default.
pub const IDENTITY_SUITE_ARGS: [f64; 5] = [0.5, 1.0, 5.0, 20.0, 100.0];

/// Range of offsets nu covered by the identity sweep.
pub const IDENTITY_SUITE_NU: i64 = 4;

/// Check every product sum against its closed form for p in {0,1,2},
/// |nu| <= 4, and the given arguments.
pub fn run_identity_suite(ts: &[f64]) -> Result<IdentityReport> {
    run_identity_suite_with(bessel_j, ts)
}

/// As [`run_identity_suite`] but with a pluggable point evaluator.
pub fn run_identity_suite_with(
    eval: impl Fn(i64, f64) -> Result<f64>,
    ts: &[f64],
) -> Result<IdentityReport> {
    let mut cases = Vec::new();
    let mut max_abs_err = 0.0f64;
    for &t in ts {
        let mu_limit = significant_order_limit(t) as i64 + IDENTITY_SUITE_NU + 2;
        let lo = -(mu_limit + IDENTITY_SUITE_NU);
        let hi = mu_limit + IDENTITY_SUITE_NU;
        let mut vals = Vec::with_capacity((hi - lo + 1) as usize);
        for m in lo..=hi {
            vals.push(eval(m, t)?);
        }
        let j = |m: i64| vals[(m - lo) as usize];
        for p in 0..=2u32 {
            for nu in -IDENTITY_SUITE_NU..=IDENTITY_SUITE_NU {
                let computed = product_sum_with(j, p, nu, mu_limit);
                let expected = bessel_product_sum_closed_form(p, nu, t);
                let abs_err = (computed - expected).abs();
                max_abs_err = max_abs_err.max(abs_err);
                cases.push(IdentityCase {
                    p,
                    nu,
                    t,
                    computed,
                    expected,
                    abs_err,
                });
            }
        }
    }
    Ok(IdentityReport { cases, max_abs_err })
}
