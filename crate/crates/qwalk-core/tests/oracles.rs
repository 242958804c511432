//! Independent oracles: a hash-map Hadamard walk, the exact inverse map,
//! the Bessel power series, and the brute-force Bessel-distribution
//! moments, each checked against the library's fast paths.

mod common;

use common::{brute_force_bessel_moments, c64, symmetric_init};
use num_complex::Complex64;
use qwalk_core::evolve::{evolve, snapshot_distribution, step};
use qwalk_core::{bessel, AmplitudeMap, AnalyticModel, CoinSchedule, Spinor, WalkerState};
use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;

type SpinorPair = (Complex64, Complex64);

/// Textbook Hadamard walk on a hash map: scatter each site's coined
/// amplitudes to its neighbors. Structured nothing like the dense engine.
fn textbook_hadamard_step(state: &HashMap<i64, SpinorPair>) -> HashMap<i64, SpinorPair> {
    let h = FRAC_1_SQRT_2;
    let zero = (c64(0.0, 0.0), c64(0.0, 0.0));
    let mut next: HashMap<i64, SpinorPair> = HashMap::new();
    for (&k, &(a, b)) in state {
        let to_left = a * h + b * h;
        let to_right = a * h - b * h;
        next.entry(k - 1).or_insert(zero).0 += to_left;
        next.entry(k + 1).or_insert(zero).1 += to_right;
    }
    next
}

#[test]
fn engine_matches_textbook_hadamard_walk() {
    let mut reference: HashMap<i64, SpinorPair> = HashMap::new();
    reference.insert(0, (c64(FRAC_1_SQRT_2, 0.0), c64(0.0, FRAC_1_SQRT_2)));

    for schedule in [
        CoinSchedule::constant(std::f64::consts::FRAC_PI_4),
        CoinSchedule::power_law(0.0).unwrap(),
    ] {
        let mut reference = reference.clone();
        let mut state = symmetric_init();
        for _ in 0..300 {
            reference = textbook_hadamard_step(&reference);
            state = step(&state, &schedule).unwrap();
        }
        let amps = state.amplitudes();
        for (&k, &(a, b)) in &reference {
            let s = amps.at(k);
            assert!(
                (s.a - a).norm() < 1e-13 && (s.b - b).norm() < 1e-13,
                "amplitude mismatch at site {k}: engine ({}, {}), reference ({a}, {b})",
                s.a,
                s.b
            );
        }
        // and no amplitude where the reference has none
        for (k, s) in amps.iter() {
            if !reference.contains_key(&k) {
                assert!(s.prob() < 1e-26, "spurious amplitude at {k}");
            }
        }
    }
}

/// Solve the map backwards one step: the coin is orthogonal, so
/// a_j = c a'_{j-1} + s b'_{j+1} and b_j = s a'_{j-1} - c b'_{j+1}.
fn step_back(map: &AmplitudeMap, angle_step: u64, schedule: &CoinSchedule) -> AmplitudeMap {
    let (c, s) = schedule.cos_sin_at(angle_step).unwrap();
    let lo = map.k_min() - 1;
    let hi = map.k_max() + 1;
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    for j in lo..=hi {
        let fwd_left = map.at(j - 1);
        let fwd_right = map.at(j + 1);
        out.push(Spinor::new(
            fwd_left.a * c + fwd_right.b * s,
            fwd_left.a * s - fwd_right.b * c,
        ));
    }
    // Keep the window tight so repeated reversal doesn't balloon it.
    let first = out.iter().position(|sp| sp.prob() > 1e-60).unwrap_or(0);
    let last = out
        .iter()
        .rposition(|sp| sp.prob() > 1e-60)
        .unwrap_or(out.len() - 1);
    AmplitudeMap::new(lo + first as i64, out[first..=last].to_vec())
}

#[test]
fn inverse_map_recovers_initial_state() {
    for schedule in [
        CoinSchedule::power_law(0.5).unwrap(),
        CoinSchedule::constant(1.0),
        CoinSchedule::linear(0.137).unwrap(),
    ] {
        let initial = WalkerState::new_localized(0, c64(0.6, 0.0), c64(0.0, 0.8)).unwrap();
        let mut state = initial.clone();
        for _ in 0..100 {
            state = step(&state, &schedule).unwrap();
        }
        let mut map = state.amplitudes().clone();
        for n in (1..=100u64).rev() {
            map = step_back(&map, n, &schedule);
        }
        for k in map.k_min().min(0)..=map.k_max().max(0) {
            let got = map.at(k);
            let want = initial.amplitudes().at(k);
            assert!(
                (got.a - want.a).norm() < 1e-10 && (got.b - want.b).norm() < 1e-10,
                "reversal failed under {schedule} at site {k}: got ({}, {})",
                got.a,
                got.b
            );
        }
    }
}

/// Ascending power series for J_m(x); usable as an oracle for small x.
fn series_bessel_j(m: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    for i in 1..=m {
        term *= half / i as f64;
    }
    let mut sum = term;
    let mut j = 0u32;
    while term.abs() > 1e-25 {
        j += 1;
        term *= -(half * half) / (j as f64 * (m + j) as f64);
        sum += term;
    }
    sum
}

#[test]
fn bessel_matches_power_series_at_small_arguments() {
    for x in [0.05, 0.3, 1.0, 2.0, 3.7, 5.0, 7.5, 10.0] {
        for m in 0..=25u32 {
            let series = series_bessel_j(m, x);
            let fast = bessel::bessel_j(m as i64, x).unwrap();
            assert!(
                (series - fast).abs() < 1e-12,
                "J_{m}({x}): series {series} vs recurrence {fast}"
            );
        }
    }
}

#[test]
fn closed_form_moments_match_brute_force_bessel_moments() {
    // Random-looking but fixed 5-site seed.
    let amps = vec![
        Spinor::new(c64(0.31, 0.12), c64(-0.22, 0.09)),
        Spinor::new(c64(-0.05, 0.44), c64(0.17, -0.28)),
        Spinor::new(c64(0.26, -0.13), c64(0.05, 0.33)),
        Spinor::new(c64(0.19, 0.21), c64(-0.30, -0.11)),
        Spinor::new(c64(-0.14, 0.25), c64(0.23, 0.16)),
    ];
    let norm = AmplitudeMap::new(-2, amps.clone()).norm().sqrt();
    let amps: Vec<Spinor> = amps
        .into_iter()
        .map(|s| Spinor::new(s.a / norm, s.b / norm))
        .collect();
    let model = AnalyticModel::from_amplitudes(7, 0.3, AmplitudeMap::new(-2, amps)).unwrap();

    for t in [0.5, 3.0, 25.0] {
        let closed = model.closed_form_moments(t);
        let (m1, m2) = brute_force_bessel_moments(model.seed(), t);
        assert!(
            (closed.m1 - m1).abs() <= 1e-8 * m1.abs().max(1.0),
            "m1 at t={t}: closed {} vs brute {m1}",
            closed.m1
        );
        assert!(
            (closed.m2 - m2).abs() <= 1e-8 * m2.abs().max(1.0),
            "m2 at t={t}: closed {} vs brute {m2}",
            closed.m2
        );
    }
}

#[test]
fn analytic_amplitudes_match_brute_force_distribution() {
    let state = {
        let mut s = symmetric_init();
        let schedule = CoinSchedule::power_law(0.4).unwrap();
        for _ in 0..12 {
            s = step(&s, &schedule).unwrap();
        }
        s
    };
    let model = AnalyticModel::from_state(&state, 0.4).unwrap();
    let t = 9.0;
    let reconstructed = model.amplitudes_at(t).unwrap();
    let (m1_brute, m2_brute) = brute_force_bessel_moments(model.seed(), t);
    let m = reconstructed.probability().moments().unwrap();
    assert!((m.m1 - m1_brute).abs() < 1e-8);
    assert!((m.m2 - m2_brute).abs() < 1e-8 * m2_brute.max(1.0));
}

#[test]
fn narrow_peak_snapshot_for_strongly_decaying_coin() {
    // At alpha = 2 the effective time is bounded by 1/sqrt(2), so by
    // n = 5000 the distribution is a few sites wide.
    let d = snapshot_distribution(symmetric_init(), &CoinSchedule::power_law(2.0).unwrap(), 5000)
        .unwrap();
    assert_eq!(d.support_edge(1e-6), Some(3));
    let m = d.moments().unwrap();
    assert!(m.sigma < 1.5, "sigma = {} should stay near 1", m.sigma);
}

#[test]
fn diffusive_snapshot_is_twin_peaked_not_gaussian() {
    // Even at alpha = 0.5, where sigma grows diffusively, the profile keeps
    // the coherent two-horned shape: the mode sits near the fronts, well
    // away from the origin where a Gaussian would peak.
    let d = snapshot_distribution(symmetric_init(), &CoinSchedule::power_law(0.5).unwrap(), 2000)
        .unwrap();
    let m = d.moments().unwrap();
    let (mode_site, mode_p) = d
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty distribution");
    assert!(
        mode_site.unsigned_abs() as f64 > m.sigma,
        "mode at k={mode_site} (P={mode_p:.3e}) should sit beyond sigma={:.2}",
        m.sigma
    );
    assert!(mode_p > 2.0 * d.at(0), "origin should not carry the peak");
}

#[test]
fn moment_series_records_are_strictly_increasing() {
    let run = evolve(symmetric_init(), &CoinSchedule::power_law(0.7).unwrap(), 500, 7).unwrap();
    let mut prev = 0;
    for r in &run.series.records {
        assert!(r.n > prev);
        assert!(r.sigma >= 0.0);
        prev = r.n;
    }
    assert_eq!(run.series.records.last().unwrap().n, 500);
}
