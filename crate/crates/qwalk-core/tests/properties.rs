//! Property suites for the evolution engine and the fitting machinery.

mod common;

use common::{c64, symmetric_init};
use proptest::prelude::*;
use qwalk_core::evolve::{evolve, step};
use qwalk_core::{
    detect_localization, fit_power_law, CoinSchedule, MomentRecord, MomentSeries, WalkerState,
};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, TAU};

fn any_schedule() -> impl Strategy<Value = CoinSchedule> {
    prop_oneof![
        (0.0..TAU).prop_map(CoinSchedule::constant),
        (0.0..2.5f64).prop_map(|a| CoinSchedule::power_law(a).unwrap()),
        (0.0..1.0f64).prop_map(|g| CoinSchedule::linear(g).unwrap()),
        proptest::collection::vec(0.0..TAU, 300).prop_map(|v| CoinSchedule::table(v).unwrap()),
    ]
}

fn unit_chirality() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (
        -1.0..1.0f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
    )
        .prop_filter_map("chirality must have nonzero norm", |(ar, ai, br, bi)| {
            let norm = (ar * ar + ai * ai + br * br + bi * bi).sqrt();
            if norm < 1e-3 {
                None
            } else {
                Some((ar / norm, ai / norm, br / norm, bi / norm))
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn norm_is_conserved(schedule in any_schedule(), steps in 1u64..250) {
        let run = evolve(symmetric_init(), &schedule, steps + 1, 1).unwrap();
        let norm = run.final_state.norm();
        prop_assert!((norm - 1.0).abs() < 1e-12, "norm drifted to {norm}");
    }

    #[test]
    fn support_and_parity(
        schedule in any_schedule(),
        site in -50i64..50,
        chirality in unit_chirality(),
        steps in 1u64..120,
    ) {
        let (ar, ai, br, bi) = chirality;
        let mut state = WalkerState::new_localized(site, c64(ar, ai), c64(br, bi)).unwrap();
        for _ in 0..steps {
            state = step(&state, &schedule).unwrap();
        }
        let (lo, hi) = state.window();
        prop_assert!(lo >= site - steps as i64 && hi <= site + steps as i64);
        // One shift per step: after `steps` steps only sites with
        // k - site - steps even can be occupied, the rest are exact zeros.
        let d = state.probability();
        for (k, p) in d.iter() {
            if (k - site - steps as i64) % 2 != 0 {
                prop_assert_eq!(p, 0.0, "parity-forbidden site {} has P = {}", k, p);
            }
        }
    }

    #[test]
    fn symmetric_init_gives_mirror_distribution(
        schedule in any_schedule(),
        steps in 1u64..200,
    ) {
        let mut state = symmetric_init();
        for _ in 0..steps {
            state = step(&state, &schedule).unwrap();
            let d = state.probability();
            let edge = d.k_max().max(-d.k_min());
            for k in 0..=edge {
                prop_assert!(
                    (d.at(k) - d.at(-k)).abs() < 1e-10,
                    "P asymmetric at +-{}: {} vs {}",
                    k, d.at(k), d.at(-k)
                );
            }
        }
    }

    #[test]
    fn power_fit_scale_equivariance(
        exponent in -1.0..2.0f64,
        prefactor in 0.1..10.0f64,
        scale in 0.01..100.0f64,
    ) {
        let records: Vec<MomentRecord> = (10..=100).map(|n| {
            let sigma = prefactor * (n as f64).powf(exponent);
            MomentRecord { n, m1: 0.0, m2: sigma * sigma, sigma }
        }).collect();
        let scaled = records.iter().map(|r| MomentRecord { sigma: r.sigma * scale, ..*r }).collect();
        let base = MomentSeries { records, schedule_descriptor: "syn".into() };
        let scaled = MomentSeries { records: scaled, schedule_descriptor: "syn".into() };

        let f0 = fit_power_law(&base, 10, 100).unwrap();
        let f1 = fit_power_law(&scaled, 10, 100).unwrap();
        prop_assert!((f0.exponent - f1.exponent).abs() < 1e-12);
        prop_assert!((f1.prefactor / f0.prefactor / scale - 1.0).abs() < 1e-12);
        prop_assert!((f0.r_squared - f1.r_squared).abs() < 1e-12);
    }

    #[test]
    fn power_fit_recovers_exact_law(
        exponent in -1.0..2.0f64,
        prefactor in 0.1..10.0f64,
        n_lo in 2u64..500,
        span in 12u64..300,
    ) {
        let n_hi = n_lo + span;
        let records: Vec<MomentRecord> = (n_lo..=n_hi).map(|n| {
            let sigma = prefactor * (n as f64).powf(exponent);
            MomentRecord { n, m1: 0.0, m2: sigma * sigma, sigma }
        }).collect();
        let series = MomentSeries { records, schedule_descriptor: "syn".into() };
        let fit = fit_power_law(&series, n_lo, n_hi).unwrap();
        prop_assert!((fit.exponent - exponent).abs() < 1e-10,
            "recovered {} for true exponent {}", fit.exponent, exponent);
        prop_assert!(fit.r_squared > 1.0 - 1e-10);
    }

    #[test]
    fn growing_power_law_is_never_localized(
        exponent in 0.1..1.5f64,
        n_lo in 100u64..1000,
    ) {
        // At least a 4x span so growth is well above rank resolution.
        let n_hi = n_lo * 4;
        let step_by = ((n_hi - n_lo) / 80).max(1);
        let records: Vec<MomentRecord> = (n_lo..=n_hi).step_by(step_by as usize).map(|n| {
            let sigma = (n as f64).powf(exponent);
            MomentRecord { n, m1: 0.0, m2: sigma * sigma, sigma }
        }).collect();
        let series = MomentSeries { records, schedule_descriptor: "syn".into() };
        let verdict = detect_localization(&series, n_lo).unwrap();
        prop_assert!(!verdict.is_localized);
    }
}

#[test]
fn power_law_zero_equals_hadamard_constant_exactly() {
    let power = CoinSchedule::power_law(0.0).unwrap();
    let constant = CoinSchedule::constant(FRAC_PI_4);
    for n in 1..=1000u64 {
        let tp = power.theta_at(n).unwrap();
        let tc = constant.theta_at(n).unwrap();
        assert_eq!(tp.to_bits(), tc.to_bits(), "theta differs at n = {n}");
        let (cp, sp) = power.cos_sin_at(n).unwrap();
        let (cc, sc) = constant.cos_sin_at(n).unwrap();
        assert_eq!(cp.to_bits(), cc.to_bits(), "cos differs at n = {n}");
        assert_eq!(sp.to_bits(), sc.to_bits(), "sin differs at n = {n}");
    }
    assert_eq!(FRAC_1_SQRT_2.acos().to_bits(), FRAC_PI_4.to_bits());
}
