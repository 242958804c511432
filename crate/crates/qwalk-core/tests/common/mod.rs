//! Helpers shared by the integration suites. The brute-force routines here
//! deliberately avoid the library's own shortcuts so they can serve as
//! independent oracles.

use num_complex::Complex64;
use qwalk_core::{bessel, AmplitudeMap, Spinor, WalkerState};
use std::f64::consts::FRAC_1_SQRT_2;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The symmetric initial condition: chirality (1, i)/sqrt(2) at the origin.
pub fn symmetric_init() -> WalkerState {
    WalkerState::new_localized(0, c64(FRAC_1_SQRT_2, 0.0), c64(0.0, FRAC_1_SQRT_2)).unwrap()
}

/// Moments of the Bessel-propagated distribution computed the long way:
/// the double sum
///
///   P_k(t) = sum_{j,l} (-1)^(j+l) (a_l a_j* + b_l b_j*) J_{k-l}(t) J_{k-j}(t)
///
/// evaluated term by term over the full truncation range, then
/// m_p = sum_k k^p P_k. No moment identities involved.
pub fn brute_force_bessel_moments(seed: &AmplitudeMap, t: f64) -> (f64, f64) {
    let reach = bessel::significant_order_limit(t) as i64 + 2;
    let lo = seed.k_min() - reach;
    let hi = seed.k_max() + reach;

    // J_m(t) for every order the double sum can touch.
    let max_abs_order = (hi - seed.k_min()).max(seed.k_max() - lo) as usize;
    let table = bessel::bessel_j_array(max_abs_order, t).unwrap();
    let j = |m: i64| -> f64 {
        let idx = m.unsigned_abs() as usize;
        if idx >= table.len() {
            0.0
        } else if m < 0 && m % 2 != 0 {
            -table[idx]
        } else {
            table[idx]
        }
    };

    let sites: Vec<(i64, &Spinor)> = seed.iter().collect();
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for k in lo..=hi {
        let mut p = 0.0;
        for &(l, sl) in &sites {
            for &(jj, sj) in &sites {
                let sign = if (l + jj) % 2 == 0 { 1.0 } else { -1.0 };
                let overlap = (sl.a * sj.a.conj() + sl.b * sj.b.conj()).re;
                p += sign * overlap * j(k - l) * j(k - jj);
            }
        }
        m1 += k as f64 * p;
        m2 += (k as f64) * (k as f64) * p;
    }
    (m1, m2)
}
