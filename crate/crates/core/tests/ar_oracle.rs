mod common;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use windcast::ar::{
    aic, burg_error_powers, fit_burg, fpe, is_stable, predict_multi, predict_one, select_order,
    step_down, ArModel, OrderCriterion,
};

#[test]
fn burg_tracks_least_squares_on_ar3() {
    let truth = [0.5, -0.3, 0.2];
    let x = common::simulate_ar(&truth, 20_000, 2.0, 77);
    let burg = fit_burg(&x, 3).unwrap();
    let ols = common::ols_ar(&x, 3);
    for i in 0..3 {
        assert_abs_diff_eq!(burg.coefficients()[i], ols[i], epsilon = 0.01);
        assert_abs_diff_eq!(burg.coefficients()[i], truth[i], epsilon = 0.05);
    }
    let resid = common::ols_residual_variance(&x, 3);
    assert!((burg.noise_variance() / resid - 1.0).abs() < 0.02);
}

#[test]
fn aic_matches_brute_force_table() {
    let x = common::simulate_ar(&[0.9], 2000, 1.0, 5);
    let n = x.len();
    let powers = burg_error_powers(&x, 8).unwrap().unwrap();
    // Recompute each order's variance from an independent fit.
    let table: Vec<f64> = (1..=8)
        .map(|p| {
            let v = fit_burg(&x, p).unwrap().noise_variance();
            assert_abs_diff_eq!(v, powers[p], epsilon = 1e-12 * v);
            n as f64 * v.ln() + 2.0 * p as f64
        })
        .collect();
    let best = (0..8).min_by(|&a, &b| table[a].total_cmp(&table[b])).unwrap() + 1;
    assert_eq!(select_order(&x, &OrderCriterion::aic(8)).unwrap(), best);
    assert_eq!(best, 1);
    assert_abs_diff_eq!(table[0], aic(n, powers[1], 1));
}

#[test]
fn fpe_gain_on_white_noise_is_small() {
    let x = common::gaussian(4000, 1.0, 11);
    let n = x.len();
    let powers = burg_error_powers(&x, 10).unwrap().unwrap();
    let base = fpe(n, powers[0], 0);
    let p = select_order(&x, &OrderCriterion::fpe(10)).unwrap();
    assert!(fpe(n, powers[p], p) > 0.98 * base);
}

#[test]
fn error_power_never_increases_with_order() {
    let x = common::simulate_ar(&[0.4, 0.3], 500, 1.0, 3);
    let powers = burg_error_powers(&x, 10).unwrap().unwrap();
    for w in powers.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-12));
    }
}

#[test]
fn one_step_prediction_matches_hand_sum() {
    let m = ArModel::new(vec![0.5, 0.25], 2.0, 1.0).unwrap();
    // 2 + 0.5 * (4 - 2) + 0.25 * (0 - 2)
    assert_abs_diff_eq!(predict_one(&m, &[4.0, 0.0]).unwrap(), 2.5);
    let path = predict_multi(&m, &[4.0, 0.0], 2).unwrap();
    assert_abs_diff_eq!(path[1], 2.0 + 0.5 * 0.5 + 0.25 * 2.0);
}

/// Roots of `z² - a1 z - a2` inside the unit circle.
fn ar2_roots_inside(a1: f64, a2: f64) -> bool {
    let disc = a1 * a1 + 4.0 * a2;
    if disc >= 0.0 {
        let r = disc.sqrt();
        ((a1 + r) / 2.0).abs() < 1.0 && ((a1 - r) / 2.0).abs() < 1.0
    } else {
        (-a2).sqrt() < 1.0
    }
}

proptest! {
    #[test]
    fn ar2_triangle_matches_roots(a1 in -2.5f64..2.5, a2 in -1.5f64..1.5) {
        let m = ArModel::new(vec![a1, a2], 0.0, 1.0).unwrap();
        let margin = [a2.abs() - 1.0, a1 + a2 - 1.0, a2 - a1 - 1.0]
            .iter()
            .map(|v| v.abs())
            .fold(f64::MAX, f64::min);
        prop_assume!(margin > 1e-9);
        prop_assert_eq!(is_stable(&m), ar2_roots_inside(a1, a2));
    }

    #[test]
    fn step_down_inverts_burg_levinson(seed in 0u64..10_000, p in 1usize..8) {
        let x = common::gaussian(200, 1.0, seed);
        let m = fit_burg(&x, p).unwrap();
        let ks = step_down(m.coefficients()).unwrap();
        for (a, b) in ks.iter().zip(m.reflection().unwrap()) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn fit_is_shift_invariant(seed in 0u64..10_000, c in -100.0f64..100.0) {
        let x = common::gaussian(120, 1.0, seed);
        let y: Vec<f64> = x.iter().map(|v| v + c).collect();
        let (a, b) = (fit_burg(&x, 4).unwrap(), fit_burg(&y, 4).unwrap());
        for (u, v) in a.coefficients().iter().zip(b.coefficients()) {
            prop_assert!((u - v).abs() < 1e-8);
        }
        prop_assert!((b.mean() - a.mean() - c).abs() < 1e-9);
    }

    #[test]
    fn fit_is_scale_invariant(seed in 0u64..10_000, c in 0.01f64..100.0) {
        let x = common::gaussian(120, 1.0, seed);
        let y: Vec<f64> = x.iter().map(|v| v * c).collect();
        let (a, b) = (fit_burg(&x, 3).unwrap(), fit_burg(&y, 3).unwrap());
        for (u, v) in a.coefficients().iter().zip(b.coefficients()) {
            prop_assert!((u - v).abs() < 1e-8);
        }
        prop_assert!((b.noise_variance() / (a.noise_variance() * c * c) - 1.0).abs() < 1e-8);
    }
}
