mod common;

use proptest::prelude::*;
use windcast::synth::{diurnal_corpus, DiurnalParams};
use windcast::wavelet::{
    cwt, cwt_values, detect_peak, global_spectrum, power_spectrum, CwtGrid, MorletWavelet,
};
use windcast::TimeSeries;

fn cosine(n: usize, period: f64) -> Vec<f64> {
    (0..n)
        .map(|t| (2.0 * std::f64::consts::PI * t as f64 / period).cos())
        .collect()
}

#[test]
fn cosine_peak_lands_on_its_period() {
    let w = MorletWavelet::default();
    let x = TimeSeries::new(cosine(1024, 64.0), 1, 0).unwrap();
    let grid = CwtGrid::new(2.0, 1.0 / 16.0, 100).unwrap();
    let p = power_spectrum(&cwt(&x, &w, &grid).unwrap());
    let g = global_spectrum(&p, true).unwrap();
    let j = (0..g.len()).max_by(|&a, &b| g[a].total_cmp(&g[b])).unwrap();
    assert!((p.periods()[j] / 64.0 - 1.0).abs() < 0.05, "period {}", p.periods()[j]);
    assert_eq!(detect_peak(&p, 2.0).unwrap().scale_index, j);
}

#[test]
fn fft_matches_direct_sum_on_a_long_scale_grid() {
    let w = MorletWavelet::new(7.0).unwrap();
    let x = common::gaussian(300, 1.0, 9);
    let grid = CwtGrid::new(1.5, 0.25, 30).unwrap();
    let fast = cwt_values(&x, 1, &w, &grid).unwrap();
    let slow = common::direct_cwt(&x, 1.0, fast.scales(), 7.0);
    for (j, row) in slow.iter().enumerate() {
        for (t, exact) in row.iter().enumerate() {
            if !fast.in_coi(t, j) {
                assert!((fast.coefficient(t, j) - exact).norm() <= 1e-8 * exact.norm().max(1e-3));
            }
        }
    }
}

#[test]
fn diurnal_peak_is_within_one_cell_of_a_day() {
    let x = diurnal_corpus(&DiurnalParams { days: 40, ..Default::default() }, 3).unwrap();
    let w = MorletWavelet::default();
    let grid = CwtGrid::for_sampling(x.dt(), &w);
    let p = power_spectrum(&cwt(&x, &w, &grid).unwrap());
    let peak = detect_peak(&p, 2.0).unwrap();
    let day = 86_400.0f64;
    let nearest = (0..p.num_scales())
        .min_by(|&a, &b| {
            (p.periods()[a].ln() - day.ln())
                .abs()
                .total_cmp(&(p.periods()[b].ln() - day.ln()).abs())
        })
        .unwrap();
    assert!(peak.scale_index.abs_diff(nearest) <= 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_is_linear(seed in 0u64..1000, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let w = MorletWavelet::default();
        let grid = CwtGrid::new(2.0, 0.5, 10).unwrap();
        let x = common::gaussian(128, 1.0, seed);
        let y = common::gaussian(128, 1.0, seed + 1);
        let z: Vec<f64> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
        let (wx, wy, wz) = (
            cwt_values(&x, 1, &w, &grid).unwrap(),
            cwt_values(&y, 1, &w, &grid).unwrap(),
            cwt_values(&z, 1, &w, &grid).unwrap(),
        );
        for j in 0..10 {
            for t in 0..128 {
                let expect = wx.coefficient(t, j) * a + wy.coefficient(t, j) * b;
                prop_assert!((wz.coefficient(t, j) - expect).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn affine_change_scales_power(seed in 0u64..1000, c in 0.1f64..10.0, shift in -50.0f64..50.0) {
        let w = MorletWavelet::default();
        let grid = CwtGrid::new(1200.0, 0.25, 20).unwrap();
        let x = common::gaussian(256, 1.0, seed);
        let y: Vec<f64> = x.iter().map(|v| c * v + shift).collect();
        let px = power_spectrum(&cwt(&TimeSeries::new(x, 600, 0).unwrap(), &w, &grid).unwrap());
        let py = power_spectrum(&cwt(&TimeSeries::new(y, 600, 0).unwrap(), &w, &grid).unwrap());
        for j in 0..20 {
            for t in 0..256 {
                let expect = px.power(t, j) * c * c;
                prop_assert!((py.power(t, j) - expect).abs() <= 1e-9 * expect.max(1e-12));
            }
        }
        // The peak decision ignores a global factor.
        prop_assert_eq!(
            detect_peak(&px, 2.0).map(|p| p.scale_index).ok(),
            detect_peak(&px.scaled(c * c), 2.0).map(|p| p.scale_index).ok()
        );
    }
}
