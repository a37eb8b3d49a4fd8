//! Seeded synthetic wind corpora for tests and demos.
//!
//! The diurnal corpus has a slot-dependent mean `mean + amplitude·cos(2πj/P)`
//! plus noise that is AR(1) across days within each slot:
//! `n[i][j] = ar_coef · n[i-1][j] + noise_sd · e`, started from its stationary
//! distribution.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timeseries::TimeSeries;

/// Parameters of [`diurnal_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiurnalParams {
    pub days: usize,
    pub period_len: usize,
    pub dt: i64,
    /// UTC epoch seconds of the first sample (should be a midnight).
    pub origin: i64,
    pub mean: f64,
    pub amplitude: f64,
    pub ar_coef: f64,
    pub noise_sd: f64,
}

impl Default for DiurnalParams {
    fn default() -> Self {
        Self {
            days: 120,
            period_len: 144,
            dt: 600,
            // 2004-01-01T00:00:00Z
            origin: 1_072_915_200,
            mean: 6.0,
            amplitude: 2.0,
            ar_coef: 0.6,
            noise_sd: 0.5,
        }
    }
}

/// Diurnal corpus, clipped at zero so every value is a valid wind speed.
pub fn diurnal_corpus(params: &DiurnalParams, seed: u64) -> Result<TimeSeries> {
    let DiurnalParams {
        days,
        period_len: p,
        ar_coef,
        noise_sd,
        ..
    } = *params;
    if days == 0 || p < 2 {
        return Err(Error::InvalidParameter("need at least one day of >= 2 slots".into()));
    }
    if ar_coef.is_nan() || ar_coef.abs() >= 1.0 || noise_sd.is_nan() || noise_sd < 0.0 {
        return Err(Error::InvalidParameter(
            "ar_coef must lie in (-1, 1) and noise_sd must be non-negative".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let stationary_sd = noise_sd / (1.0 - ar_coef * ar_coef).sqrt();

    let slot_mean: Vec<f64> = (0..p)
        .map(|j| params.mean + params.amplitude * (2.0 * PI * j as f64 / p as f64).cos())
        .collect();
    let mut noise: Vec<f64> = (0..p).map(|_| stationary_sd * unit.sample(&mut rng)).collect();

    let mut values = Vec::with_capacity(days * p);
    for day in 0..days {
        if day > 0 {
            for n in &mut noise {
                *n = ar_coef * *n + noise_sd * unit.sample(&mut rng);
            }
        }
        values.extend(slot_mean.iter().zip(&noise).map(|(m, n)| (m + n).max(0.0)));
    }
    TimeSeries::new(values, params.dt, params.origin)
}

/// Gaussian white noise `mean + sd·e`, not clipped.
pub fn white_noise(len: usize, mean: f64, sd: f64, dt: i64, seed: u64) -> Result<TimeSeries> {
    let dist = Normal::new(mean, sd).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TimeSeries::new((0..len).map(|_| dist.sample(&mut rng)).collect(), dt, 0)
}

/// Draw of `X_t = Σ α_i X_{t-i} + sd·e_t` after a burn-in of 1000 samples.
pub fn ar_process(coefficients: &[f64], len: usize, sd: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let burn_in = 1000;
    let p = coefficients.len();
    let mut x = vec![0.0; p];
    for _ in 0..burn_in + len {
        let t = x.len();
        let v: f64 = coefficients
            .iter()
            .enumerate()
            .map(|(i, a)| a * x[t - 1 - i])
            .sum::<f64>()
            + sd * unit.sample(&mut rng);
        x.push(v);
    }
    x.split_off(p + burn_in)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_shaped() {
        let params = DiurnalParams {
            days: 5,
            ..DiurnalParams::default()
        };
        let a = diurnal_corpus(&params, 7).unwrap();
        let b = diurnal_corpus(&params, 7).unwrap();
        let c = diurnal_corpus(&params, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values(), c.values());
        assert_eq!(a.len(), 5 * 144);
        assert!(a.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn noiseless_corpus_is_the_slot_mean() {
        let params = DiurnalParams {
            days: 2,
            noise_sd: 0.0,
            ..DiurnalParams::default()
        };
        let x = diurnal_corpus(&params, 1).unwrap();
        assert_eq!(x.values()[0], 8.0);
        assert!((x.values()[72] - 4.0).abs() < 1e-12);
        assert_eq!(x.values()[..144], x.values()[144..]);
    }

    #[test]
    fn ar_process_length() {
        assert_eq!(ar_process(&[0.5, -0.2], 300, 1.0, 3).len(), 300);
        assert_eq!(ar_process(&[0.5], 10, 1.0, 3), ar_process(&[0.5], 10, 1.0, 3));
    }
}
