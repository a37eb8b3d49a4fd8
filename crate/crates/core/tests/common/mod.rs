//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rustfft::num_complex::Complex64;

/// Solves `a · x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Least-squares AR(p) fit of the demeaned series: regress `x_t` on
/// `x_{t-1}..x_{t-p}` through the normal equations.
pub fn ols_ar(x: &[f64], p: usize) -> Vec<f64> {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let y: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for t in p..y.len() {
        for i in 0..p {
            xty[i] += y[t - 1 - i] * y[t];
            for j in 0..p {
                xtx[i][j] += y[t - 1 - i] * y[t - 1 - j];
            }
        }
    }
    solve(xtx, xty)
}

/// Residual variance of an OLS AR(p) fit.
pub fn ols_residual_variance(x: &[f64], p: usize) -> f64 {
    let a = ols_ar(x, p);
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let y: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let mut sse = 0.0;
    for t in p..y.len() {
        let pred: f64 = (0..p).map(|i| a[i] * y[t - 1 - i]).sum();
        sse += (y[t] - pred).powi(2);
    }
    sse / (y.len() - p) as f64
}

/// AR process driven by seeded Gaussian noise, after a burn-in.
pub fn simulate_ar(coefficients: &[f64], n: usize, sd: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sd).unwrap();
    let burn = 2000;
    let p = coefficients.len();
    let mut x = vec![0.0; n + burn + p];
    for t in p..x.len() {
        let ar: f64 = (0..p).map(|i| coefficients[i] * x[t - 1 - i]).sum();
        x[t] = ar + normal.sample(&mut rng);
    }
    x.split_off(burn + p)
}

pub fn gaussian(n: usize, sd: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sd).unwrap();
    (0..n).map(|_| normal.sample(&mut rng)).collect()
}

/// Morlet wavelet written out from its definition.
pub fn morlet(t: f64, omega0: f64) -> Complex64 {
    let envelope = PI.powf(-0.25) * (-t * t / 2.0).exp();
    Complex64::new((omega0 * t).cos(), (omega0 * t).sin()) * envelope
}

/// CWT by direct summation: `W(b, s) = Σ_n x_n sqrt(dt/s) conj(ψ((n - b) dt / s))`.
/// Returns `[scale][time]`.
pub fn direct_cwt(x: &[f64], dt: f64, scales: &[f64], omega0: f64) -> Vec<Vec<Complex64>> {
    let n = x.len();
    scales
        .iter()
        .map(|&s| {
            let norm = (dt / s).sqrt();
            // The summand depends on n - b only; index by lag + (n - 1).
            let h: Vec<Complex64> = (0..2 * n - 1)
                .map(|i| morlet((i as f64 - (n - 1) as f64) * dt / s, omega0).conj() * norm)
                .collect();
            (0..n)
                .map(|b| {
                    x.iter()
                        .enumerate()
                        .map(|(k, &v)| h[k + n - 1 - b] * v)
                        .sum()
                })
                .collect()
        })
        .collect()
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 0 {
        0.5 * (s[m - 1] + s[m])
    } else {
        s[m]
    }
}
