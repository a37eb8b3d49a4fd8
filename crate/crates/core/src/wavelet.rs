//! Morlet continuous wavelet transform and diurnal-period detection.
//!
//! The transform at scale `s` (seconds) and sample `b` is
//!
//! ```text
//! W(b, s) = Σ_n x_n · sqrt(dt / s) · ψ*((n - b) · dt / s)
//! ```
//!
//! computed as a linear convolution through the FFT with enough zero padding
//! that no circular wrap-around occurs. The power spectrum is `|W|² / s`.
//! The admissibility constant of the continuous definition is a global
//! positive factor; it is omitted since only the location of spectral peaks
//! is used downstream.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timeseries::{TimeSeries, SECONDS_PER_DAY};

/// Envelope cut-off in units of the scale: `exp(-8² / 2)` is below 1e-13.
const SUPPORT_HALF_WIDTH: f64 = 8.0;

/// Default multiple of the median that a spectral peak must exceed.
pub const DEFAULT_PEAK_FACTOR: f64 = 2.0;

/// Morlet mother wavelet `π^(-1/4) e^(iω₀t) e^(-t²/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorletWavelet {
    omega0: f64,
}

impl Default for MorletWavelet {
    fn default() -> Self {
        Self { omega0: 6.0 }
    }
}

impl MorletWavelet {
    /// Admissibility is acceptable in practice only for `ω₀ >= 5`.
    pub fn new(omega0: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 >= 5.0) {
            return Err(Error::InvalidParameter(format!(
                "omega0 must be >= 5, got {omega0} (use new_unchecked to override)"
            )));
        }
        Ok(Self { omega0 })
    }

    /// Accepts any finite positive `ω₀`.
    pub fn new_unchecked(omega0: f64) -> Self {
        Self { omega0 }
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// `ψ(t)` at dimensionless time `t`.
    pub fn value(&self, t: f64) -> Complex64 {
        let envelope = PI.powf(-0.25) * (-0.5 * t * t).exp();
        Complex64::from_polar(envelope, self.omega0 * t)
    }

    /// Ratio of equivalent Fourier period to scale, `4π / (ω₀ + sqrt(2 + ω₀²))`.
    pub fn fourier_factor(&self) -> f64 {
        4.0 * PI / (self.omega0 + (2.0 + self.omega0 * self.omega0).sqrt())
    }
}

/// Scale grid `s_j = s0 · 2^(j·dj)`, `j = 0..num_scales`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CwtGrid {
    /// Smallest scale, seconds.
    pub s0: f64,
    /// Scale resolution in octaves.
    pub dj: f64,
    pub num_scales: usize,
}

impl CwtGrid {
    pub fn new(s0: f64, dj: f64, num_scales: usize) -> Result<Self> {
        let grid = Self { s0, dj, num_scales };
        grid.validate()?;
        Ok(grid)
    }

    /// `s0 = 2·dt`, `dj = 1/8`, and enough scales that the largest
    /// equivalent period is at least four days.
    pub fn for_sampling(dt: i64, wavelet: &MorletWavelet) -> Self {
        let s0 = 2.0 * dt as f64;
        let dj = 0.125;
        let longest = 4.0 * SECONDS_PER_DAY as f64;
        let octaves = (longest / (wavelet.fourier_factor() * s0)).log2().max(0.0);
        let j = (octaves / dj).ceil() as usize;
        Self {
            s0,
            dj,
            num_scales: j + 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s0.is_finite() && self.s0 > 0.0) {
            return Err(Error::InvalidParameter(format!("s0 must be positive, got {}", self.s0)));
        }
        if !(self.dj.is_finite() && self.dj > 0.0) {
            return Err(Error::InvalidParameter(format!("dj must be positive, got {}", self.dj)));
        }
        if self.num_scales == 0 {
            return Err(Error::InvalidParameter("num_scales must be at least 1".into()));
        }
        Ok(())
    }

    pub fn scales(&self) -> Vec<f64> {
        scale_grid(self)
    }
}

/// The scales of `grid`, smallest first.
pub fn scale_grid(grid: &CwtGrid) -> Vec<f64> {
    (0..grid.num_scales)
        .map(|j| grid.s0 * 2f64.powf(j as f64 * grid.dj))
        .collect()
}

/// Complex wavelet coefficients over (time, scale).
#[derive(Debug, Clone, PartialEq)]
pub struct CwtResult {
    /// `coefficients[j][t]` is the coefficient at scale `j`, sample `t`.
    coefficients: Vec<Vec<Complex64>>,
    scales: Vec<f64>,
    dt: i64,
    coi: Vec<f64>,
    wavelet: MorletWavelet,
}

impl CwtResult {
    pub fn coefficient(&self, t: usize, j: usize) -> Complex64 {
        self.coefficients[j][t]
    }

    /// All coefficients at scale index `j`.
    pub fn at_scale(&self, j: usize) -> &[Complex64] {
        &self.coefficients[j]
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn dt(&self) -> i64 {
        self.dt
    }

    /// Largest scale (seconds) free of edge effects at each sample.
    pub fn coi(&self) -> &[f64] {
        &self.coi
    }

    pub fn len(&self) -> usize {
        self.coi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coi.is_empty()
    }

    pub fn num_scales(&self) -> usize {
        self.scales.len()
    }

    pub fn wavelet(&self) -> MorletWavelet {
        self.wavelet
    }

    /// Whether sample `t` at scale `j` lies inside the cone of influence.
    pub fn in_coi(&self, t: usize, j: usize) -> bool {
        self.scales[j] > self.coi[t]
    }
}

/// Wavelet power `|W|² / s` with per-scale equivalent Fourier periods.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    /// `power[j][t]`.
    power: Vec<Vec<f64>>,
    periods: Vec<f64>,
    scales: Vec<f64>,
    coi: Vec<f64>,
    dt: i64,
}

impl PowerSpectrum {
    pub fn power(&self, t: usize, j: usize) -> f64 {
        self.power[j][t]
    }

    pub fn at_scale(&self, j: usize) -> &[f64] {
        &self.power[j]
    }

    /// Equivalent Fourier period of each scale, seconds.
    pub fn periods(&self) -> &[f64] {
        &self.periods
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn coi(&self) -> &[f64] {
        &self.coi
    }

    pub fn dt(&self) -> i64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.coi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coi.is_empty()
    }

    pub fn num_scales(&self) -> usize {
        self.scales.len()
    }

    pub fn in_coi(&self, t: usize, j: usize) -> bool {
        self.scales[j] > self.coi[t]
    }

    /// Multiplies every power value by `factor`.
    pub fn scaled(&self, factor: f64) -> PowerSpectrum {
        let mut out = self.clone();
        for row in &mut out.power {
            for v in row {
                *v *= factor;
            }
        }
        out
    }
}

/// CWT of `x` after removing its mean.
pub fn cwt(x: &TimeSeries, wavelet: &MorletWavelet, grid: &CwtGrid) -> Result<CwtResult> {
    let mean = x.values().iter().sum::<f64>() / x.len() as f64;
    let demeaned: Vec<f64> = x.values().iter().map(|v| v - mean).collect();
    cwt_values(&demeaned, x.dt(), wavelet, grid)
}

/// CWT of `values` exactly as given (no demeaning).
pub fn cwt_values(
    values: &[f64],
    dt: i64,
    wavelet: &MorletWavelet,
    grid: &CwtGrid,
) -> Result<CwtResult> {
    let n = values.len();
    if n < 4 {
        return Err(Error::SeriesTooShort { needed: 4, got: n });
    }
    if dt <= 0 {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    grid.validate()?;

    let dtf = dt as f64;
    let scales = scale_grid(grid);
    let mut planner = FftPlanner::<f64>::new();
    // Spectra of the zero-padded input, cached per padded length.
    let mut padded_spectra: Vec<(usize, Vec<Complex64>)> = Vec::new();

    let mut coefficients = Vec::with_capacity(scales.len());
    for &s in &scales {
        let half = ((SUPPORT_HALF_WIDTH * s / dtf).ceil() as usize).min(n - 1);
        let len = (n + half).next_power_of_two();

        let spectrum = match padded_spectra.iter().find(|(l, _)| *l == len) {
            Some((_, spec)) => spec.clone(),
            None => {
                let mut buf: Vec<Complex64> = values
                    .iter()
                    .map(|&v| Complex64::new(v, 0.0))
                    .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
                    .take(len)
                    .collect();
                planner.plan_fft_forward(len).process(&mut buf);
                padded_spectra.push((len, buf.clone()));
                buf
            }
        };

        // Kernel h[L] = sqrt(dt/s) · conj(ψ(-L·dt/s)) so that W = x * h.
        let norm = (dtf / s).sqrt();
        let mut kernel = vec![Complex64::new(0.0, 0.0); len];
        for lag in -(half as i64)..=(half as i64) {
            let u = -(lag as f64) * dtf / s;
            let idx = lag.rem_euclid(len as i64) as usize;
            kernel[idx] = wavelet.value(u).conj() * norm;
        }
        planner.plan_fft_forward(len).process(&mut kernel);
        for (k, x) in kernel.iter_mut().zip(&spectrum) {
            *k *= x;
        }
        planner.plan_fft_inverse(len).process(&mut kernel);
        let inv = 1.0 / len as f64;
        coefficients.push(kernel[..n].iter().map(|c| c * inv).collect());
    }

    let coi = (0..n)
        .map(|t| dtf * t.min(n - 1 - t) as f64 / std::f64::consts::SQRT_2)
        .collect();

    Ok(CwtResult {
        coefficients,
        scales,
        dt,
        coi,
        wavelet: *wavelet,
    })
}

/// `|W|² / s` at every grid point.
pub fn power_spectrum(r: &CwtResult) -> PowerSpectrum {
    let factor = r.wavelet.fourier_factor();
    PowerSpectrum {
        power: r
            .coefficients
            .iter()
            .zip(&r.scales)
            .map(|(row, &s)| row.iter().map(|c| c.norm_sqr() / s).collect())
            .collect(),
        periods: r.scales.iter().map(|s| s * factor).collect(),
        scales: r.scales.clone(),
        coi: r.coi.clone(),
        dt: r.dt,
    }
}

/// Time-averaged power per scale, or `None` where every sample is masked.
pub fn global_spectrum_partial(p: &PowerSpectrum, mask_coi: bool) -> Vec<Option<f64>> {
    (0..p.num_scales())
        .map(|j| {
            let (sum, count) = p.power[j]
                .iter()
                .enumerate()
                .filter(|&(t, _)| !(mask_coi && p.in_coi(t, j)))
                .fold((0.0, 0usize), |(s, c), (_, v)| (s + v, c + 1));
            (count > 0).then(|| sum / count as f64)
        })
        .collect()
}

/// Time-averaged power per scale. With `mask_coi`, samples inside the cone of
/// influence are left out.
pub fn global_spectrum(p: &PowerSpectrum, mask_coi: bool) -> Result<Vec<f64>> {
    global_spectrum_partial(p, mask_coi)
        .into_iter()
        .enumerate()
        .map(|(j, v)| v.ok_or(Error::AllMasked(j)))
        .collect()
}

/// A significant peak of the global spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralPeak {
    pub scale_index: usize,
    pub period_seconds: f64,
    /// Period in samples, rounded to the nearest integer.
    pub period_samples: usize,
    pub power: f64,
    pub median: f64,
}

/// Locates the dominant period of a power spectrum.
///
/// The COI-masked global spectrum must have its maximum strictly inside the
/// range of usable scales (a maximum at either end is a trend, not a cycle)
/// and that maximum must exceed `factor` times the median.
pub fn detect_peak(p: &PowerSpectrum, factor: f64) -> Result<SpectralPeak> {
    let global = global_spectrum_partial(p, true);
    let usable: Vec<(usize, f64)> = global
        .iter()
        .enumerate()
        .filter_map(|(j, v)| v.map(|v| (j, v)))
        .collect();
    if usable.len() < 3 {
        return Err(Error::SeriesTooShort {
            needed: 3,
            got: usable.len(),
        });
    }
    let mut best = 0;
    for (i, &(_, v)) in usable.iter().enumerate() {
        if v > usable[best].1 {
            best = i;
        }
    }
    if best == 0 || best == usable.len() - 1 {
        return Err(Error::NoDominantPeriod);
    }
    let mut sorted: Vec<f64> = usable.iter().map(|&(_, v)| v).collect();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len().is_multiple_of(2) {
        0.5 * (sorted[mid - 1] + sorted[mid])
    } else {
        sorted[mid]
    };
    let (j, power) = usable[best];
    if power <= factor * median {
        return Err(Error::NoDominantPeriod);
    }
    let period_seconds = p.periods[j];
    Ok(SpectralPeak {
        scale_index: j,
        period_seconds,
        period_samples: (period_seconds / p.dt as f64).round() as usize,
        power,
        median,
    })
}

/// Dominant period of `x` in samples, using the default 2× median threshold.
pub fn dominant_period(x: &TimeSeries, wavelet: &MorletWavelet, grid: &CwtGrid) -> Result<usize> {
    let r = cwt(x, wavelet, grid)?;
    detect_peak(&power_spectrum(&r), DEFAULT_PEAK_FACTOR).map(|p| p.period_samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn morlet_values() {
        let w = MorletWavelet::default();
        let v = w.value(0.0);
        assert_abs_diff_eq!(v.re, 0.751_125_544_464_942_5, epsilon = 1e-12);
        assert_eq!(v.im, 0.0);
        assert_abs_diff_eq!(w.value(1.0).norm(), 0.455_580_7, epsilon = 1e-6);
        for t in [0.3, 1.7, 4.2] {
            assert_abs_diff_eq!(w.value(t).norm(), w.value(-t).norm(), epsilon = 1e-15);
        }
        assert!(MorletWavelet::new(4.0).is_err());
        assert_eq!(MorletWavelet::new_unchecked(4.0).omega0(), 4.0);
    }

    #[test]
    fn scale_grid_examples() {
        let s = scale_grid(&CwtGrid::new(2.0, 0.125, 4).unwrap());
        for (a, b) in s.iter().zip([2.0, 2.1810, 2.3784, 2.5937]) {
            assert_abs_diff_eq!(*a, b, epsilon = 5e-5);
        }
        assert_eq!(scale_grid(&CwtGrid::new(3.0, 0.5, 1).unwrap()), vec![3.0]);
        assert_eq!(
            scale_grid(&CwtGrid::new(1.0, 1.0, 4).unwrap()),
            vec![1.0, 2.0, 4.0, 8.0]
        );
        assert!(CwtGrid::new(0.0, 0.1, 3).is_err());
        assert!(CwtGrid::new(1.0, 0.0, 3).is_err());
    }

    #[test]
    fn default_grid_reaches_four_days() {
        let w = MorletWavelet::default();
        let g = CwtGrid::for_sampling(600, &w);
        let largest = *g.scales().last().unwrap() * w.fourier_factor();
        assert!(largest >= 4.0 * 86400.0);
        let second = g.scales()[g.num_scales - 2] * w.fourier_factor();
        assert!(second < 4.0 * 86400.0);
    }

    #[test]
    fn fourier_factor_for_omega_six() {
        let f = MorletWavelet::default().fourier_factor();
        assert_abs_diff_eq!(f, 4.0 * PI / (6.0 + 38f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(f, 1.0330, epsilon = 5e-5);
    }

    #[test]
    fn zero_series_gives_zero_coefficients_and_power() {
        let grid = CwtGrid::new(2.0, 0.25, 10).unwrap();
        let r = cwt_values(&[0.0; 64], 1, &MorletWavelet::default(), &grid).unwrap();
        let p = power_spectrum(&r);
        for j in 0..r.num_scales() {
            assert!(r.at_scale(j).iter().all(|c| c.norm() == 0.0));
            assert!(p.at_scale(j).iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn power_is_norm_squared_over_scale() {
        let r = CwtResult {
            coefficients: vec![vec![Complex64::new(3.0, 4.0)]],
            scales: vec![5.0],
            dt: 1,
            coi: vec![0.0],
            wavelet: MorletWavelet::default(),
        };
        let p = power_spectrum(&r);
        assert_eq!(p.power(0, 0), 5.0);
        assert_abs_diff_eq!(p.periods()[0], 5.0 * 1.033_043, epsilon = 1e-5);
    }

    #[test]
    fn scaling_input_scales_coefficients() {
        let grid = CwtGrid::new(2.0, 0.25, 12).unwrap();
        let x: Vec<f64> = (0..100).map(|i| ((i * i) % 17) as f64 - 8.0).collect();
        let cx: Vec<f64> = x.iter().map(|v| 3.5 * v).collect();
        let w = MorletWavelet::default();
        let a = cwt_values(&x, 1, &w, &grid).unwrap();
        let b = cwt_values(&cx, 1, &w, &grid).unwrap();
        for j in 0..grid.num_scales {
            for t in 0..x.len() {
                let d = (b.coefficient(t, j) - a.coefficient(t, j) * 3.5).norm();
                assert!(d <= 1e-12 * (1.0 + b.coefficient(t, j).norm()));
            }
        }
    }

    #[test]
    fn global_spectrum_constant_and_masked() {
        let p = PowerSpectrum {
            power: vec![vec![2.5; 8], vec![2.5; 8]],
            periods: vec![1.0, 2.0],
            scales: vec![1.0, 100.0],
            coi: (0..8).map(|t| t.min(7 - t) as f64 / std::f64::consts::SQRT_2).collect(),
            dt: 1,
        };
        assert_eq!(global_spectrum(&p, false).unwrap(), vec![2.5, 2.5]);
        assert!(matches!(global_spectrum(&p, true), Err(Error::AllMasked(1))));
        assert_eq!(global_spectrum_partial(&p, true), vec![Some(2.5), None]);
    }

    #[test]
    fn too_short_and_flat() {
        let grid = CwtGrid::new(2.0, 0.25, 4).unwrap();
        assert!(matches!(
            cwt_values(&[1.0, 2.0, 3.0], 1, &MorletWavelet::default(), &grid),
            Err(Error::SeriesTooShort { .. })
        ));
        let x = TimeSeries::new(vec![4.0; 4320], 600, 0).unwrap();
        let w = MorletWavelet::default();
        assert!(matches!(
            dominant_period(&x, &w, &CwtGrid::for_sampling(600, &w)),
            Err(Error::NoDominantPeriod)
        ));
    }

    #[test]
    fn cosine_of_twelve_samples() {
        let x: Vec<f64> = (0..4320)
            .map(|i| (2.0 * PI * i as f64 / 12.0).cos())
            .collect();
        let x = TimeSeries::new(x, 600, 0).unwrap();
        let w = MorletWavelet::default();
        let p = dominant_period(&x, &w, &CwtGrid::for_sampling(600, &w)).unwrap();
        assert!((11..=13).contains(&p), "period {p}");
    }
}
