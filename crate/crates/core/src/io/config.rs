//! TOML run configuration.
//!
//! Every key is optional. A minimal file:
//!
//! ```toml
//! input = "station.csv"
//! output_dir = "out"
//!
//! [schema]
//! timestamp_column = "time"
//! value_column = "speed"
//! timestamp_format = "iso-8601"
//! utc_offset_minutes = -420
//!
//! [forecast]
//! period_len = 144
//! order_criterion = { kind = "aic", max_order = 20 }
//!
//! [wavelet]
//! omega0 = 6.0
//! dj = 0.125
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forecast::ForecastConfig;
use crate::io::ingest::IngestSchema;
use crate::timeseries::{GapMode, GapPolicy};
use crate::wavelet::{CwtGrid, MorletWavelet, DEFAULT_PEAK_FACTOR};

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "WINDCAST_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GapSettings {
    pub mode: GapMode,
    pub max_run: usize,
}

impl Default for GapSettings {
    fn default() -> Self {
        let p = GapPolicy::default();
        Self {
            mode: p.mode,
            max_run: p.max_run,
        }
    }
}

/// Wavelet settings; `s0` and `num_scales` default from the sampling interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveletSettings {
    pub omega0: f64,
    /// Smallest scale, seconds.
    pub s0: Option<f64>,
    pub dj: f64,
    pub num_scales: Option<usize>,
    pub peak_factor: f64,
}

impl Default for WaveletSettings {
    fn default() -> Self {
        Self {
            omega0: 6.0,
            s0: None,
            dj: 0.125,
            num_scales: None,
            peak_factor: DEFAULT_PEAK_FACTOR,
        }
    }
}

impl WaveletSettings {
    pub fn wavelet(&self) -> Result<MorletWavelet> {
        MorletWavelet::new(self.omega0)
    }

    pub fn grid(&self, dt: i64) -> Result<CwtGrid> {
        let w = self.wavelet()?;
        let mut g = CwtGrid::for_sampling(dt, &w);
        let dj_changed = self.dj != g.dj;
        g.dj = self.dj;
        if let Some(s0) = self.s0 {
            g.s0 = s0;
        }
        match self.num_scales {
            Some(n) => g.num_scales = n,
            None if dj_changed || self.s0.is_some() => {
                // Keep the default span of periods.
                let top = CwtGrid::for_sampling(dt, &w);
                let s_max = top.s0 * 2f64.powf(top.dj * (top.num_scales - 1) as f64);
                g.num_scales = ((s_max / g.s0).log2() / g.dj).ceil().max(0.0) as usize + 1;
            }
            None => {}
        }
        g.validate()?;
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlotSettings {
    pub forecast: bool,
    pub spectrum: bool,
    pub rmse: bool,
}

impl Default for PlotSettings {
    fn default() -> Self {
        Self {
            forecast: true,
            spectrum: true,
            rmse: true,
        }
    }
}

/// Everything a CLI run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub seed: Option<u64>,
    pub schema: IngestSchema,
    pub gaps: GapSettings,
    pub forecast: ForecastConfig,
    pub wavelet: WaveletSettings,
    pub plots: PlotSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            output_dir: PathBuf::from("."),
            seed: None,
            schema: IngestSchema::default(),
            gaps: GapSettings::default(),
            forecast: ForecastConfig::default(),
            wavelet: WaveletSettings::default(),
            plots: PlotSettings::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    /// Reads a config file. Relative `input` and `output_dir` paths are
    /// resolved against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        let mut cfg = Self::from_toml(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let Some(base) = path.parent() {
            if let Some(input) = &cfg.input {
                if input.is_relative() {
                    cfg.input = Some(base.join(input));
                }
            }
            if cfg.output_dir.is_relative() {
                cfg.output_dir = base.join(&cfg.output_dir);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config is always representable")
    }

    pub fn gap_policy(&self) -> GapPolicy {
        GapPolicy {
            mode: self.gaps.mode,
            max_run: self.gaps.max_run,
            utc_offset_minutes: self.schema.utc_offset_minutes,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.schema.validate()?;
        self.forecast.validate()?;
        self.wavelet.grid(self.schema.dt)?;
        if self.wavelet.peak_factor.is_nan() || self.wavelet.peak_factor <= 0.0 {
            return Err(Error::Config("wavelet.peak_factor must be positive".into()));
        }
        Ok(())
    }
}
