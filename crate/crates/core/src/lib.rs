//! Day-ahead wind-speed forecasting by diurnal time-series partitioning.
//!
//! A 10-minute wind record is rearranged into a days × 144 matrix; each
//! time-of-day column is an ordinary series with one value per day, so a
//! one-step Burg AR forecast of every column yields a full day ahead. A Morlet
//! wavelet power spectrum confirms the daily cycle that justifies the
//! partition width, and a backtest harness scores the partitioned forecast
//! against a plain multi-step AR model and persistence by hourly RMSE.
//!
//! ```
//! use windcast::forecast::{backtest, last_complete_days, ForecastConfig, Method};
//! use windcast::synth::{diurnal_corpus, DiurnalParams};
//!
//! let x = diurnal_corpus(&DiurnalParams { days: 40, ..Default::default() }, 42).unwrap();
//! let cfg = ForecastConfig::default();
//! let days = last_complete_days(&x, 2, cfg.period_len);
//! let report = backtest(&x, &days, &cfg, &[Method::PartitionedAr, Method::Persistence]).unwrap();
//! assert_eq!(report.per_method[&Method::PartitionedAr].per_hour_rmse.len(), 24);
//! ```
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod ar;
pub mod error;
pub mod forecast;
pub mod io;
pub mod synth;
pub mod timeseries;
pub mod wavelet;

pub use ar::{ArModel, OrderCriterion};
pub use error::{Error, Result};
pub use forecast::{DayForecast, EvalReport, ForecastConfig, Method};
pub use timeseries::{partition, GapMode, GapPolicy, PartitionMatrix, Quality, TimeSeries};
pub use wavelet::{CwtGrid, CwtResult, MorletWavelet, PowerSpectrum};
