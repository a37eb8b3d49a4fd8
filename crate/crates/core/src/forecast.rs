//! Day-ahead predictors and the hourly RMSE backtest.
//!
//! Three methods are compared:
//!
//! * **partitioned AR**: the series is cut into one row per day and every
//!   time-of-day column gets its own Burg AR model, forecast one step ahead;
//! * **simple AR**: one Burg AR model on the trailing raw series, iterated a
//!   full day of steps;
//! * **persistence**: the last observed value repeated.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ar::{fit_burg, predict_multi, predict_one, select_order, OrderCriterion};
use crate::error::{Error, Result};
use crate::timeseries::{partition, PartitionMatrix, TimeSeries, SECONDS_PER_DAY};

/// Forecasting method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PartitionedAr,
    SimpleAr,
    Persistence,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::PartitionedAr, Method::SimpleAr, Method::Persistence];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::PartitionedAr => "partitioned-ar",
            Method::SimpleAr => "simple-ar",
            Method::Persistence => "persistence",
        }
    }

    /// Parses a comma-separated list such as `"partitioned-ar,simple-ar"`.
    pub fn parse_list(s: &str) -> Result<Vec<Method>> {
        s.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partitioned-ar" => Ok(Method::PartitionedAr),
            "simple-ar" => Ok(Method::SimpleAr),
            "persistence" => Ok(Method::Persistence),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

/// Knobs shared by the predictors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForecastConfig {
    /// Slots per day.
    pub period_len: usize,
    pub order_criterion: OrderCriterion,
    /// Days of history per column fit; `None` uses every available day.
    pub training_days: Option<usize>,
    /// Trailing window for the simple-AR baseline, in samples.
    pub simple_ar_training_samples: usize,
    pub clamp_negative: bool,
}

impl Default for ForecastConfig {
    fn default() -> Self {
        Self {
            period_len: 144,
            order_criterion: OrderCriterion::default(),
            training_days: None,
            simple_ar_training_samples: 30 * 144,
            clamp_negative: true,
        }
    }
}

impl ForecastConfig {
    pub fn validate(&self) -> Result<()> {
        if self.period_len < 2 {
            return Err(Error::InvalidPeriod(self.period_len));
        }
        if self.training_days.is_some_and(|d| d < 3) {
            return Err(Error::InvalidParameter("training_days must be at least 3".into()));
        }
        if self.simple_ar_training_samples < self.period_len {
            return Err(Error::InvalidParameter(format!(
                "simple_ar_training_samples ({}) must be at least period_len ({})",
                self.simple_ar_training_samples, self.period_len
            )));
        }
        self.order_criterion.validate()
    }

    /// Order criterion for a fit on `n` values: the cap is lowered to `n / 3`.
    fn criterion_for(&self, n: usize) -> OrderCriterion {
        self.order_criterion.capped(n / 3)
    }
}

/// One day of predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayForecast {
    pub method: Method,
    pub values: Vec<f64>,
    /// UTC epoch seconds of the first slot.
    pub target_day_origin: i64,
    /// AR order fitted to each column (partitioned method only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_slot_order: Option<Vec<usize>>,
}

fn clamp(values: &mut [f64], on: bool) {
    if on {
        for v in values {
            *v = v.max(0.0);
        }
    }
}

/// Fits `values` with the configured criterion and predicts one step.
fn one_step(values: &[f64], cfg: &ForecastConfig) -> Result<(f64, usize)> {
    let order = select_order(values, &cfg.criterion_for(values.len()))?;
    let model = fit_burg(values, order)?;
    let history: Vec<f64> = values.iter().rev().take(model.order()).copied().collect();
    Ok((predict_one(&model, &history)?, model.order()))
}

/// Forecasts day `N + 1` from an `N`-day partition: one AR fit and one-step
/// prediction per column.
pub fn forecast_day_partitioned(m: &PartitionMatrix, cfg: &ForecastConfig) -> Result<DayForecast> {
    cfg.validate()?;
    if m.rows() < 3 {
        return Err(Error::NotEnoughDays(m.rows()));
    }
    let m = match cfg.training_days {
        Some(days) => m.tail(days),
        None => m.clone(),
    };
    let mut values = Vec::with_capacity(m.cols());
    let mut orders = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        let (v, p) = one_step(&m.column(j)?, cfg)?;
        values.push(v);
        orders.push(p);
    }
    clamp(&mut values, cfg.clamp_negative);
    Ok(DayForecast {
        method: Method::PartitionedAr,
        values,
        target_day_origin: m.origin() + (m.rows() * m.cols()) as i64 * m.dt(),
        per_slot_order: Some(orders),
    })
}

/// Forecasts the next `period_len` samples with one AR model fitted to the
/// trailing window of the raw series, iterated step by step.
pub fn forecast_day_simple_ar(x: &TimeSeries, cfg: &ForecastConfig) -> Result<DayForecast> {
    cfg.validate()?;
    let window = cfg.simple_ar_training_samples;
    if x.len() < window {
        return Err(Error::SeriesTooShort {
            needed: window,
            got: x.len(),
        });
    }
    let train = &x.values()[x.len() - window..];
    let order = select_order(train, &cfg.criterion_for(window))?;
    let model = fit_burg(train, order)?;
    let history: Vec<f64> = train.iter().rev().take(model.order()).copied().collect();
    let mut values = predict_multi(&model, &history, cfg.period_len)?;
    clamp(&mut values, cfg.clamp_negative);
    Ok(DayForecast {
        method: Method::SimpleAr,
        values,
        target_day_origin: x.timestamp(x.len() - 1) + x.dt(),
        per_slot_order: None,
    })
}

/// Repeats the last observed value for `period_len` slots.
pub fn forecast_persistence(x: &TimeSeries, period_len: usize) -> Result<DayForecast> {
    if x.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(DayForecast {
        method: Method::Persistence,
        values: vec![x.last(); period_len],
        target_day_origin: x.timestamp(x.len() - 1) + x.dt(),
        per_slot_order: None,
    })
}

/// RMSE of each hour's slots.
pub fn hourly_rmse(pred: &DayForecast, actual: &[f64], samples_per_hour: usize) -> Result<Vec<f64>> {
    let p = pred.values.len();
    if actual.len() != p {
        return Err(Error::LengthMismatch {
            expected: p,
            got: actual.len(),
        });
    }
    if samples_per_hour == 0 || !p.is_multiple_of(samples_per_hour) {
        return Err(Error::NotDivisible {
            len: p,
            by: samples_per_hour,
        });
    }
    if actual.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    Ok(pred
        .values
        .chunks(samples_per_hour)
        .zip(actual.chunks(samples_per_hour))
        .map(|(f, a)| {
            let sse: f64 = f.iter().zip(a).map(|(f, a)| (f - a).powi(2)).sum();
            (sse / samples_per_hour as f64).sqrt()
        })
        .collect())
}

/// Element-wise mean of per-day hourly RMSE vectors.
pub fn averaged_rmse(reports: &[Vec<f64>]) -> Result<Vec<f64>> {
    let Some(first) = reports.first() else {
        return Err(Error::EmptyList);
    };
    let len = first.len();
    let mut sum = vec![0.0; len];
    for r in reports {
        if r.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                got: r.len(),
            });
        }
        for (s, v) in sum.iter_mut().zip(r) {
            *s += v;
        }
    }
    let n = reports.len() as f64;
    Ok(sum.into_iter().map(|s| s / n).collect())
}

/// Scores of one method across the evaluated days.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodScores {
    /// Hourly RMSE averaged across days.
    pub per_hour_rmse: Vec<f64>,
    /// RMSE over every slot error of every day, pooled.
    pub overall_rmse: f64,
    /// Hourly RMSE of each evaluated day, in `days_evaluated` order.
    pub per_day_hourly_rmse: Vec<Vec<f64>>,
}

/// Forecasts and actuals of one evaluated day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayResult {
    pub day: i64,
    pub actual: Vec<f64>,
    pub forecasts: BTreeMap<Method, DayForecast>,
}

/// Result of [`backtest`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_method: BTreeMap<Method, MethodScores>,
    /// UTC epoch seconds of each target day's first slot.
    pub days_evaluated: Vec<i64>,
    pub utc_offset_minutes: i32,
    pub config: ForecastConfig,
    pub days: Vec<DayResult>,
}

/// Number of samples strictly before `ts`.
fn samples_before(x: &TimeSeries, ts: i64) -> usize {
    let (mut lo, mut hi) = (0, x.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if x.timestamp(mid) < ts {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Runs `methods` for the day starting at `day` (UTC epoch seconds of a local
/// midnight) using only samples strictly before it.
pub fn forecast_day(
    x: &TimeSeries,
    day: i64,
    cfg: &ForecastConfig,
    methods: &[Method],
) -> Result<BTreeMap<Method, DayForecast>> {
    cfg.validate()?;
    let end = samples_before(x, day);
    if end == 0 || x.timestamp(end - 1) + x.dt() != day {
        return Err(Error::MissingHistory(day));
    }
    let history = x.slice(0, end)?;
    let p = cfg.period_len;

    let mut out = BTreeMap::new();
    for &method in methods.iter().collect::<BTreeSet<_>>() {
        let mut forecast = match method {
            Method::PartitionedAr => {
                // Whole days ending right before the target midnight.
                let days = end / p;
                if days < 3 {
                    return Err(Error::MissingHistory(day));
                }
                let recent = history.slice(end - days * p, end)?;
                forecast_day_partitioned(&partition(&recent, p)?, cfg)?
            }
            Method::SimpleAr => {
                if end < cfg.simple_ar_training_samples {
                    return Err(Error::MissingHistory(day));
                }
                forecast_day_simple_ar(&history, cfg)?
            }
            Method::Persistence => forecast_persistence(&history, p)?,
        };
        forecast.target_day_origin = day;
        out.insert(method, forecast);
    }
    Ok(out)
}

/// Start timestamps of the last `count` complete local days in `x`.
pub fn last_complete_days(x: &TimeSeries, count: usize, period_len: usize) -> Vec<i64> {
    let mut days = Vec::new();
    let mut i = x.len();
    while i >= period_len && days.len() < count {
        let start = i - period_len;
        let ts = x.timestamp(start);
        let local = ts + x.utc_offset_minutes() as i64 * 60;
        let contiguous = x.timestamp(i - 1) - ts == (period_len as i64 - 1) * x.dt();
        if local.rem_euclid(SECONDS_PER_DAY) == 0 && contiguous {
            days.push(ts);
            i = start;
        } else {
            i -= 1;
        }
    }
    days.reverse();
    days
}

/// Forecasts every target day with each method, using only data before the
/// day's midnight, and scores the forecasts against the day's actuals.
pub fn backtest(
    x: &TimeSeries,
    target_days: &[i64],
    cfg: &ForecastConfig,
    methods: &[Method],
) -> Result<EvalReport> {
    cfg.validate()?;
    if target_days.is_empty() || methods.is_empty() {
        return Err(Error::EmptyList);
    }
    let p = cfg.period_len;
    if SECONDS_PER_DAY % x.dt() != 0 || 3600 % x.dt() != 0 {
        return Err(Error::NotDivisible {
            len: 3600,
            by: x.dt() as usize,
        });
    }
    let samples_per_hour = (3600 / x.dt()) as usize;

    let mut days = Vec::with_capacity(target_days.len());
    for &day in target_days {
        let start = x.index_of(day).ok_or(Error::TargetDayUnavailable(day))?;
        if start + p > x.len() || x.timestamp(start + p - 1) != day + (p as i64 - 1) * x.dt() {
            return Err(Error::TargetDayUnavailable(day));
        }
        let forecasts = forecast_day(x, day, cfg, methods)?;
        days.push(DayResult {
            day,
            actual: x.values()[start..start + p].to_vec(),
            forecasts,
        });
    }

    let mut per_method = BTreeMap::new();
    for &method in methods.iter().collect::<BTreeSet<_>>() {
        let mut per_day = Vec::with_capacity(days.len());
        let mut sse = 0.0;
        let mut count = 0usize;
        for d in &days {
            let f = &d.forecasts[&method];
            per_day.push(hourly_rmse(f, &d.actual, samples_per_hour)?);
            sse += f
                .values
                .iter()
                .zip(&d.actual)
                .map(|(f, a)| (f - a).powi(2))
                .sum::<f64>();
            count += p;
        }
        per_method.insert(
            method,
            MethodScores {
                per_hour_rmse: averaged_rmse(&per_day)?,
                overall_rmse: (sse / count as f64).sqrt(),
                per_day_hourly_rmse: per_day,
            },
        );
    }

    Ok(EvalReport {
        per_method,
        days_evaluated: target_days.to_vec(),
        utc_offset_minutes: x.utc_offset_minutes(),
        config: *cfg,
        days,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn forecast(values: Vec<f64>) -> DayForecast {
        DayForecast {
            method: Method::Persistence,
            values,
            target_day_origin: 0,
            per_slot_order: None,
        }
    }

    fn small_cfg(p: usize) -> ForecastConfig {
        ForecastConfig {
            period_len: p,
            simple_ar_training_samples: 4 * p,
            ..ForecastConfig::default()
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!(matches!(
            "arima".parse::<Method>(),
            Err(Error::UnknownMethod(s)) if s == "arima"
        ));
        assert_eq!(
            Method::parse_list("simple-ar, persistence").unwrap(),
            vec![Method::SimpleAr, Method::Persistence]
        );
    }

    #[test]
    fn constant_columns_predict_their_constants() {
        let row: Vec<f64> = (0..6).map(|j| 1.0 + j as f64 * 0.7).collect();
        let m = PartitionMatrix::from_rows(&vec![row.clone(); 5], 600, 0).unwrap();
        let f = forecast_day_partitioned(&m, &small_cfg(6)).unwrap();
        for (a, b) in f.values.iter().zip(&row) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
        assert_eq!(f.per_slot_order.as_deref(), Some(&[0; 6][..]));
        assert_eq!(f.target_day_origin, 5 * 6 * 600);
    }

    #[test]
    fn partitioned_needs_three_days() {
        let m = PartitionMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 3.0]], 600, 0).unwrap();
        assert!(matches!(
            forecast_day_partitioned(&m, &small_cfg(2)),
            Err(Error::NotEnoughDays(2))
        ));
    }

    #[test]
    fn partitioned_clamps_negative() {
        // Column 0 trends downward hard enough that AR extrapolates below 0.
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|i| vec![(11 - i) as f64 * 0.1 + if i % 2 == 0 { 0.3 } else { 0.0 }, 1.0])
            .collect();
        let m = PartitionMatrix::from_rows(&rows, 600, 0).unwrap();
        let cfg = ForecastConfig {
            order_criterion: OrderCriterion::fixed(1),
            ..small_cfg(2)
        };
        let clamped = forecast_day_partitioned(&m, &cfg).unwrap();
        assert!(clamped.values.iter().all(|&v| v >= 0.0));
        let raw = forecast_day_partitioned(
            &m,
            &ForecastConfig {
                clamp_negative: false,
                ..cfg
            },
        )
        .unwrap();
        assert_eq!(clamped.values[0], raw.values[0].max(0.0));
    }

    #[test]
    fn simple_ar_on_constant() {
        let x = TimeSeries::new(vec![5.0; 40], 600, 0).unwrap();
        let f = forecast_day_simple_ar(&x, &small_cfg(8)).unwrap();
        assert_eq!(f.values, vec![5.0; 8]);
        assert_eq!(f.target_day_origin, 40 * 600);
        let short = TimeSeries::new(vec![5.0; 20], 600, 0).unwrap();
        assert!(matches!(
            forecast_day_simple_ar(&short, &small_cfg(8)),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn persistence_examples() {
        let x = TimeSeries::new(vec![1.0, 2.0, 7.3], 600, 0).unwrap();
        assert_eq!(forecast_persistence(&x, 3).unwrap().values, vec![7.3; 3]);
        let one = TimeSeries::new(vec![4.2], 600, 0).unwrap();
        assert_eq!(forecast_persistence(&one, 5).unwrap().values, vec![4.2; 5]);
    }

    #[test]
    fn hourly_rmse_examples() {
        let actual: Vec<f64> = (0..12).map(|i| i as f64).collect();
        assert_eq!(
            hourly_rmse(&forecast(actual.clone()), &actual, 6).unwrap(),
            vec![0.0, 0.0]
        );
        let shifted: Vec<f64> = actual.iter().map(|v| v + 1.0).collect();
        assert_eq!(
            hourly_rmse(&forecast(shifted), &actual, 6).unwrap(),
            vec![1.0, 1.0]
        );
        let errs = [1.0, 1.0, 1.0, 1.0, 1.0, 7.0];
        let pred: Vec<f64> = errs.to_vec();
        assert_eq!(hourly_rmse(&forecast(pred), &[0.0; 6], 6).unwrap(), vec![3.0]);
    }

    #[test]
    fn hourly_rmse_errors() {
        assert!(matches!(
            hourly_rmse(&forecast(vec![0.0; 6]), &[0.0; 5], 6),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            hourly_rmse(&forecast(vec![0.0; 7]), &[0.0; 7], 6),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn averaged_rmse_examples() {
        assert_eq!(averaged_rmse(&[vec![1.0, 2.0]]).unwrap(), vec![1.0, 2.0]);
        assert_eq!(
            averaged_rmse(&[vec![1.0, 3.0], vec![3.0, 1.0]]).unwrap(),
            vec![2.0, 2.0]
        );
        assert!(matches!(averaged_rmse(&[]), Err(Error::EmptyList)));
        assert!(matches!(
            averaged_rmse(&[vec![1.0], vec![1.0, 2.0]]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn persistence_backtest_scores_zero() {
        let p = 12;
        let mut values = vec![3.0; 5 * p];
        values[4 * p - 1] = 6.5;
        for v in &mut values[4 * p..] {
            *v = 6.5;
        }
        let x = TimeSeries::new(values, 600, 0).unwrap();
        let day = (4 * p) as i64 * 600;
        // 12 slots of 600 s is not a day, so use dt-agnostic forecast_day.
        let f = forecast_day(&x, day, &small_cfg(p), &[Method::Persistence]).unwrap();
        assert_eq!(f[&Method::Persistence].values, vec![6.5; p]);
    }

    #[test]
    fn backtest_missing_history() {
        let x = TimeSeries::new(vec![5.0; 144 * 3], 600, 0).unwrap();
        assert!(matches!(
            backtest(&x, &[0], &ForecastConfig::default(), &[Method::Persistence]),
            Err(Error::MissingHistory(0))
        ));
        assert!(matches!(
            backtest(&x, &[SECONDS_PER_DAY * 9], &ForecastConfig::default(), &[Method::Persistence]),
            Err(Error::TargetDayUnavailable(_))
        ));
    }

    #[test]
    fn backtest_persistence_constant_day() {
        let mut values = vec![4.0; 144 * 4];
        for v in &mut values[144 * 3 - 1..] {
            *v = 8.0;
        }
        let x = TimeSeries::new(values, 600, 0).unwrap();
        let r = backtest(
            &x,
            &[3 * SECONDS_PER_DAY],
            &ForecastConfig::default(),
            &[Method::Persistence],
        )
        .unwrap();
        let s = &r.per_method[&Method::Persistence];
        assert_eq!(s.overall_rmse, 0.0);
        assert_eq!(s.per_hour_rmse, vec![0.0; 24]);
    }

    #[test]
    fn last_complete_days_skips_partial_tail() {
        let x = TimeSeries::new(vec![1.0; 144 * 3 + 50], 600, 0).unwrap();
        assert_eq!(
            last_complete_days(&x, 2, 144),
            vec![SECONDS_PER_DAY, 2 * SECONDS_PER_DAY]
        );
        assert_eq!(last_complete_days(&x, 10, 144).len(), 3);
    }
}
