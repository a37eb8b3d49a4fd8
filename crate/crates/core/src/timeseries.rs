//! Uniformly sampled series, gap handling, and the days × slots partition.
//!
//! A [`TimeSeries`] is a run of equally spaced samples. When whole days are
//! removed by the gap policy the remaining days are concatenated and the jump
//! is recorded as a [`Splice`], so sample positions stay day-aligned while
//! [`TimeSeries::timestamp`] still reports wall-clock time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seconds in one day.
pub const SECONDS_PER_DAY: i64 = 86_400;

/// Default sampling interval of the wind records (10 minutes).
pub const DEFAULT_DT: i64 = 600;

/// Provenance of one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quality {
    Observed,
    Interpolated,
}

/// A jump in wall-clock time: `skipped` grid samples were removed right before
/// sample `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Splice {
    pub index: usize,
    pub skipped: usize,
}

/// Uniformly sampled scalar record.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    quality: Vec<Quality>,
    dt: i64,
    origin: i64,
    utc_offset_minutes: i32,
    splices: Vec<Splice>,
}

impl TimeSeries {
    /// Builds a gap-free series with every sample flagged observed.
    pub fn new(values: Vec<f64>, dt: i64, origin: i64) -> Result<Self> {
        let quality = vec![Quality::Observed; values.len()];
        Self::with_quality(values, quality, dt, origin)
    }

    pub fn with_quality(
        values: Vec<f64>,
        quality: Vec<Quality>,
        dt: i64,
        origin: i64,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if dt <= 0 {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        if quality.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: values.len(),
                got: quality.len(),
            });
        }
        Ok(Self {
            values,
            quality,
            dt,
            origin,
            utc_offset_minutes: 0,
            splices: Vec::new(),
        })
    }

    /// Sets the fixed offset of station-local time from UTC. Day boundaries
    /// are local midnights.
    pub fn with_utc_offset(mut self, minutes: i32) -> Self {
        self.utc_offset_minutes = minutes;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn quality(&self) -> &[Quality] {
        &self.quality
    }

    pub fn dt(&self) -> i64 {
        self.dt
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn utc_offset_minutes(&self) -> i32 {
        self.utc_offset_minutes
    }

    pub fn splices(&self) -> &[Splice] {
        &self.splices
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// UTC epoch seconds of sample `i`.
    pub fn timestamp(&self, i: usize) -> i64 {
        let skipped: usize = self
            .splices
            .iter()
            .take_while(|s| s.index <= i)
            .map(|s| s.skipped)
            .sum();
        self.origin + (i + skipped) as i64 * self.dt
    }

    /// Position of the sample taken at `ts`, if there is one.
    pub fn index_of(&self, ts: i64) -> Option<usize> {
        let mut offset = ts - self.origin;
        if offset < 0 || offset % self.dt != 0 {
            return None;
        }
        offset /= self.dt;
        // Walk the splices, subtracting removed samples as they are passed.
        let mut grid = offset as usize;
        for s in &self.splices {
            if grid < s.index {
                break;
            }
            if grid < s.index + s.skipped {
                return None;
            }
            grid -= s.skipped;
        }
        (grid < self.values.len()).then_some(grid)
    }

    /// Sub-series of samples `start..end`, keeping wall-clock timestamps.
    pub fn slice(&self, start: usize, end: usize) -> Result<TimeSeries> {
        if start >= end || end > self.len() {
            return Err(Error::IndexOutOfRange {
                index: end.max(start),
                len: self.len(),
            });
        }
        let splices = self
            .splices
            .iter()
            .filter(|s| s.index > start && s.index < end)
            .map(|s| Splice {
                index: s.index - start,
                skipped: s.skipped,
            })
            .collect();
        Ok(TimeSeries {
            values: self.values[start..end].to_vec(),
            quality: self.quality[start..end].to_vec(),
            dt: self.dt,
            origin: self.timestamp(start),
            utc_offset_minutes: self.utc_offset_minutes,
            splices,
        })
    }

    pub(crate) fn mark_interpolated(&mut self, indices: &[usize]) {
        for &i in indices {
            self.quality[i] = Quality::Interpolated;
        }
    }

    /// Local day number (days since the epoch in station time) of `ts`.
    pub fn local_day(&self, ts: i64) -> i64 {
        local_day(ts, self.utc_offset_minutes)
    }
}

pub(crate) fn local_day(ts: i64, utc_offset_minutes: i32) -> i64 {
    (ts + utc_offset_minutes as i64 * 60).div_euclid(SECONDS_PER_DAY)
}

/// First local midnight at or after `ts`.
pub fn next_midnight(ts: i64, utc_offset_minutes: i32) -> i64 {
    let off = utc_offset_minutes as i64 * 60;
    let local = ts + off;
    let day = local.div_euclid(SECONDS_PER_DAY);
    let start = if local.rem_euclid(SECONDS_PER_DAY) == 0 {
        day
    } else {
        day + 1
    };
    start * SECONDS_PER_DAY - off
}

/// What to do with missing samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapMode {
    LinearInterpolate,
    DropDay,
}

/// Missing-data policy for [`fill_gaps`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GapPolicy {
    pub mode: GapMode,
    /// Longest run of missing samples that linear interpolation may fill.
    pub max_run: usize,
    /// Offset of station-local time from UTC; days are local days.
    pub utc_offset_minutes: i32,
}

impl Default for GapPolicy {
    fn default() -> Self {
        Self {
            mode: GapMode::LinearInterpolate,
            max_run: 6,
            utc_offset_minutes: 0,
        }
    }
}

impl GapPolicy {
    pub fn drop_day() -> Self {
        Self {
            mode: GapMode::DropDay,
            ..Self::default()
        }
    }
}

/// Places raw `(timestamp, value)` records on a uniform `dt` grid and resolves
/// missing samples according to `policy`.
///
/// Under linear interpolation, interior runs of at most `max_run` missing
/// samples are filled and flagged [`Quality::Interpolated`]; any other run
/// drops every day it touches. Under drop-day every day containing a gap is
/// removed.
pub fn fill_gaps(raw: &[(i64, Option<f64>)], dt: i64, policy: &GapPolicy) -> Result<TimeSeries> {
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    if dt <= 0 {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if let Some(i) = raw.windows(2).position(|w| w[1].0 <= w[0].0) {
        return Err(Error::NonMonotonicTimestamps(i + 1));
    }
    if raw.iter().any(|(_, v)| v.is_some_and(|v| !v.is_finite())) {
        return Err(Error::NonFiniteInput);
    }

    let t0 = raw[0].0;
    let mut slots: Vec<Option<f64>> = Vec::new();
    for &(t, v) in raw {
        let delta = t - t0;
        if delta % dt != 0 {
            return Err(Error::InconsistentSamplingInterval(format!(
                "timestamp {t} is not on the {dt}s grid starting at {t0}"
            )));
        }
        let k = (delta / dt) as usize;
        if k >= slots.len() {
            slots.resize(k + 1, None);
        }
        slots[k] = v;
    }

    let day_of = |k: usize| local_day(t0 + k as i64 * dt, policy.utc_offset_minutes);
    let mut values = vec![0.0; slots.len()];
    let mut quality = vec![Quality::Observed; slots.len()];
    let mut dropped_days = std::collections::BTreeSet::new();

    let mut k = 0;
    while k < slots.len() {
        if let Some(v) = slots[k] {
            values[k] = v;
            k += 1;
            continue;
        }
        let start = k;
        while k < slots.len() && slots[k].is_none() {
            k += 1;
        }
        let end = k;
        let fillable = policy.mode == GapMode::LinearInterpolate
            && start > 0
            && end < slots.len()
            && end - start <= policy.max_run;
        if fillable {
            let left = values[start - 1];
            let right = slots[end].expect("run ends at an observed sample");
            let span = (end - start + 1) as f64;
            for (step, i) in (start..end).enumerate() {
                let w = (step + 1) as f64 / span;
                values[i] = left + (right - left) * w;
                quality[i] = Quality::Interpolated;
            }
        } else {
            dropped_days.extend(day_of(start)..=day_of(end - 1));
        }
    }

    if dropped_days.is_empty() {
        return Ok(TimeSeries::with_quality(values, quality, dt, t0)?
            .with_utc_offset(policy.utc_offset_minutes));
    }

    let mut kept_values = Vec::with_capacity(values.len());
    let mut kept_quality = Vec::with_capacity(values.len());
    let mut splices = Vec::new();
    let mut origin = None;
    let mut pending_skip = 0usize;
    for (k, (&v, &q)) in values.iter().zip(&quality).enumerate() {
        if dropped_days.contains(&day_of(k)) {
            pending_skip += 1;
            continue;
        }
        if origin.is_none() {
            origin = Some(t0 + k as i64 * dt);
        } else if pending_skip > 0 {
            splices.push(Splice {
                index: kept_values.len(),
                skipped: pending_skip,
            });
        }
        pending_skip = 0;
        kept_values.push(v);
        kept_quality.push(q);
    }
    let Some(origin) = origin else {
        return Err(Error::AllDaysDropped);
    };
    log::info!("gap policy dropped {} day(s)", dropped_days.len());
    let mut series = TimeSeries::with_quality(kept_values, kept_quality, dt, origin)?
        .with_utc_offset(policy.utc_offset_minutes);
    series.splices = splices;
    Ok(series)
}

/// The days × slots arrangement of a series: row `i` holds day `i`, column `j`
/// holds slot `j` of every day.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    dt: i64,
    origin: i64,
}

/// Rearranges `x` into `floor(len / period_len)` rows of `period_len` slots.
/// A trailing partial period is discarded.
pub fn partition(x: &TimeSeries, period_len: usize) -> Result<PartitionMatrix> {
    if period_len < 2 {
        return Err(Error::InvalidPeriod(period_len));
    }
    if x.len() < period_len {
        return Err(Error::SeriesTooShort {
            needed: period_len,
            got: x.len(),
        });
    }
    let rows = x.len() / period_len;
    let used = rows * period_len;
    if used < x.len() {
        log::warn!(
            "partition: discarding {} trailing sample(s) of an incomplete period",
            x.len() - used
        );
    }
    Ok(PartitionMatrix {
        rows,
        cols: period_len,
        data: x.values()[..used].to_vec(),
        dt: x.dt(),
        origin: x.origin(),
    })
}

impl PartitionMatrix {
    /// Builds a matrix from explicit rows of equal length.
    pub fn from_rows(rows: &[Vec<f64>], dt: i64, origin: i64) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::EmptyInput);
        };
        let cols = first.len();
        if cols < 2 {
            return Err(Error::InvalidPeriod(cols));
        }
        if dt <= 0 {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
            dt,
            origin,
        })
    }

    /// Number of days.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Slots per day.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dt(&self) -> i64 {
        self.dt
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Slot `j` of every day, oldest day first.
    pub fn column(&self, j: usize) -> Result<Vec<f64>> {
        if j >= self.cols {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    /// The last `days` rows (all rows when `days >= rows`).
    pub fn tail(&self, days: usize) -> PartitionMatrix {
        let keep = days.min(self.rows);
        let first = self.rows - keep;
        PartitionMatrix {
            rows: keep,
            cols: self.cols,
            data: self.data[first * self.cols..].to_vec(),
            dt: self.dt,
            origin: self.origin + (first * self.cols) as i64 * self.dt,
        }
    }

    /// Row-major concatenation back into a series.
    pub fn flatten(&self) -> TimeSeries {
        TimeSeries::new(self.data.clone(), self.dt, self.origin)
            .expect("matrix invariants guarantee a valid series")
    }
}
