//! Delimited-text ingestion of wind records.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timeseries::{fill_gaps, next_midnight, GapPolicy, Quality, TimeSeries, DEFAULT_DT};

/// A column picked by header name or zero-based position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
}

impl FromStr for ColumnRef {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.to_string()),
        })
    }
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnRef::Index(i) => write!(f, "#{i}"),
            ColumnRef::Name(n) => f.write_str(n),
        }
    }
}

/// How timestamps are written in the file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TimestampFormat {
    /// Integer seconds since 1970-01-01T00:00:00Z.
    EpochSeconds,
    /// RFC 3339 with an offset, or a naive `YYYY-MM-DD[T ]HH:MM[:SS]` in
    /// station-local time.
    Iso8601,
    /// A `chrono` strftime pattern in station-local time.
    Custom(String),
}

impl FromStr for TimestampFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "epoch-seconds" | "epoch" => TimestampFormat::EpochSeconds,
            "iso-8601" | "iso8601" => TimestampFormat::Iso8601,
            "" => return Err(Error::Config("empty timestamp format".into())),
            pattern => TimestampFormat::Custom(pattern.to_string()),
        })
    }
}

impl TryFrom<String> for TimestampFormat {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TimestampFormat> for String {
    fn from(f: TimestampFormat) -> String {
        match f {
            TimestampFormat::EpochSeconds => "epoch-seconds".into(),
            TimestampFormat::Iso8601 => "iso-8601".into(),
            TimestampFormat::Custom(p) => p,
        }
    }
}

/// Layout of an input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IngestSchema {
    pub timestamp_column: ColumnRef,
    pub value_column: ColumnRef,
    /// Optional `observed`/`interpolated` flags, as written by [`write_csv`].
    pub quality_column: Option<ColumnRef>,
    pub timestamp_format: TimestampFormat,
    pub delimiter: char,
    pub has_header: bool,
    /// Offset of station-local time from UTC. Applies to naive timestamps
    /// and to day boundaries.
    pub utc_offset_minutes: i32,
    /// Expected sampling interval, seconds.
    pub dt: i64,
}

impl Default for IngestSchema {
    fn default() -> Self {
        Self {
            timestamp_column: ColumnRef::Index(0),
            value_column: ColumnRef::Index(1),
            quality_column: None,
            timestamp_format: TimestampFormat::EpochSeconds,
            delimiter: ',',
            has_header: true,
            utc_offset_minutes: 0,
            dt: DEFAULT_DT,
        }
    }
}

impl IngestSchema {
    pub fn validate(&self) -> Result<()> {
        if self.timestamp_column == self.value_column
            || self.quality_column.as_ref() == Some(&self.value_column)
            || self.quality_column.as_ref() == Some(&self.timestamp_column)
        {
            return Err(Error::Config("schema columns must be distinct".into()));
        }
        if !self.delimiter.is_ascii() || self.delimiter.is_ascii_control() && self.delimiter != '\t'
        {
            return Err(Error::Config(format!(
                "delimiter {:?} must be a printable ASCII character or tab",
                self.delimiter
            )));
        }
        if self.dt <= 0 {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        Ok(())
    }

    fn parse_timestamp(&self, raw: &str) -> std::result::Result<i64, String> {
        let raw = raw.trim();
        let offset = self.utc_offset_minutes as i64 * 60;
        match &self.timestamp_format {
            TimestampFormat::EpochSeconds => raw
                .parse::<i64>()
                .or_else(|_| {
                    raw.parse::<f64>()
                        .ok()
                        .filter(|v| v.fract() == 0.0 && v.is_finite())
                        .map(|v| v as i64)
                        .ok_or(())
                })
                .map_err(|_| format!("'{raw}' is not an integer epoch timestamp")),
            TimestampFormat::Iso8601 => {
                if let Ok(dt) = DateTime::parse_from_rfc3339(raw) {
                    return Ok(dt.timestamp());
                }
                ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M"]
                    .iter()
                    .find_map(|f| NaiveDateTime::parse_from_str(raw, f).ok())
                    .map(|naive| naive.and_utc().timestamp() - offset)
                    .ok_or_else(|| format!("'{raw}' is not an ISO-8601 timestamp"))
            }
            TimestampFormat::Custom(pattern) => NaiveDateTime::parse_from_str(raw, pattern)
                .map(|naive| naive.and_utc().timestamp() - offset)
                .map_err(|e| format!("'{raw}' does not match '{pattern}': {e}")),
        }
    }
}

fn resolve(col: &ColumnRef, headers: Option<&csv::StringRecord>) -> Result<usize> {
    match col {
        ColumnRef::Index(i) => Ok(*i),
        ColumnRef::Name(name) => headers
            .and_then(|h| h.iter().position(|c| c.trim() == name))
            .ok_or_else(|| Error::ParseError {
                row: 1,
                column: name.clone(),
                reason: "column not found in header".into(),
            }),
    }
}

/// Reads a wind record from `path`; see [`read_csv`].
pub fn load_csv(path: impl AsRef<Path>, schema: &IngestSchema, gaps: &GapPolicy) -> Result<TimeSeries> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    read_csv(file, schema, gaps)
}

/// Parses delimited text into a uniform series.
///
/// Rows must have strictly increasing timestamps whose most common spacing is
/// `schema.dt`. Rows before the first local midnight are discarded, empty or
/// `NaN`/`NA` values count as missing, and `gaps` resolves what is missing.
pub fn read_csv<R: Read>(reader: R, schema: &IngestSchema, gaps: &GapPolicy) -> Result<TimeSeries> {
    schema.validate()?;
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter as u8)
        .has_headers(schema.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = if schema.has_header {
        Some(rdr.headers().map_err(csv_error)?.clone())
    } else {
        None
    };
    let ts_col = resolve(&schema.timestamp_column, headers.as_ref())?;
    let val_col = resolve(&schema.value_column, headers.as_ref())?;
    let q_col = schema
        .quality_column
        .as_ref()
        .map(|c| resolve(c, headers.as_ref()))
        .transpose()?;

    let mut raw: Vec<(i64, Option<f64>)> = Vec::new();
    let mut flags: HashMap<i64, Quality> = HashMap::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let field = |idx: usize, col: &ColumnRef| {
            record.get(idx).ok_or_else(|| Error::ParseError {
                row,
                column: col.to_string(),
                reason: "missing field".into(),
            })
        };
        let ts = schema
            .parse_timestamp(field(ts_col, &schema.timestamp_column)?)
            .map_err(|reason| Error::ParseError {
                row,
                column: schema.timestamp_column.to_string(),
                reason,
            })?;
        let text = field(val_col, &schema.value_column)?;
        let value = match text {
            "" | "NaN" | "nan" | "NA" | "null" => None,
            s => {
                let v: f64 = s.parse().map_err(|_| Error::ParseError {
                    row,
                    column: schema.value_column.to_string(),
                    reason: format!("'{s}' is not a number"),
                })?;
                if !v.is_finite() {
                    None
                } else if v < 0.0 {
                    return Err(Error::NegativeSpeed(row));
                } else {
                    Some(v)
                }
            }
        };
        if let (Some(idx), Some(col)) = (q_col, schema.quality_column.as_ref()) {
            match field(idx, col)? {
                "interpolated" => {
                    flags.insert(ts, Quality::Interpolated);
                }
                "observed" | "" => {}
                other => {
                    return Err(Error::ParseError {
                        row,
                        column: col.to_string(),
                        reason: format!("unknown quality flag '{other}'"),
                    })
                }
            }
        }
        if let Some(&(prev, _)) = raw.last() {
            if ts <= prev {
                return Err(Error::NonMonotonicTimestamps(row));
            }
        }
        raw.push((ts, value));
    }
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }

    check_sampling_interval(&raw, schema.dt)?;

    let midnight = next_midnight(raw[0].0, schema.utc_offset_minutes);
    let skip = raw.partition_point(|&(t, _)| t < midnight);
    if skip > 0 {
        log::info!("discarding {skip} row(s) before the first local midnight");
    }
    let mut aligned: Vec<(i64, Option<f64>)> = raw.split_off(skip);
    if aligned.is_empty() {
        return Err(Error::SeriesTooShort { needed: 1, got: 0 });
    }
    if aligned[0].0 != midnight && (aligned[0].0 - midnight) % schema.dt == 0 {
        aligned.insert(0, (midnight, None));
    }

    let policy = GapPolicy {
        utc_offset_minutes: schema.utc_offset_minutes,
        ..*gaps
    };
    let mut series = fill_gaps(&aligned, schema.dt, &policy)?;
    if !flags.is_empty() {
        let marks: Vec<usize> = (0..series.len())
            .filter(|&i| flags.contains_key(&series.timestamp(i)))
            .collect();
        series.mark_interpolated(&marks);
    }
    Ok(series)
}

/// The most common spacing (ties to the smaller) must be `dt`, and every
/// spacing a whole multiple of it.
fn check_sampling_interval(raw: &[(i64, Option<f64>)], dt: i64) -> Result<()> {
    if raw.len() < 2 {
        return Ok(());
    }
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for w in raw.windows(2) {
        let delta = w[1].0 - w[0].0;
        if delta % dt != 0 {
            return Err(Error::InconsistentSamplingInterval(format!(
                "spacing of {delta}s at timestamp {} is not a multiple of {dt}s",
                w[1].0
            )));
        }
        *counts.entry(delta).or_default() += 1;
    }
    let (mode, _) = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .expect("at least one delta");
    if *mode != dt {
        return Err(Error::InconsistentSamplingInterval(format!(
            "most common spacing is {mode}s, configured dt is {dt}s"
        )));
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.line() as usize);
    Error::ParseError {
        row,
        column: String::new(),
        reason: e.to_string(),
    }
}

/// Writes `timestamp,value,quality` with epoch-second timestamps. Values use
/// the shortest representation that parses back to the same `f64`.
pub fn write_csv<W: Write>(series: &TimeSeries, mut out: W) -> Result<()> {
    writeln!(out, "timestamp,value,quality")?;
    for (i, (v, q)) in series.values().iter().zip(series.quality()).enumerate() {
        let flag = match q {
            Quality::Observed => "observed",
            Quality::Interpolated => "interpolated",
        };
        writeln!(out, "{},{},{}", series.timestamp(i), v, flag)?;
    }
    out.flush()?;
    Ok(())
}

/// Schema matching the output of [`write_csv`].
pub fn written_schema(dt: i64, utc_offset_minutes: i32) -> IngestSchema {
    IngestSchema {
        timestamp_column: ColumnRef::Name("timestamp".into()),
        value_column: ColumnRef::Name("value".into()),
        quality_column: Some(ColumnRef::Name("quality".into())),
        utc_offset_minutes,
        dt,
        ..IngestSchema::default()
    }
}

/// UTC epoch seconds of local midnight on `date` (`YYYY-MM-DD`).
pub fn parse_day(date: &str, utc_offset_minutes: i32) -> Result<i64> {
    let d = NaiveDate::parse_from_str(date.trim(), "%Y-%m-%d")
        .map_err(|e| Error::Config(format!("invalid date '{date}': {e}")))?;
    let midnight = d.and_hms_opt(0, 0, 0).expect("midnight exists").and_utc().timestamp();
    Ok(midnight - utc_offset_minutes as i64 * 60)
}

/// Local calendar date of `ts` as `YYYY-MM-DD`.
pub fn format_day(ts: i64, utc_offset_minutes: i32) -> String {
    local_datetime(ts, utc_offset_minutes)
        .map(|d| d.format("%Y-%m-%d").to_string())
        .unwrap_or_else(|| ts.to_string())
}

/// Local time of `ts` as RFC 3339 with the station offset.
pub fn format_timestamp(ts: i64, utc_offset_minutes: i32) -> String {
    let Some(offset) = chrono::FixedOffset::east_opt(utc_offset_minutes * 60) else {
        return ts.to_string();
    };
    DateTime::from_timestamp(ts, 0)
        .map(|d| d.with_timezone(&offset).to_rfc3339())
        .unwrap_or_else(|| ts.to_string())
}

fn local_datetime(ts: i64, utc_offset_minutes: i32) -> Option<NaiveDateTime> {
    DateTime::from_timestamp(ts + utc_offset_minutes as i64 * 60, 0).map(|d| d.naive_utc())
}
