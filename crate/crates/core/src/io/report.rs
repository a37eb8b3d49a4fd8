//! CSV and JSON serialisation of forecasts and evaluation reports.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::Result;
use crate::forecast::{DayForecast, EvalReport, Method};
use crate::io::ingest::{format_day, format_timestamp};

/// Header of the evaluation CSV.
pub const REPORT_CSV_HEADER: &str = "method,day,hour,rmse";

/// Formats `v` with six significant digits in plain decimal notation.
pub fn format_sig6(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0.00000".into();
    }
    let mut magnitude = v.abs().log10().floor() as i32;
    let s = format!("{v:.*}", (5 - magnitude).max(0) as usize);
    // Rounding may carry into a new leading digit (9.9999996 -> 10.00000).
    if s.trim_start_matches('-').parse::<f64>().unwrap_or(0.0) >= 10f64.powi(magnitude + 1) {
        magnitude += 1;
        return format!("{v:.*}", (5 - magnitude).max(0) as usize);
    }
    s
}

/// One row per method, day and hour, followed by the across-day averages
/// with `average` in the day column.
pub fn write_report_csv<W: Write>(report: &EvalReport, mut out: W) -> Result<()> {
    writeln!(out, "{REPORT_CSV_HEADER}")?;
    for (method, scores) in &report.per_method {
        for (day, hourly) in report.days_evaluated.iter().zip(&scores.per_day_hourly_rmse) {
            let date = format_day(*day, report.utc_offset_minutes);
            for (h, v) in hourly.iter().enumerate() {
                writeln!(out, "{method},{date},{},{}", h + 1, format_sig6(*v))?;
            }
        }
        for (h, v) in scores.per_hour_rmse.iter().enumerate() {
            writeln!(out, "{method},average,{},{}", h + 1, format_sig6(*v))?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Pretty-printed JSON of the whole report.
pub fn write_report_json<W: Write>(report: &EvalReport, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report)
        .map_err(|e| crate::Error::WriteError(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// `slot,timestamp,<method>...[,actual]` for one forecast day.
pub fn write_forecast_csv<W: Write>(
    forecasts: &BTreeMap<Method, DayForecast>,
    actual: Option<&[f64]>,
    dt: i64,
    utc_offset_minutes: i32,
    mut out: W,
) -> Result<()> {
    let Some(first) = forecasts.values().next() else {
        return Err(crate::Error::EmptyList);
    };
    let p = first.values.len();
    for f in forecasts.values() {
        if f.values.len() != p {
            return Err(crate::Error::LengthMismatch {
                expected: p,
                got: f.values.len(),
            });
        }
    }
    if let Some(a) = actual {
        if a.len() != p {
            return Err(crate::Error::LengthMismatch {
                expected: p,
                got: a.len(),
            });
        }
    }
    write!(out, "slot,timestamp")?;
    for m in forecasts.keys() {
        write!(out, ",{m}")?;
    }
    if actual.is_some() {
        write!(out, ",actual")?;
    }
    writeln!(out)?;
    for slot in 0..p {
        let ts = first.target_day_origin + slot as i64 * dt;
        write!(out, "{slot},{}", format_timestamp(ts, utc_offset_minutes))?;
        for f in forecasts.values() {
            write!(out, ",{}", format_sig6(f.values[slot]))?;
        }
        if let Some(a) = actual {
            write!(out, ",{}", format_sig6(a[slot]))?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}
