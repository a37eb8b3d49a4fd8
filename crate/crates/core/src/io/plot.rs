//! Self-contained SVG charts.
//!
//! Output is a pure function of the inputs: coordinates are printed with a
//! fixed number of decimals and iteration order is deterministic, so equal
//! inputs give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::forecast::{DayForecast, EvalReport, Method};
use crate::wavelet::{detect_peak, global_spectrum_partial, PowerSpectrum, DEFAULT_PEAK_FACTOR};

const PALETTE: [&str; 6] = ["#1b1b1b", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"];

fn method_color(m: Method) -> &'static str {
    match m {
        Method::PartitionedAr => PALETTE[1],
        Method::SimpleAr => PALETTE[2],
        Method::Persistence => PALETTE[3],
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// `(label, colour, points)`.
pub type Series = (String, String, Vec<(f64, f64)>);

/// Line chart with a shared x axis.
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Tick positions in data units and their labels.
    pub x_ticks: Vec<(f64, String)>,
    pub series: Vec<Series>,
    pub width: f64,
    pub height: f64,
}

impl LineChart {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_ticks: Vec::new(),
            series: Vec::new(),
            width: 800.0,
            height: 420.0,
        }
    }

    pub fn render(&self) -> String {
        let (w, h) = (self.width, self.height);
        let (left, right, top, bottom) = (64.0, w - 160.0, 40.0, h - 56.0);

        let points = self.series.iter().flat_map(|(_, _, p)| p.iter());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, 0.0f64, f64::MIN);
        for &(x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            (x0, x1, y1) = (0.0, 1.0, 1.0);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        let step = nice_step((y1 - y0) / 5.0);
        y1 = (y1 / step).ceil() * step;
        let ticks = ((y1 - y0) / step).round() as usize;
        let sx = |x: f64| left + (x - x0) / (x1 - x0) * (right - left);
        let sy = |y: f64| bottom - (y - y0) / (y1 - y0) * (bottom - top);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{w:.0}" height="{h:.0}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            (left + right) / 2.0,
            escape(&self.title)
        );
        // Axes.
        let _ = writeln!(
            s,
            r#"<line x1="{left:.2}" y1="{bottom:.2}" x2="{right:.2}" y2="{bottom:.2}" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<line x1="{left:.2}" y1="{top:.2}" x2="{left:.2}" y2="{bottom:.2}" stroke="black"/>"#
        );
        for (x, label) in &self.x_ticks {
            let px = sx(*x);
            let _ = writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{bottom:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                bottom + 5.0,
                bottom + 18.0,
                escape(label)
            );
        }
        for k in 0..=ticks {
            let y = y0 + step * k as f64;
            let py = sy(y);
            let _ = writeln!(
                s,
                r##"<line x1="{:.2}" y1="{py:.2}" x2="{right:.2}" y2="{py:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                left,
                left - 6.0,
                py + 4.0,
                tick_label(y)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (left + right) / 2.0,
            h - 16.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            (top + bottom) / 2.0,
            (top + bottom) / 2.0,
            escape(&self.y_label)
        );

        for (i, (label, color, pts)) in self.series.iter().enumerate() {
            let mut path = String::new();
            for (k, &(x, y)) in pts.iter().enumerate() {
                if k > 0 {
                    path.push(' ');
                }
                let _ = write!(path, "{:.2},{:.2}", sx(x), sy(y));
            }
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>"#
            );
            // Legend entry.
            let ly = top + 10.0 + i as f64 * 20.0;
            let lx = right + 16.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="3"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 24.0,
                lx + 30.0,
                ly + 4.0,
                escape(label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Smallest of 1, 2, 2.5, 5 (times a power of ten) not below `raw`.
fn nice_step(raw: f64) -> f64 {
    if raw.is_nan() || raw <= 0.0 {
        return 1.0;
    }
    let base = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 2.5, 5.0, 10.0]
        .into_iter()
        .map(|m| m * base)
        .find(|s| *s >= raw * (1.0 - 1e-12))
        .unwrap_or(10.0 * base)
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::WriteError(format!("{}: {e}", path.display())))
}

fn clock_label(slot: usize, slots_per_day: usize) -> String {
    let minutes = slot * 1440 / slots_per_day;
    format!("{:02}:{:02}", minutes / 60, minutes % 60)
}

/// Actual wind speed against each method's forecast over one day.
pub fn forecast_chart(actual: &[f64], forecasts: &BTreeMap<Method, DayForecast>) -> Result<String> {
    let p = actual.len();
    if p < 2 {
        return Err(Error::InvalidPeriod(p));
    }
    for f in forecasts.values() {
        if f.values.len() != p {
            return Err(Error::LengthMismatch {
                expected: p,
                got: f.values.len(),
            });
        }
    }
    let mut chart = LineChart::new("Day-ahead forecast", "time of day", "wind speed (m/s)");
    let mut ticks: Vec<usize> = (0..p).step_by((p / 8).max(1)).collect();
    if ticks.last() != Some(&(p - 1)) {
        if p - 1 - ticks.last().unwrap() < p / 16 {
            ticks.pop();
        }
        ticks.push(p - 1);
    }
    chart.x_ticks = ticks
        .into_iter()
        .map(|k| (k as f64, clock_label(k, p)))
        .collect();
    let pts = |v: &[f64]| v.iter().enumerate().map(|(i, &y)| (i as f64, y)).collect();
    chart
        .series
        .push(("actual".into(), PALETTE[0].into(), pts(actual)));
    for (m, f) in forecasts {
        chart
            .series
            .push((m.to_string(), method_color(*m).into(), pts(&f.values)));
    }
    Ok(chart.render())
}

/// Writes [`forecast_chart`] to `out_path`. Nothing is written if the
/// inputs are inconsistent.
pub fn emit_forecast_plot(
    actual: &[f64],
    forecasts: &BTreeMap<Method, DayForecast>,
    out_path: impl AsRef<Path>,
) -> Result<()> {
    let svg = forecast_chart(actual, forecasts)?;
    write_file(out_path.as_ref(), &svg)
}

/// Averaged hourly RMSE per method.
pub fn rmse_chart(report: &EvalReport) -> String {
    let mut chart = LineChart::new(
        "Averaged hourly RMSE",
        "hour of day",
        "RMSE (m/s)",
    );
    let hours = report
        .per_method
        .values()
        .map(|s| s.per_hour_rmse.len())
        .max()
        .unwrap_or(0);
    chart.x_ticks = (1..=hours)
        .filter(|h| *h == 1 || h % 3 == 0)
        .map(|h| (h as f64, h.to_string()))
        .collect();
    for (m, scores) in &report.per_method {
        let pts = scores
            .per_hour_rmse
            .iter()
            .enumerate()
            .map(|(i, &v)| ((i + 1) as f64, v))
            .collect();
        chart.series.push((m.to_string(), method_color(*m).into(), pts));
    }
    chart.render()
}

pub fn emit_rmse_plot(report: &EvalReport, out_path: impl AsRef<Path>) -> Result<()> {
    write_file(out_path.as_ref(), &rmse_chart(report))
}

/// Five-stop perceptual ramp, `t` in `[0, 1]`.
fn ramp(t: f64) -> (u8, u8, u8) {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let t = t.clamp(0.0, 1.0) * 4.0;
    let i = (t.floor() as usize).min(3);
    let f = t - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    (mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

const COLOR_LEVELS: usize = 32;
const MAX_COLUMNS: usize = 240;

/// Time–period heatmap of wavelet power with the cone of influence shaded,
/// and a side panel with the global spectrum and its detected peak.
pub fn spectrum_chart(p: &PowerSpectrum) -> Result<String> {
    let n = p.len();
    let nj = p.num_scales();
    if n == 0 || nj == 0 {
        return Err(Error::EmptyInput);
    }
    let (w, h) = (960.0, 520.0);
    let (left, right, top, bottom) = (72.0, 700.0, 40.0, 460.0);
    let (pleft, pright) = (740.0, 920.0);
    let cols = n.min(MAX_COLUMNS);
    let cell_w = (right - left) / cols as f64;
    let cell_h = (bottom - top) / nj as f64;
    let block = |c: usize| (c * n / cols, ((c + 1) * n / cols).max(c * n / cols + 1));

    // Block-averaged power, log-scaled over four decades below the maximum.
    let mut grid = vec![vec![0.0; cols]; nj];
    let mut max = 0.0f64;
    for (j, row) in grid.iter_mut().enumerate() {
        let powers = p.at_scale(j);
        for (c, cell) in row.iter_mut().enumerate() {
            let (a, b) = block(c);
            *cell = powers[a..b].iter().sum::<f64>() / (b - a) as f64;
            max = max.max(*cell);
        }
    }
    let level = |v: f64| -> usize {
        if max <= 0.0 || v <= 0.0 {
            return 0;
        }
        let t = ((v / max).log10() + 4.0) / 4.0;
        ((t.clamp(0.0, 1.0) * (COLOR_LEVELS - 1) as f64).round()) as usize
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w:.0}" height="{h:.0}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">Wavelet power spectrum</text>"#,
        (left + right) / 2.0
    );
    let _ = writeln!(s, r#"<g class="heatmap" shape-rendering="crispEdges">"#);
    for (j, row) in grid.iter().enumerate() {
        let y = top + j as f64 * cell_h;
        // Merge horizontal runs of equal colour.
        let mut c = 0;
        while c < cols {
            let lv = level(row[c]);
            let mut end = c + 1;
            while end < cols && level(row[end]) == lv {
                end += 1;
            }
            let (r, g, b) = ramp(lv as f64 / (COLOR_LEVELS - 1) as f64);
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{cell_h:.2}" fill="rgb({r},{g},{b})"/>"#,
                left + c as f64 * cell_w,
                (end - c) as f64 * cell_w
            );
            c = end;
        }
    }
    let _ = writeln!(s, "</g>");

    // Scale s maps to the row whose centre it would occupy on the log grid.
    let log_first = p.scales()[0].log2();
    let log_step = if nj > 1 {
        (p.scales()[nj - 1].log2() - log_first) / (nj - 1) as f64
    } else {
        1.0
    };
    let y_of_scale = |scale: f64| -> f64 {
        let row = if scale > 0.0 { (scale.log2() - log_first) / log_step } else { -0.5 };
        (top + (row + 0.5) * cell_h).clamp(top, bottom)
    };

    let mut coi_path = format!("M{left:.2},{bottom:.2}");
    for c in 0..cols {
        let (a, b) = block(c);
        let coi = p.coi()[(a + b - 1) / 2];
        let _ = write!(coi_path, " L{:.2},{:.2}", left + (c as f64 + 0.5) * cell_w, y_of_scale(coi));
    }
    let _ = write!(coi_path, " L{right:.2},{bottom:.2} Z");
    let _ = writeln!(
        s,
        r#"<path class="coi" d="{coi_path}" fill="white" fill-opacity="0.55" stroke="black" stroke-dasharray="4 3"/>"#
    );

    // Period axis in hours (or samples when dt does not divide an hour).
    let dt = p.dt() as f64;
    let _ = writeln!(
        s,
        r#"<line x1="{left:.2}" y1="{top:.2}" x2="{left:.2}" y2="{bottom:.2}" stroke="black"/>"#
    );
    let ff = p.periods()[0] / p.scales()[0];
    let (unit, unit_seconds) = if dt < 3600.0 { ("h", 3600.0) } else { ("d", 86400.0) };
    let lo = p.periods()[0] / unit_seconds;
    let hi = p.periods()[nj - 1] / unit_seconds;
    let mut tick = 2f64.powf(lo.log2().ceil());
    while tick <= hi * 1.0001 {
        let y = y_of_scale(tick * unit_seconds / ff);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{left:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 5.0,
            left - 8.0,
            y + 4.0,
            tick_label(tick)
        );
        tick *= 2.0;
    }
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">period ({unit})</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">time ({n} samples, dt = {} s)</text>"#,
        (left + right) / 2.0,
        bottom + 28.0,
        p.dt()
    );

    // Global spectrum panel.
    let global = global_spectrum_partial(p, true);
    let gmax = global.iter().flatten().fold(0.0f64, |m, v| m.max(*v));
    let gx = |v: f64| pleft + if gmax > 0.0 { v / gmax } else { 0.0 } * (pright - pleft);
    let _ = writeln!(
        s,
        r#"<line x1="{pleft:.2}" y1="{bottom:.2}" x2="{pright:.2}" y2="{bottom:.2}" stroke="black"/><line x1="{pleft:.2}" y1="{top:.2}" x2="{pleft:.2}" y2="{bottom:.2}" stroke="black"/>"#
    );
    let mut pts = String::new();
    for (j, v) in global.iter().enumerate() {
        if let Some(v) = v {
            if !pts.is_empty() {
                pts.push(' ');
            }
            let _ = write!(pts, "{:.2},{:.2}", gx(*v), top + (j as f64 + 0.5) * cell_h);
        }
    }
    let _ = writeln!(
        s,
        r#"<polyline class="global" fill="none" stroke="black" stroke-width="1.5" points="{pts}"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">global power</text>"#,
        (pleft + pright) / 2.0,
        bottom + 28.0
    );
    match detect_peak(p, DEFAULT_PEAK_FACTOR) {
        Ok(peak) => {
            let y = top + (peak.scale_index as f64 + 0.5) * cell_h;
            let _ = writeln!(
                s,
                r#"<circle class="peak" data-scale-index="{}" data-period-samples="{}" cx="{:.2}" cy="{y:.2}" r="5" fill="none" stroke="red" stroke-width="2"/>"#,
                peak.scale_index,
                peak.period_samples,
                gx(peak.power)
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" fill="red">peak: {} samples</text>"#,
                (pleft + pright) / 2.0,
                top - 8.0,
                peak.period_samples
            );
        }
        Err(_) => {
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">no dominant period</text>"#,
                (pleft + pright) / 2.0,
                top - 8.0
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_spectrum_plot(p: &PowerSpectrum, out_path: impl AsRef<Path>) -> Result<()> {
    let svg = spectrum_chart(p)?;
    write_file(out_path.as_ref(), &svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn day_forecast(method: Method, values: Vec<f64>) -> DayForecast {
        DayForecast {
            method,
            values,
            target_day_origin: 0,
            per_slot_order: None,
        }
    }

    #[test]
    fn forecast_plot_has_one_polyline_per_series() {
        let actual: Vec<f64> = (0..144).map(|i| 5.0 + (i as f64 / 20.0).sin()).collect();
        let mut forecasts = BTreeMap::new();
        forecasts.insert(Method::PartitionedAr, day_forecast(Method::PartitionedAr, vec![5.0; 144]));
        forecasts.insert(Method::SimpleAr, day_forecast(Method::SimpleAr, vec![6.0; 144]));
        let svg = forecast_chart(&actual, &forecasts).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains(">00:00<") && svg.contains(">23:50<"));
        assert_eq!(svg, forecast_chart(&actual, &forecasts).unwrap());
    }

    #[test]
    fn mismatched_lengths_write_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.svg");
        let mut forecasts = BTreeMap::new();
        forecasts.insert(Method::SimpleAr, day_forecast(Method::SimpleAr, vec![6.0; 10]));
        assert!(matches!(
            emit_forecast_plot(&[1.0; 12], &forecasts, &path),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(!path.exists());
    }

    #[test]
    fn ramp_endpoints() {
        assert_eq!(ramp(0.0), (68, 1, 84));
        assert_eq!(ramp(1.0), (253, 231, 37));
    }

    #[test]
    fn write_error_surfaces() {
        let err = write_file(Path::new("/nonexistent-dir/x.svg"), "x");
        assert!(matches!(err, Err(Error::WriteError(_))));
    }
}
