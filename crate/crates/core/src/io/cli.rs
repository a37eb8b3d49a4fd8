//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error.
//! Diagnostics go to the error stream; results go to files or, for
//! `detect-period` and `synth` without `--out`, the output stream.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::ar::OrderCriterion;
use crate::error::{Error, Result};
use crate::forecast::{backtest, forecast_day, last_complete_days, Method};
use crate::io::config::{RunConfig, CONFIG_ENV};
use crate::io::ingest::{format_day, load_csv, parse_day, write_csv, ColumnRef, TimestampFormat};
use crate::io::plot::{emit_forecast_plot, emit_rmse_plot, emit_spectrum_plot};
use crate::io::report::{format_sig6, write_forecast_csv, write_report_csv, write_report_json};
use crate::synth::{diurnal_corpus, DiurnalParams};
use crate::timeseries::{next_midnight, GapMode, TimeSeries};
use crate::wavelet::{cwt, detect_peak, power_spectrum};

#[derive(Parser, Debug)]
#[command(
    name = "windcast",
    version,
    about = "Day-ahead wind-speed forecasting with diurnally partitioned AR models"
)]
struct Cli {
    /// TOML run configuration (default: $WINDCAST_CONFIG).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a seeded synthetic diurnal wind record.
    Synth(SynthArgs),
    /// Print the dominant period of a record, in samples.
    DetectPeriod(DetectArgs),
    /// Forecast one day with every configured method.
    Forecast(ForecastArgs),
    /// Score the methods over several held-out days.
    Backtest(BacktestArgs),
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 120)]
    days: usize,
    /// First day, YYYY-MM-DD (UTC).
    #[arg(long)]
    start: Option<String>,
    #[arg(long)]
    dt: Option<i64>,
    #[arg(long)]
    mean: Option<f64>,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    ar_coef: Option<f64>,
    #[arg(long)]
    noise_sd: Option<f64>,
    /// Output CSV (default: standard output).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct InputArgs {
    /// Input CSV.
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long)]
    timestamp_column: Option<String>,
    #[arg(long)]
    value_column: Option<String>,
    #[arg(long)]
    quality_column: Option<String>,
    /// epoch-seconds, iso-8601, or a strftime pattern.
    #[arg(long)]
    timestamp_format: Option<String>,
    #[arg(long)]
    delimiter: Option<char>,
    #[arg(long)]
    no_header: bool,
    /// Sampling interval in seconds.
    #[arg(long)]
    dt: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    utc_offset_minutes: Option<i32>,
    /// linear-interpolate or drop-day.
    #[arg(long)]
    gap_mode: Option<String>,
    /// Longest run of missing samples that is interpolated.
    #[arg(long)]
    max_gap: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct ModelArgs {
    /// Comma-separated: partitioned-ar, simple-ar, persistence.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    period_len: Option<usize>,
    /// aic, fpe, or a fixed order.
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    max_order: Option<usize>,
    #[arg(long)]
    training_days: Option<usize>,
    #[arg(long)]
    simple_ar_samples: Option<usize>,
    #[arg(long, short = 'o')]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    no_plot: bool,
}

#[derive(Args, Debug)]
struct DetectArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    omega0: Option<f64>,
    #[arg(long)]
    dj: Option<f64>,
    #[arg(long)]
    num_scales: Option<usize>,
    #[arg(long)]
    peak_factor: Option<f64>,
    /// Also write the power spectrum plot here.
    #[arg(long, value_name = "SVG")]
    plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ForecastArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Target day, YYYY-MM-DD local (default: the day after the record).
    #[arg(long)]
    day: Option<String>,
}

#[derive(Args, Debug)]
struct BacktestArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated target days, YYYY-MM-DD local.
    #[arg(long, conflicts_with = "last")]
    days: Option<String>,
    /// Use the last N complete days of the record.
    #[arg(long)]
    last: Option<usize>,
}

/// Errors that mean the invocation itself was wrong.
fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_) | Error::InvalidParameter(_) | Error::UnknownMethod(_) | Error::InvalidPeriod(_)
    )
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render().ansi());
                    1
                }
            };
            return code;
        }
    };
    match run(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if is_usage_error(&e) { 1 } else { 2 }
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    let env = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    match path.map(Path::to_path_buf).or(env) {
        Some(p) => RunConfig::load(&p).map_err(|e| match e {
            Error::Config(_) => e,
            other => Error::Config(format!("{}: {other}", p.display())),
        }),
        None => Ok(RunConfig::default()),
    }
}

fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let mut cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Synth(a) => synth(a, &cfg, stdout, stderr),
        Command::DetectPeriod(a) => {
            a.input.apply(&mut cfg)?;
            set(&mut cfg.wavelet.omega0, a.omega0);
            set(&mut cfg.wavelet.dj, a.dj);
            if a.num_scales.is_some() {
                cfg.wavelet.num_scales = a.num_scales;
            }
            set(&mut cfg.wavelet.peak_factor, a.peak_factor);
            cfg.validate()?;
            detect(&cfg, a.plot.as_deref(), stdout)
        }
        Command::Forecast(a) => {
            a.input.apply(&mut cfg)?;
            let methods = a.model.apply(&mut cfg)?;
            cfg.validate()?;
            forecast(&cfg, &methods, a.day.as_deref(), stderr)
        }
        Command::Backtest(a) => {
            a.input.apply(&mut cfg)?;
            let methods = a.model.apply(&mut cfg)?;
            cfg.validate()?;
            run_backtest(&cfg, &methods, a.days.as_deref(), a.last, stdout)
        }
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl InputArgs {
    fn apply(&self, cfg: &mut RunConfig) -> Result<()> {
        if let Some(p) = &self.input {
            cfg.input = Some(p.clone());
        }
        let s = &mut cfg.schema;
        if let Some(c) = &self.timestamp_column {
            s.timestamp_column = c.parse().expect("infallible");
        }
        if let Some(c) = &self.value_column {
            s.value_column = c.parse().expect("infallible");
        }
        if let Some(c) = &self.quality_column {
            s.quality_column = Some(c.parse::<ColumnRef>().expect("infallible"));
        }
        if let Some(f) = &self.timestamp_format {
            s.timestamp_format = f.parse::<TimestampFormat>()?;
        }
        set(&mut s.delimiter, self.delimiter);
        if self.no_header {
            s.has_header = false;
        }
        set(&mut s.dt, self.dt);
        set(&mut s.utc_offset_minutes, self.utc_offset_minutes);
        if let Some(m) = &self.gap_mode {
            cfg.gaps.mode = match m.as_str() {
                "linear-interpolate" | "linear" => GapMode::LinearInterpolate,
                "drop-day" => GapMode::DropDay,
                other => return Err(Error::Config(format!("unknown gap mode '{other}'"))),
            };
        }
        set(&mut cfg.gaps.max_run, self.max_gap);
        Ok(())
    }
}

impl ModelArgs {
    fn apply(&self, cfg: &mut RunConfig) -> Result<Vec<Method>> {
        let f = &mut cfg.forecast;
        set(&mut f.period_len, self.period_len);
        let max_order = self.max_order.unwrap_or(f.order_criterion.max_order());
        f.order_criterion = match self.order.as_deref() {
            None => match self.max_order {
                None => f.order_criterion,
                Some(_) => f.order_criterion.with_max_order(max_order),
            },
            Some("aic") => OrderCriterion::aic(max_order),
            Some("fpe") => OrderCriterion::fpe(max_order),
            Some(n) => match n.parse::<usize>() {
                Ok(p) => OrderCriterion::fixed(p).with_max_order(max_order),
                Err(_) => return Err(Error::Config(format!("unknown order '{n}'"))),
            },
        };
        if self.training_days.is_some() {
            f.training_days = self.training_days;
        }
        set(&mut f.simple_ar_training_samples, self.simple_ar_samples);
        if let Some(d) = &self.out_dir {
            cfg.output_dir = d.clone();
        }
        if self.no_plot {
            cfg.plots.forecast = false;
            cfg.plots.spectrum = false;
            cfg.plots.rmse = false;
        }
        match &self.methods {
            Some(list) => Method::parse_list(list),
            None => Ok(Method::ALL.to_vec()),
        }
    }
}

fn synth(a: SynthArgs, cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let mut params = DiurnalParams {
        days: a.days,
        ..Default::default()
    };
    params.dt = a.dt.unwrap_or(cfg.schema.dt);
    if params.dt <= 0 || crate::timeseries::SECONDS_PER_DAY % params.dt != 0 {
        return Err(Error::Config(format!("dt {} does not divide a day", params.dt)));
    }
    params.period_len = (crate::timeseries::SECONDS_PER_DAY / params.dt) as usize;
    if let Some(s) = &a.start {
        params.origin = parse_day(s, 0)?;
    }
    set(&mut params.mean, a.mean);
    set(&mut params.amplitude, a.amplitude);
    set(&mut params.ar_coef, a.ar_coef);
    set(&mut params.noise_sd, a.noise_sd);
    let series = diurnal_corpus(&params, a.seed)?;
    match a.out {
        Some(path) => {
            write_csv(&series, BufWriter::new(create(&path)?))?;
            let _ = writeln!(stderr, "wrote {} samples to {}", series.len(), path.display());
        }
        None => write_csv(&series, &mut *stdout)?,
    }
    Ok(())
}

fn create(path: &Path) -> Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::WriteError(format!("{}: {e}", dir.display())))?;
    }
    File::create(path).map_err(|e| Error::WriteError(format!("{}: {e}", path.display())))
}

fn load_input(cfg: &RunConfig) -> Result<TimeSeries> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| Error::Config("no input file given (use --input or the config file)".into()))?;
    load_csv(path, &cfg.schema, &cfg.gap_policy())
}

fn detect(cfg: &RunConfig, plot: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    let x = load_input(cfg)?;
    let w = cfg.wavelet.wavelet()?;
    let grid = cfg.wavelet.grid(x.dt())?;
    let p = power_spectrum(&cwt(&x, &w, &grid)?);
    if let Some(path) = plot {
        emit_spectrum_plot(&p, path)?;
    }
    let peak = detect_peak(&p, cfg.wavelet.peak_factor)?;
    writeln!(stdout, "{}", peak.period_samples)?;
    Ok(())
}

fn forecast(cfg: &RunConfig, methods: &[Method], day: Option<&str>, stderr: &mut dyn Write) -> Result<()> {
    let x = load_input(cfg)?;
    let offset = x.utc_offset_minutes();
    let day = match day {
        Some(d) => parse_day(d, offset)?,
        None => next_midnight(x.timestamp(x.len() - 1) + x.dt(), offset),
    };
    let forecasts = forecast_day(&x, day, &cfg.forecast, methods)?;
    let p = cfg.forecast.period_len;
    let actual = x.index_of(day).and_then(|i| {
        (i + p <= x.len() && x.timestamp(i + p - 1) == day + (p as i64 - 1) * x.dt())
            .then(|| x.values()[i..i + p].to_vec())
    });

    let dir = &cfg.output_dir;
    let date = format_day(day, offset);
    let csv_path = dir.join(format!("forecast-{date}.csv"));
    write_forecast_csv(
        &forecasts,
        actual.as_deref(),
        x.dt(),
        offset,
        BufWriter::new(create(&csv_path)?),
    )?;
    let _ = writeln!(stderr, "wrote {}", csv_path.display());
    if cfg.plots.forecast {
        match &actual {
            Some(a) => {
                let svg = dir.join(format!("forecast-{date}.svg"));
                emit_forecast_plot(a, &forecasts, &svg)?;
                let _ = writeln!(stderr, "wrote {}", svg.display());
            }
            None => {
                let _ = writeln!(stderr, "no observations for {date}; forecast plot skipped");
            }
        }
    }
    Ok(())
}

fn run_backtest(
    cfg: &RunConfig,
    methods: &[Method],
    days: Option<&str>,
    last: Option<usize>,
    stdout: &mut dyn Write,
) -> Result<()> {
    let x = load_input(cfg)?;
    let offset = x.utc_offset_minutes();
    let targets = match (days, last) {
        (Some(list), _) => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|d| parse_day(d, offset))
            .collect::<Result<Vec<_>>>()?,
        (None, Some(n)) => last_complete_days(&x, n, cfg.forecast.period_len),
        (None, None) => return Err(Error::Config("backtest needs --days or --last".into())),
    };
    let report = backtest(&x, &targets, &cfg.forecast, methods)?;

    let dir = &cfg.output_dir;
    write_report_csv(&report, BufWriter::new(create(&dir.join("report.csv"))?))?;
    write_report_json(&report, BufWriter::new(create(&dir.join("report.json"))?))?;
    if cfg.plots.rmse {
        emit_rmse_plot(&report, dir.join("rmse.svg"))?;
    }
    writeln!(stdout, "method,overall_rmse")?;
    for (m, s) in &report.per_method {
        writeln!(stdout, "{m},{}", format_sig6(s.overall_rmse))?;
    }
    Ok(())
}
