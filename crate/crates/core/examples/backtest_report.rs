// Scoring the forecasters over held-out days by hourly RMSE.

use std::fs::File;
use std::path::PathBuf;

use windcast::forecast::{backtest, last_complete_days, ForecastConfig, Method};
use windcast::io::plot::emit_rmse_plot;
use windcast::io::report::{write_report_csv, write_report_json};
use windcast::synth::{diurnal_corpus, DiurnalParams};

pub fn run(out_dir: PathBuf) -> windcast::Result<()> {
    let x = diurnal_corpus(&DiurnalParams::default(), 42)?;
    let cfg = ForecastConfig::default();
    let days = last_complete_days(&x, 4, cfg.period_len);
    let report = backtest(&x, &days, &cfg, &Method::ALL)?;

    println!("hour  partitioned  simple-ar  persistence");
    let curve = |m: Method| &report.per_method[&m].per_hour_rmse;
    for h in 0..24 {
        println!(
            "{:>4}  {:>11.3}  {:>9.3}  {:>11.3}",
            h + 1,
            curve(Method::PartitionedAr)[h],
            curve(Method::SimpleAr)[h],
            curve(Method::Persistence)[h]
        );
    }
    for (m, s) in &report.per_method {
        println!("{m}: overall RMSE {:.3}", s.overall_rmse);
    }

    std::fs::create_dir_all(&out_dir)?;
    write_report_csv(&report, File::create(out_dir.join("report.csv"))?)?;
    write_report_json(&report, File::create(out_dir.join("report.json"))?)?;
    emit_rmse_plot(&report, out_dir.join("rmse.svg"))?;
    println!("wrote report.csv, report.json and rmse.svg to {}", out_dir.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> windcast::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from);
    run(dir.unwrap_or_else(|| std::env::temp_dir().join("windcast-examples")))
}
