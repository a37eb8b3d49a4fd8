// One day ahead with the partitioned AR model, a single AR model on the
// raw series, and persistence.

use std::path::PathBuf;

use windcast::forecast::{forecast_day, last_complete_days, ForecastConfig, Method};
use windcast::io::plot::emit_forecast_plot;
use windcast::synth::{diurnal_corpus, DiurnalParams};

pub fn run(out_dir: PathBuf) -> windcast::Result<()> {
    let x = diurnal_corpus(&DiurnalParams { days: 60, ..Default::default() }, 5)?;
    let cfg = ForecastConfig::default();
    let day = last_complete_days(&x, 1, cfg.period_len)[0];
    let start = x.index_of(day).expect("day is inside the record");
    let actual = &x.values()[start..start + cfg.period_len];

    let forecasts = forecast_day(&x, day, &cfg, &Method::ALL)?;
    let orders = forecasts[&Method::PartitionedAr].per_slot_order.as_ref().unwrap();
    println!(
        "per-slot AR orders range from {} to {}",
        orders.iter().min().unwrap(),
        orders.iter().max().unwrap()
    );

    println!("hour   actual  partitioned  simple-ar  persistence");
    for h in (0..24).step_by(3) {
        let slot = h * 6;
        println!(
            "{h:02}:00  {:>6.2}  {:>11.2}  {:>9.2}  {:>11.2}",
            actual[slot],
            forecasts[&Method::PartitionedAr].values[slot],
            forecasts[&Method::SimpleAr].values[slot],
            forecasts[&Method::Persistence].values[slot],
        );
    }
    std::fs::create_dir_all(&out_dir)?;
    let path = out_dir.join("forecast.svg");
    emit_forecast_plot(actual, &forecasts, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> windcast::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from);
    run(dir.unwrap_or_else(|| std::env::temp_dir().join("windcast-examples")))
}
