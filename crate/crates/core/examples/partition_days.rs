// Rearranging a 10-minute record into a days x slots matrix.
//
// Each column holds one time of day across all days; those columns are
// the series the partitioned forecaster models.

use windcast::synth::{diurnal_corpus, DiurnalParams};
use windcast::timeseries::partition;

pub fn run() -> windcast::Result<()> {
    let x = diurnal_corpus(&DiurnalParams { days: 14, ..Default::default() }, 1)?;
    let m = partition(&x, 144)?;
    println!("{} samples -> {} days x {} slots", x.len(), m.rows(), m.cols());

    for (slot, label) in [(0, "00:00"), (36, "06:00"), (72, "12:00"), (108, "18:00")] {
        let col = m.column(slot)?;
        let mean = col.iter().sum::<f64>() / col.len() as f64;
        println!("slot {slot:>3} ({label}): mean {mean:.2} m/s over {} days", col.len());
    }

    let back = m.flatten();
    assert_eq!(back.values(), x.values());
    println!("flatten restores the original series");
    Ok(())
}

#[allow(dead_code)]
fn main() -> windcast::Result<()> {
    run()
}
