// Finding the daily cycle with a Morlet wavelet power spectrum.
//
// Writes `spectrum.svg` into the directory given as the first argument
// (default: the system temp directory).

use std::path::PathBuf;

use windcast::io::plot::emit_spectrum_plot;
use windcast::synth::{diurnal_corpus, white_noise, DiurnalParams};
use windcast::wavelet::{cwt, detect_peak, power_spectrum, CwtGrid, MorletWavelet};

pub fn run(out_dir: PathBuf) -> windcast::Result<()> {
    let w = MorletWavelet::default();
    let x = diurnal_corpus(&DiurnalParams { days: 30, ..Default::default() }, 42)?;
    let grid = CwtGrid::for_sampling(x.dt(), &w);
    println!(
        "{} scales from {:.0} s, periods up to {:.1} days",
        grid.num_scales,
        grid.s0,
        grid.scales().last().unwrap() * w.fourier_factor() / 86_400.0
    );

    let p = power_spectrum(&cwt(&x, &w, &grid)?);
    let peak = detect_peak(&p, 2.0)?;
    println!(
        "dominant period: {} samples ({:.2} h), {:.1}x the median global power",
        peak.period_samples,
        peak.period_seconds / 3600.0,
        peak.power / peak.median
    );
    std::fs::create_dir_all(&out_dir)?;
    let path = out_dir.join("spectrum.svg");
    emit_spectrum_plot(&p, &path)?;
    println!("wrote {}", path.display());

    let noise = white_noise(x.len(), 6.0, 1.0, 600, 1)?;
    let q = power_spectrum(&cwt(&noise, &w, &grid)?);
    match detect_peak(&q, 2.0) {
        Ok(peak) => println!("white noise: unexpected peak at {} samples", peak.period_samples),
        Err(e) => println!("white noise: {e}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> windcast::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from);
    run(dir.unwrap_or_else(|| std::env::temp_dir().join("windcast-examples")))
}
