// Choosing the AR order with AIC and FPE from a single Burg pass.

use windcast::ar::{aic, burg_error_powers, fpe, select_order, OrderCriterion};
use windcast::synth::ar_process;

pub fn run() -> windcast::Result<()> {
    let x = ar_process(&[0.5, 0.2, -0.3], 800, 1.0, 3);
    let n = x.len();
    let powers = burg_error_powers(&x, 8)?.expect("series is not constant");

    println!(" p   sigma^2      AIC         FPE");
    for (p, v) in powers.iter().enumerate().skip(1) {
        println!("{p:>2}  {v:.5}  {:>10.3}  {:.5}", aic(n, *v, p), fpe(n, *v, p));
    }
    println!("AIC picks p = {}", select_order(&x, &OrderCriterion::aic(8))?);
    println!("FPE picks p = {}", select_order(&x, &OrderCriterion::fpe(8))?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> windcast::Result<()> {
    run()
}
