// Burg estimation of an AR(2) model and its stability guarantees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use windcast::ar::{fit_burg, is_stable, predict_multi};

pub fn run() -> windcast::Result<()> {
    let truth = [0.75, -0.5];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let noise = Normal::new(0.0, 1.0).unwrap();
    let mut x = vec![0.0; 5000];
    for t in 2..x.len() {
        x[t] = truth[0] * x[t - 1] + truth[1] * x[t - 2] + noise.sample(&mut rng);
    }
    let x: Vec<f64> = x.iter().map(|v| v + 10.0).collect();

    let model = fit_burg(&x, 2)?;
    println!("true coefficients   {truth:?}");
    println!("fitted coefficients {:.4?}", model.coefficients());
    println!("reflection          {:.4?}", model.reflection().unwrap_or(&[]));
    println!("mean {:.3}, noise variance {:.3}", model.mean(), model.noise_variance());
    println!("stable: {}", is_stable(&model));

    let history: Vec<f64> = x.iter().rev().take(2).copied().collect();
    let path = predict_multi(&model, &history, 30)?;
    println!(
        "multi-step forecast settles on the mean: step 1 {:.3}, step 30 {:.3}",
        path[0], path[29]
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> windcast::Result<()> {
    run()
}
