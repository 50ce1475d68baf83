//! Simulate GBM ensembles for a range of volatilities and compare the
//! sample mean at the horizon with `s0 e^{mu T}`.
//!
//! cargo run --release --example gbm_paths

use bs_lab::cli::default_gbm_sigmas;
use bs_lab::sde::{ensemble_stats, simulate_gbm, GbmParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (mu, s0, n_steps, dt, n_paths, seed) = (1.0, 100.0, 10, 0.1, 100_000, 1);
    let horizon = n_steps as f64 * dt;
    println!(
        "{:>6} {:>14} {:>14} {:>12}",
        "sigma", "mean S_T", "s0 e^(mu T)", "std err"
    );
    for sigma in default_gbm_sigmas() {
        let params = GbmParams::new(mu, sigma, s0)?;
        let set = simulate_gbm(&params, n_steps, dt, n_paths, seed)?;
        let stats = ensemble_stats(&set)?;
        let mean = stats.mean[n_steps];
        let se = (stats.variance[n_steps] / n_paths as f64).sqrt();
        println!(
            "{sigma:>6.2} {mean:>14.2} {:>14.2} {se:>12.2}",
            s0 * (mu * horizon).exp()
        );
    }

    // a single path, as CSV on stdout
    let set = simulate_gbm(&GbmParams::new(mu, 0.8, s0)?, 10, dt, 1, seed)?;
    set.write_csv(std::io::stdout().lock())?;
    Ok(())
}
