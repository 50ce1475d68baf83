//! The explicit scheme refuses to run once delta = dtau/dx^2 exceeds 1/2;
//! the implicit scheme runs on the same lattice.
//!
//! cargo run --release --example stability

use bs_lab::analytic::OptionContract;
use bs_lab::fdm::{build_grid, Method};
use bs_lab::pricer::{price_at, price_surface_fd, FdSettings, MarketParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let market = MarketParams::new(0.05, 0.2)?;
    let contract = OptionContract::new(100.0, 1.0)?;
    for n_time in [2000, 10, 5] {
        let grid = build_grid(&contract, market.sigma, 500.0, 1e-6, 200, n_time)?;
        print!("M = {n_time:>4}, delta = {:.4}: ", grid.delta);
        for method in [Method::Explicit, Method::Implicit] {
            let settings = FdSettings {
                n_time,
                method,
                ..Default::default()
            };
            match price_surface_fd(&market, &contract, &settings) {
                Ok(s) => print!("{method} {:.4}  ", price_at(&s, 100.0, 0.0)?),
                Err(e) => print!("{method} failed ({e})  "),
            }
        }
        println!();
    }
    Ok(())
}
