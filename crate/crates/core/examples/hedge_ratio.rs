//! Hedge ratios read off the price surface, and the value of the hedged
//! position f - delta S.
//!
//! cargo run --release --example hedge_ratio

use bs_lab::analytic::OptionContract;
use bs_lab::pricer::{hedge_ratio, portfolio_value, price_at, price_surface_fd, FdSettings, MarketParams};

fn main() -> Result<(), bs_lab::Error> {
    let market = MarketParams::new(0.05, 0.2)?;
    let contract = OptionContract::new(100.0, 1.0)?;
    let surface = price_surface_fd(&market, &contract, &FdSettings::default())?;
    println!("{:>6} {:>10} {:>8} {:>12}", "S", "f", "delta", "f - delta S");
    for s in [60.0, 80.0, 90.0, 100.0, 110.0, 120.0, 150.0, 250.0] {
        let f = price_at(&surface, s, 0.0)?;
        let d = hedge_ratio(&surface, s, 0.0)?;
        println!("{s:>6} {f:>10.4} {d:>8.4} {:>12.4}", portfolio_value(f, d, s));
    }
    Ok(())
}
