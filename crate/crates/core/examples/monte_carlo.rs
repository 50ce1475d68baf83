//! Risk-neutral Monte Carlo against the closed form, with the standard
//! error shrinking like 1/sqrt(n).
//!
//! cargo run --release --example monte_carlo

use bs_lab::analytic::{closed_form_call, OptionContract};
use bs_lab::pricer::{price_mc, MarketParams};

fn main() -> Result<(), bs_lab::Error> {
    let market = MarketParams::new(0.05, 0.2)?;
    let contract = OptionContract::new(100.0, 1.0)?;
    let exact = closed_form_call(100.0, 0.0, &contract, market.r, market.sigma)?;
    println!("closed form {exact:.5}");
    for n in [1_000, 10_000, 100_000, 1_000_000] {
        let est = price_mc(&market, &contract, 100.0, n, 42)?;
        let z = (est.price - exact) / est.std_err;
        println!("{n:>9} paths: {:.5} +/- {:.5} (z = {z:+.2})", est.price, est.std_err);
    }
    Ok(())
}
