//! Recover volatilities from prices across moneyness.
//!
//! cargo run --release --example implied_vol

use bs_lab::analytic::{closed_form_call, implied_vol, OptionContract};

fn main() -> Result<(), bs_lab::Error> {
    let contract = OptionContract::new(100.0, 1.0)?;
    let r = 0.05;
    for sigma in [0.05, 0.2, 0.8, 2.0] {
        for spot in [80.0, 100.0, 120.0] {
            let price = closed_form_call(spot, 0.0, &contract, r, sigma)?;
            let back = implied_vol(price, spot, &contract, r)?;
            println!("sigma {sigma:<4} S {spot:<5} price {price:>10.5} -> {back:.10}");
        }
    }
    // no volatility produces a price under the discounted intrinsic value
    match implied_vol(1.0, 150.0, &contract, r) {
        Ok(v) => println!("unexpected {v}"),
        Err(e) => println!("price 1.0 at S=150: {e}"),
    }
    Ok(())
}
