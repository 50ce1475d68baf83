//! Price a European call on the default lattice with both schemes and
//! compare a few nodes with the closed form.
//!
//! cargo run --release --example price_surface [out.csv]

use std::fs::File;
use std::io::BufWriter;

use bs_lab::analytic::{closed_form_call, OptionContract};
use bs_lab::fdm::Method;
use bs_lab::pricer::{price_at, price_surface_fd, FdSettings, MarketParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let market = MarketParams::new(0.05, 0.2)?;
    let contract = OptionContract::new(100.0, 1.0)?;

    let explicit = price_surface_fd(
        &market,
        &contract,
        &FdSettings {
            method: Method::Explicit,
            ..Default::default()
        },
    )?;
    let implicit = price_surface_fd(&market, &contract, &FdSettings::default())?;
    println!("max |explicit - implicit| = {:.2e}", explicit.max_abs_diff(&implicit));

    println!("{:>6} {:>5} {:>12} {:>12}", "S", "t", "implicit", "closed form");
    for (s, t) in [(80.0, 0.0), (100.0, 0.0), (120.0, 0.0), (100.0, 0.5), (150.0, 0.9)] {
        let fd = price_at(&implicit, s, t)?;
        let exact = closed_form_call(s, t, &contract, market.r, market.sigma)?;
        println!("{s:>6} {t:>5} {fd:>12.5} {exact:>12.5}");
    }

    if let Some(path) = std::env::args().nth(1) {
        implicit.write_csv(BufWriter::new(File::create(&path)?))?;
        println!("wrote {path}");
    }
    Ok(())
}
