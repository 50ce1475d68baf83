//! Grid refinement on u = e^{-pi^2 tau} sin(pi x) with zero boundaries.
//!
//! cargo run --release --example heat_convergence

use std::f64::consts::PI;

use bs_lab::fdm::{solve_heat, Grid, Method};

fn max_error(n_space: usize, n_time: usize, method: Method) -> Result<f64, bs_lab::Error> {
    let tau_max = 0.1;
    let exact = |x: f64, tau: f64| (-PI * PI * tau).exp() * (PI * x).sin();
    let grid = Grid::new(0.0, 1.0, n_space, tau_max, n_time)?;
    let s = solve_heat(&grid, |x| exact(x, 0.0), |_| 0.0, |_| 0.0, method)?;
    Ok(grid
        .xs()
        .iter()
        .zip(s.row(n_time))
        .map(|(&x, &u)| (u - exact(x, tau_max)).abs())
        .fold(0.0, f64::max))
}

fn main() -> Result<(), bs_lab::Error> {
    // delta fixed at 0.4, so dtau shrinks with dx^2 and the error falls like dx^2
    println!(
        "{:>4} {:>6} {:>12} {:>12} {:>7}",
        "N", "M", "explicit", "implicit", "ratio"
    );
    let mut prev: Option<f64> = None;
    for n in [10, 20, 40, 80] {
        let m = (n * n) / 4;
        let e = max_error(n, m, Method::Explicit)?;
        let i = max_error(n, m, Method::Implicit)?;
        let ratio = prev.map_or(String::from("-"), |p| format!("{:.2}", p / e));
        println!("{n:>4} {m:>6} {e:>12.3e} {i:>12.3e} {ratio:>7}");
        prev = Some(e);
    }
    Ok(())
}
