//! Power-law solutions of the Cauchy-Euler equation and the separable
//! family of the Black-Scholes equation, checked by finite differences.
//!
//! cargo run --release --example separable_solutions

use bs_lab::analytic::{
    cauchy_euler_roots, separation_exponents, CauchyEulerCoeffs, PowerSolution, SeparationSolution,
};

fn main() -> Result<(), bs_lab::Error> {
    let coeffs = CauchyEulerCoeffs { a: 0.0, b: -2.0 };
    let (m1, m2) = cauchy_euler_roots(coeffs)?;
    println!("x^2 y'' - 2y = 0: exponents {m1}, {m2}");
    let y = PowerSolution::from_coeffs(coeffs, 1.0, 1.0)?;
    let h = 1e-4;
    for x in [0.5, 1.0, 2.0, 4.0] {
        let ypp = (y.eval(x + h)? - 2.0 * y.eval(x)? + y.eval(x - h)?) / (h * h);
        println!(
            "  x = {x}: y = {:.6}, residual {:.1e}",
            y.eval(x)?,
            x * x * ypp - 2.0 * y.eval(x)?
        );
    }

    let (r, sigma, c) = (0.05, 0.2, 0.1);
    let (m1, m2) = separation_exponents(r, sigma, c)?;
    println!("separable family r={r} sigma={sigma} c={c}: exponents {m1:.6}, {m2:.6}");
    let f = SeparationSolution {
        alpha: 2.0,
        beta: 1.0,
        gamma: 0.5,
        c,
        r,
        sigma,
    };
    for (s, t) in [(50.0, 0.0), (100.0, 0.5), (150.0, 0.9)] {
        let hs = 1e-3 * s;
        let fs = (f.eval(s + hs, t)? - f.eval(s - hs, t)?) / (2.0 * hs);
        let fss = (f.eval(s + hs, t)? - 2.0 * f.eval(s, t)? + f.eval(s - hs, t)?) / (hs * hs);
        let ft = (f.eval(s, t + 1e-5)? - f.eval(s, t - 1e-5)?) / 2e-5;
        let pde = ft + 0.5 * sigma * sigma * s * s * fss + r * s * fs - r * f.eval(s, t)?;
        println!("  f({s}, {t}) = {:.4}, PDE residual {pde:.1e}", f.eval(s, t)?);
    }
    Ok(())
}
