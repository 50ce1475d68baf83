//! Change of variables taking the Black-Scholes equation to `u_tau = u_xx`.
//!
//! ```text
//! x = ln(S/K)            S = K e^x
//! tau = sigma^2/2 (T-t)  t = T - 2 tau / sigma^2
//! f(S, t) = K e^{alpha x + beta tau} u(x, tau)
//! ```
//!
//! with `k = 2r/sigma^2`, `alpha = (1-k)/2` and `beta = -(k+1)^2/4`.

use crate::analytic::OptionContract;
use crate::error::{ensure, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformConstants {
    pub k: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Heat-equation coordinates: log-moneyness and scaled time to expiry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatCoords {
    pub x: f64,
    pub tau: f64,
}

pub fn constants(r: f64, sigma: f64) -> Result<TransformConstants> {
    ensure(sigma.is_finite() && sigma > 0.0, || {
        format!("sigma must be > 0, got {sigma}")
    })?;
    ensure(r.is_finite(), || format!("rate must be finite, got {r}"))?;
    let k = 2.0 * r / (sigma * sigma);
    Ok(TransformConstants {
        k,
        alpha: (1.0 - k) / 2.0,
        beta: -(k + 1.0).powi(2) / 4.0,
    })
}

pub fn to_heat(s: f64, t: f64, contract: &OptionContract, sigma: f64) -> Result<HeatCoords> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("S must be > 0, got {s}")));
    }
    if t > contract.expiry || t.is_nan() {
        return Err(Error::Domain(format!("t = {t} is past expiry {}", contract.expiry)));
    }
    Ok(HeatCoords {
        x: (s / contract.strike).ln(),
        tau: 0.5 * sigma * sigma * (contract.expiry - t),
    })
}

/// Inverse of [`to_heat`]: returns `(S, t)`.
pub fn from_heat(coords: HeatCoords, contract: &OptionContract, sigma: f64) -> (f64, f64) {
    (
        contract.strike * coords.x.exp(),
        contract.expiry - 2.0 * coords.tau / (sigma * sigma),
    )
}

/// Transformed call payoff `max(e^{(k+1)x/2} - e^{(k-1)x/2}, 0)`.
pub fn initial_condition(x: f64, k: f64) -> f64 {
    initial_condition_scaled(x, k, 0.0)
}

/// [`initial_condition`] times `e^{-log_scale}`, evaluated without overflow.
pub fn initial_condition_scaled(x: f64, k: f64, log_scale: f64) -> f64 {
    ((0.5 * (k + 1.0) * x - log_scale).exp() - (0.5 * (k - 1.0) * x - log_scale).exp()).max(0.0)
}

/// Exact discounted call value at the right edge, expressed in `u`:
/// `(S_max - K e^{-r(T-t)}) / (K e^{alpha x_max + beta tau})`.
pub fn right_boundary(x_max: f64, tau: f64, contract: &OptionContract, r: f64, sigma: f64) -> Result<f64> {
    right_boundary_scaled(x_max, tau, contract, r, sigma, 0.0)
}

/// [`right_boundary`] times `e^{-log_scale}`.
pub fn right_boundary_scaled(
    x_max: f64,
    tau: f64,
    contract: &OptionContract,
    r: f64,
    sigma: f64,
    log_scale: f64,
) -> Result<f64> {
    let c = constants(r, sigma)?;
    let k = contract.strike;
    let s_max = k * x_max.exp();
    // T - t_market = 2 tau / sigma^2
    let remaining = 2.0 * tau / (sigma * sigma);
    let numerator = s_max - k * (-r * remaining).exp();
    let exponent = c.alpha * x_max + c.beta * tau + log_scale;
    if log_scale == 0.0 {
        return Ok(numerator / (k * exponent.exp()));
    }
    Ok(numerator.signum() * (numerator.abs().ln() - k.ln() - exponent).exp())
}

pub fn u_to_price(u: f64, coords: HeatCoords, contract: &OptionContract, consts: &TransformConstants) -> f64 {
    u_to_price_scaled(u, coords, contract, consts, 0.0)
}

/// Inverse of the scaling applied by the `*_scaled` helpers: `u` here is the
/// heat solution times `e^{-log_scale}`.
pub fn u_to_price_scaled(
    u: f64,
    coords: HeatCoords,
    contract: &OptionContract,
    consts: &TransformConstants,
    log_scale: f64,
) -> f64 {
    let exponent = consts.alpha * coords.x + consts.beta * coords.tau;
    if log_scale == 0.0 {
        return contract.strike * exponent.exp() * u;
    }
    if u == 0.0 {
        return 0.0;
    }
    // e^{exponent} alone can overflow where u underflows
    u.signum() * contract.strike * (u.abs().ln() + exponent + log_scale).exp()
}

pub fn price_to_u(f: f64, coords: HeatCoords, contract: &OptionContract, consts: &TransformConstants) -> f64 {
    f / (contract.strike * (consts.alpha * coords.x + consts.beta * coords.tau).exp())
}
