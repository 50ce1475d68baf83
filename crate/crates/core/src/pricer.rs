//! Black-Scholes call prices from the heat-equation solvers and from
//! risk-neutral Monte Carlo.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::analytic::{payoff_call, OptionContract};
use crate::error::{ensure, Error, Result};
use crate::fdm::{build_grid, solve_heat, Method, DEFAULT_S_FLOOR_RATIO};
use crate::sde::{simulate_gbm_path, GbmParams};
use crate::transform::{constants, initial_condition_scaled, right_boundary_scaled, u_to_price_scaled, HeatCoords};

/// Largest `ln u` kept on the lattice before the solve is rescaled.
const MAX_LOG_U: f64 = 600.0;

/// Constant risk-free rate and volatility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub r: f64,
    pub sigma: f64,
}

impl MarketParams {
    pub fn new(r: f64, sigma: f64) -> Result<Self> {
        let m = Self { r, sigma };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.r.is_finite(), || format!("rate must be finite, got {}", self.r))?;
        ensure(self.sigma.is_finite() && self.sigma > 0.0, || {
            format!("sigma must be > 0, got {}", self.sigma)
        })
    }
}

/// Discretisation of the heat-equation solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSettings {
    pub s_max: f64,
    /// Left edge of the lattice as a fraction of the strike.
    pub s_floor_ratio: f64,
    pub n_space: usize,
    pub n_time: usize,
    pub method: Method,
}

impl Default for FdSettings {
    fn default() -> Self {
        Self {
            s_max: 500.0,
            s_floor_ratio: DEFAULT_S_FLOOR_RATIO,
            n_space: 200,
            n_time: 2000,
            method: Method::Implicit,
        }
    }
}

impl FdSettings {
    /// Lower `s_floor_ratio` just enough for the strike to fall on a grid
    /// node, so the payoff kink is represented exactly at expiry.
    pub fn with_strike_node(mut self, strike: f64) -> Self {
        let x_max = (self.s_max / strike).ln();
        let x_min = self.s_floor_ratio.ln();
        if !(x_max > 0.0 && x_min < 0.0 && self.n_space >= 2) {
            return self;
        }
        let n = self.n_space as f64;
        let left = (n * -x_min / (x_max - x_min)).ceil().min(n - 1.0);
        self.s_floor_ratio = (-x_max * left / (n - left)).exp();
        self
    }
}

/// Option values `f[i][j] = f(s_values[j], t_values[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSurface {
    pub s_values: Vec<f64>,
    pub t_values: Vec<f64>,
    pub f: Vec<Vec<f64>>,
    pub market: MarketParams,
    pub contract: OptionContract,
}

impl PriceSurface {
    /// Slice at the last time node (`t = T`).
    pub fn terminal_row(&self) -> &[f64] {
        self.f.last().expect("surface has at least one row")
    }

    pub fn max_abs_diff(&self, other: &PriceSurface) -> f64 {
        self.f
            .iter()
            .flatten()
            .zip(other.f.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with first cell `t\S`, the S grid across the header, then one row per time.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut line = String::from("t\\S");
        for s in &self.s_values {
            line.push_str(&format!(",{s}"));
        }
        writeln!(out, "{line}")?;
        for (t, row) in self.t_values.iter().zip(&self.f) {
            line = format!("{t}");
            for v in row {
                line.push_str(&format!(",{v}"));
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// Solve the transformed problem and map it back to `(S, t, f)`.
pub fn price_surface_fd(
    market: &MarketParams,
    contract: &OptionContract,
    settings: &FdSettings,
) -> Result<PriceSurface> {
    market.validate()?;
    contract.validate()?;
    let MarketParams { r, sigma } = *market;
    let consts = constants(r, sigma)?;
    let grid = build_grid(
        contract,
        sigma,
        settings.s_max,
        settings.s_floor_ratio,
        settings.n_space,
        settings.n_time,
    )?;

    // For large k = 2r/sigma^2 the heat solution grows like
    // e^{(k+1)x/2 + (k+1)^2 tau/4} and would overflow; the problem is linear,
    // so solve for u e^{-shift} instead.
    let log_u_max = 0.5 * (consts.k + 1.0) * grid.x_max - consts.beta * grid.tau_max;
    let shift = (log_u_max - MAX_LOG_U).max(0.0);

    let heat = solve_heat(
        &grid,
        |x| initial_condition_scaled(x, consts.k, shift),
        |_| 0.0,
        // right_boundary only fails on sigma <= 0, ruled out above
        |tau| right_boundary_scaled(grid.x_max, tau, contract, r, sigma, shift).unwrap_or(f64::NAN),
        settings.method,
    )?;

    let xs = grid.xs();
    let taus = grid.taus();
    let s_values = xs.iter().map(|x| contract.strike * x.exp()).collect();
    let m_total = grid.n_time;
    // rows run from tau = tau_max (t = 0) down to tau = 0 (t = T)
    let mut t_values = Vec::with_capacity(m_total + 1);
    let mut f = Vec::with_capacity(m_total + 1);
    for m in (0..=m_total).rev() {
        t_values.push(contract.expiry * (m_total - m) as f64 / m_total as f64);
        let tau = taus[m];
        f.push(
            heat.values[m]
                .iter()
                .zip(&xs)
                .map(|(&u, &x)| u_to_price_scaled(u, HeatCoords { x, tau }, contract, &consts, shift))
                .collect(),
        );
    }
    Ok(PriceSurface {
        s_values,
        t_values,
        f,
        market: *market,
        contract: *contract,
    })
}

/// Index `i` with `v[i] <= q <= v[i+1]`, for ascending `v`.
fn bracket(v: &[f64], q: f64) -> Option<usize> {
    if v.len() < 2 || !(q >= v[0] && q <= v[v.len() - 1]) {
        return None;
    }
    let i = v.partition_point(|&a| a <= q);
    Some(i.saturating_sub(1).min(v.len() - 2))
}

/// Bilinear interpolation in `(S, t)`.
pub fn price_at(surface: &PriceSurface, s: f64, t: f64) -> Result<f64> {
    let (sv, tv) = (&surface.s_values, &surface.t_values);
    let j = bracket(sv, s).ok_or_else(|| Error::Range(format!("S = {s} outside [{}, {}]", sv[0], sv[sv.len() - 1])))?;
    let i = bracket(tv, t).ok_or_else(|| Error::Range(format!("t = {t} outside [{}, {}]", tv[0], tv[tv.len() - 1])))?;
    let ws = (s - sv[j]) / (sv[j + 1] - sv[j]);
    let wt = (t - tv[i]) / (tv[i + 1] - tv[i]);
    let f = &surface.f;
    let lower = (1.0 - ws) * f[i][j] + ws * f[i][j + 1];
    let upper = (1.0 - ws) * f[i + 1][j] + ws * f[i + 1][j + 1];
    Ok((1.0 - wt) * lower + wt * upper)
}

/// `df/dS` by a central difference whose step is the width of the grid
/// interval containing `S`.
pub fn hedge_ratio(surface: &PriceSurface, s: f64, t: f64) -> Result<f64> {
    let sv = &surface.s_values;
    let j = bracket(sv, s).ok_or_else(|| Error::Range(format!("S = {s} outside the surface")))?;
    let h = sv[j + 1] - sv[j];
    if s - h < sv[0] || s + h > sv[sv.len() - 1] {
        return Err(Error::Range(format!(
            "S = {s} too close to the edge for a central difference"
        )));
    }
    let up = price_at(surface, s + h, t)?;
    let down = price_at(surface, s - h, t)?;
    Ok((up - down) / (2.0 * h))
}

/// Value of the hedged position `f - delta S`.
pub fn portfolio_value(f: f64, delta: f64, s: f64) -> f64 {
    f - delta * s
}

/// Monte Carlo price with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub price: f64,
    pub std_err: f64,
    pub n_paths: usize,
}

pub const MIN_MC_PATHS: usize = 100;

/// Discounted mean payoff over `n_paths` exact lognormal draws of `S_T`
/// under drift `r`. Path `i` uses random stream `i` of `seed`.
pub fn price_mc(
    market: &MarketParams,
    contract: &OptionContract,
    spot: f64,
    n_paths: usize,
    seed: u64,
) -> Result<McEstimate> {
    market.validate()?;
    contract.validate()?;
    ensure(n_paths >= MIN_MC_PATHS, || {
        format!("n_paths must be >= {MIN_MC_PATHS}, got {n_paths}")
    })?;
    let params = GbmParams::new(market.r, market.sigma, spot)?;
    let expiry = contract.expiry;

    let payoffs = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let path = simulate_gbm_path(&params, 1, expiry, seed, i)?;
            Ok(payoff_call(path[1], contract.strike))
        })
        .collect::<Result<Vec<f64>>>()?;

    let n = n_paths as f64;
    let mean = payoffs.iter().sum::<f64>() / n;
    let var = payoffs.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let discount = (-market.r * expiry).exp();
    Ok(McEstimate {
        price: discount * mean,
        std_err: discount * (var / n).sqrt(),
        n_paths,
    })
}
