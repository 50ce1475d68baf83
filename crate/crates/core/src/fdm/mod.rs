//! Finite-difference solvers for the heat equation `u_tau = u_xx`.
//!
//! The lattice has `N + 1` nodes in `x` and `M + 1` levels in `tau`; `u[m][n]`
//! is the value at `(x_min + n dx, m dtau)`. Both schemes use the centred
//! second difference in `x`. The explicit scheme steps forward in `tau`:
//!
//! ```text
//! u[m+1][n] = (1 - 2 delta) u[m][n] + delta (u[m][n+1] + u[m][n-1])
//! ```
//!
//! and is stable for `0 < delta <= 1/2`, `delta = dtau / dx^2`. The implicit
//! scheme solves `-delta u[m+1][n+1] + (1 + 2 delta) u[m+1][n] - delta u[m+1][n-1] = u[m][n]`
//! for the `N - 1` interior unknowns at each level.

mod tridiagonal;

use std::fmt;
use std::str::FromStr;

pub use tridiagonal::{solve_tridiagonal, TridiagonalSystem};

use crate::analytic::OptionContract;
use crate::error::{ensure, Error, Result};

pub const MAX_STABLE_DELTA: f64 = 0.5;
pub const DEFAULT_S_FLOOR_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Explicit,
    Implicit,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Explicit => "explicit",
            Method::Implicit => "implicit",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(Method::Explicit),
            "implicit" => Ok(Method::Implicit),
            other => Err(Error::Validation(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Uniform `(x, tau)` lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_space: usize,
    pub tau_max: f64,
    pub n_time: usize,
    pub dx: f64,
    pub dtau: f64,
    pub delta: f64,
}

impl Grid {
    /// A lattice over `[x_min, x_max] x [0, tau_max]`. `n_time = 0` is allowed
    /// and describes the initial row alone.
    pub fn new(x_min: f64, x_max: f64, n_space: usize, tau_max: f64, n_time: usize) -> Result<Self> {
        ensure(x_min.is_finite() && x_max.is_finite() && x_min < x_max, || {
            format!("need x_min < x_max, got [{x_min}, {x_max}]")
        })?;
        ensure(n_space >= 3, || format!("n_space must be >= 3, got {n_space}"))?;
        ensure(tau_max.is_finite() && tau_max >= 0.0, || {
            format!("tau_max must be >= 0, got {tau_max}")
        })?;
        ensure(n_time == 0 || tau_max > 0.0, || {
            "tau_max must be > 0 when n_time >= 1".into()
        })?;
        let dx = (x_max - x_min) / n_space as f64;
        let dtau = if n_time == 0 { 0.0 } else { tau_max / n_time as f64 };
        Ok(Self {
            x_min,
            x_max,
            n_space,
            tau_max,
            n_time,
            dx,
            dtau,
            delta: dtau / (dx * dx),
        })
    }

    pub fn x(&self, n: usize) -> f64 {
        if n == self.n_space {
            self.x_max
        } else {
            self.x_min + n as f64 * self.dx
        }
    }

    pub fn tau(&self, m: usize) -> f64 {
        if m == self.n_time {
            self.tau_max
        } else {
            m as f64 * self.dtau
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..=self.n_space).map(|n| self.x(n)).collect()
    }

    pub fn taus(&self) -> Vec<f64> {
        (0..=self.n_time).map(|m| self.tau(m)).collect()
    }
}

/// Heat lattice for a call: `x` from `ln(s_floor_ratio)` to `ln(s_max / K)`,
/// `tau` from 0 to `sigma^2 T / 2`.
pub fn build_grid(
    contract: &OptionContract,
    sigma: f64,
    s_max: f64,
    s_floor_ratio: f64,
    n_space: usize,
    n_time: usize,
) -> Result<Grid> {
    contract.validate()?;
    ensure(sigma.is_finite() && sigma > 0.0, || {
        format!("sigma must be > 0, got {sigma}")
    })?;
    ensure(s_max.is_finite() && s_max > contract.strike, || {
        format!("s_max must exceed the strike {}, got {s_max}", contract.strike)
    })?;
    ensure(
        s_floor_ratio.is_finite() && s_floor_ratio > 0.0 && s_floor_ratio < s_max / contract.strike,
        || format!("s_floor_ratio must lie in (0, s_max/K), got {s_floor_ratio}"),
    )?;
    ensure(n_time >= 1, || format!("n_time must be >= 1, got {n_time}"))?;
    Grid::new(
        s_floor_ratio.ln(),
        (s_max / contract.strike).ln(),
        n_space,
        0.5 * sigma * sigma * contract.expiry,
        n_time,
    )
}

pub fn check_stability(delta: f64) -> Result<()> {
    if !(delta > 0.0) {
        return Err(Error::Validation(format!("mesh ratio must be > 0, got {delta}")));
    }
    if delta > MAX_STABLE_DELTA {
        return Err(Error::Stability { delta });
    }
    Ok(())
}

/// One forward step of the explicit stencil; the end nodes take the boundary values.
pub fn explicit_step(row: &[f64], delta: f64, left_bc: f64, right_bc: f64) -> Vec<f64> {
    let n = row.len();
    let mut next = Vec::with_capacity(n);
    next.push(left_bc);
    let centre = 1.0 - 2.0 * delta;
    for w in row.windows(3) {
        next.push(centre * w[1] + delta * (w[0] + w[2]));
    }
    if n > 1 {
        next.push(right_bc);
    }
    next
}

/// One step of the implicit scheme. Boundary values at the new level enter
/// the first and last right-hand-side entries.
pub fn implicit_step(row: &[f64], delta: f64, left_bc_next: f64, right_bc_next: f64) -> Result<Vec<f64>> {
    ensure(row.len() >= 3, || {
        format!("row needs at least 3 nodes, got {}", row.len())
    })?;
    let last = row.len() - 1;
    let mut rhs = row[1..last].to_vec();
    rhs[0] += delta * left_bc_next;
    let r = rhs.len() - 1;
    rhs[r] += delta * right_bc_next;

    let interior = TridiagonalSystem::heat_implicit(delta, rhs).solve()?;
    let mut next = Vec::with_capacity(row.len());
    next.push(left_bc_next);
    next.extend(interior);
    next.push(right_bc_next);
    Ok(next)
}

/// Values of `u` on a [`Grid`]; `values[m]` is the row at `tau_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatSurface {
    pub values: Vec<Vec<f64>>,
    pub grid: Grid,
}

impl HeatSurface {
    pub fn row(&self, m: usize) -> &[f64] {
        &self.values[m]
    }

    pub fn max_abs_diff(&self, other: &HeatSurface) -> f64 {
        self.values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// March the heat equation from `ic` at `tau = 0` up to `tau_max`.
pub fn solve_heat<I, L, R>(grid: &Grid, ic: I, bc_left: L, bc_right: R, method: Method) -> Result<HeatSurface>
where
    I: Fn(f64) -> f64,
    L: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    if method == Method::Explicit && grid.n_time > 0 {
        check_stability(grid.delta)?;
    }
    let mut values = Vec::with_capacity(grid.n_time + 1);
    values.push(grid.xs().into_iter().map(ic).collect::<Vec<_>>());
    for m in 1..=grid.n_time {
        let tau = grid.tau(m);
        let (left, right) = (bc_left(tau), bc_right(tau));
        let prev = &values[m - 1];
        let next = match method {
            Method::Explicit => explicit_step(prev, grid.delta, left, right),
            Method::Implicit => implicit_step(prev, grid.delta, left, right)?,
        };
        values.push(next);
    }
    Ok(HeatSurface { values, grid: *grid })
}
