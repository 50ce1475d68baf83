//! A numerical laboratory for European calls under Black-Scholes dynamics.
//!
//! * [`sde`]: Wiener increments and Geometric Brownian Motion ensembles.
//! * [`analytic`]: Cauchy-Euler and separable solutions, the call payoff,
//!   a quadrature pricing oracle and implied volatility.
//! * [`transform`]: the change of variables to the heat equation.
//! * [`fdm`]: explicit and implicit finite differences with a Thomas solver.
//! * [`pricer`]: price surfaces, hedge ratios and Monte Carlo prices.
//! * [`cli`]: configuration and dispatch behind the `bs-lab` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod error;
pub mod fdm;
pub mod pricer;
mod quadrature;
pub mod sde;
pub mod transform;

pub use analytic::OptionContract;
pub use error::{Error, Result};
pub use fdm::Method;
pub use pricer::{FdSettings, MarketParams};
