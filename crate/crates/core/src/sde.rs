//! Wiener increments and Geometric Brownian Motion ensembles.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`). A generator is keyed by
//! the user seed (expanded with `SeedableRng::seed_from_u64`) and a 64-bit
//! stream id selected with `set_stream`, so every path owns an independent
//! counter-based stream and results do not depend on how paths are split
//! across threads. Standard normals are drawn with the ziggurat sampler of
//! `rand_distr::StandardNormal`.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{ensure, Result};

/// Deterministic generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Parameters of `dS = mu S dt + sigma S dW`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmParams {
    pub mu: f64,
    pub sigma: f64,
    pub s0: f64,
}

impl GbmParams {
    pub fn new(mu: f64, sigma: f64, s0: f64) -> Result<Self> {
        let p = Self { mu, sigma, s0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.mu.is_finite(), || format!("drift must be finite, got {}", self.mu))?;
        ensure(self.sigma.is_finite() && self.sigma >= 0.0, || {
            format!("volatility must be >= 0, got {}", self.sigma)
        })?;
        ensure(self.s0.is_finite() && self.s0 > 0.0, || {
            format!("initial price must be > 0, got {}", self.s0)
        })
    }
}

/// An ensemble of simulated price trajectories on a shared time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    pub times: Vec<f64>,
    /// `paths[i][k]` is the price of path `i` at `times[k]`.
    pub paths: Vec<Vec<f64>>,
    pub seed: u64,
}

impl PathSet {
    pub fn n_paths(&self) -> usize {
        self.paths.len()
    }

    pub fn n_steps(&self) -> usize {
        self.times.len().saturating_sub(1)
    }

    /// CSV with header `t,path_0,...,path_{P-1}` and one row per timestamp.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut header = String::from("t");
        for i in 0..self.paths.len() {
            header.push_str(&format!(",path_{i}"));
        }
        writeln!(out, "{header}")?;
        for (k, t) in self.times.iter().enumerate() {
            let mut line = format!("{t}");
            for path in &self.paths {
                line.push_str(&format!(",{}", path[k]));
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// Columnwise ensemble moments.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub mean: Vec<f64>,
    /// Unbiased sample variance; zero for a single path.
    pub variance: Vec<f64>,
}

/// `n_steps` independent N(0, dt) draws from stream `stream` of `seed`.
pub fn sample_wiener_increments(n_steps: usize, dt: f64, seed: u64, stream: u64) -> Result<Vec<f64>> {
    ensure(n_steps > 0, || "n_steps must be positive".into())?;
    ensure(dt.is_finite() && dt > 0.0, || format!("dt must be > 0, got {dt}"))?;
    let sd = dt.sqrt();
    let mut rng = stream_rng(seed, stream);
    Ok((0..n_steps)
        .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
        .collect())
}

/// Partial sums of the increments with `W_0 = 0` prepended.
pub fn wiener_path(increments: &[f64]) -> Vec<f64> {
    let mut path = Vec::with_capacity(increments.len() + 1);
    let mut w = 0.0;
    path.push(w);
    for dw in increments {
        w += dw;
        path.push(w);
    }
    path
}

/// One GBM trajectory driven by stream `stream`, using the exact lognormal
/// update `S_{k+1} = S_k exp((mu - sigma^2/2) dt + sigma dW_k)`.
pub fn simulate_gbm_path(params: &GbmParams, n_steps: usize, dt: f64, seed: u64, stream: u64) -> Result<Vec<f64>> {
    params.validate()?;
    let increments = sample_wiener_increments(n_steps, dt, seed, stream)?;
    let drift = (params.mu - 0.5 * params.sigma * params.sigma) * dt;
    let mut path = Vec::with_capacity(n_steps + 1);
    let mut s = params.s0;
    path.push(s);
    for dw in increments {
        s *= (drift + params.sigma * dw).exp();
        path.push(s);
    }
    Ok(path)
}

/// Simulate `n_paths` GBM trajectories; path `i` uses stream `i`.
pub fn simulate_gbm(params: &GbmParams, n_steps: usize, dt: f64, n_paths: usize, seed: u64) -> Result<PathSet> {
    params.validate()?;
    ensure(n_paths > 0, || "n_paths must be positive".into())?;
    ensure(n_steps > 0, || "n_steps must be positive".into())?;
    ensure(dt.is_finite() && dt > 0.0, || format!("dt must be > 0, got {dt}"))?;

    let paths = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| simulate_gbm_path(params, n_steps, dt, seed, i))
        .collect::<Result<Vec<_>>>()?;
    let times = (0..=n_steps).map(|k| k as f64 * dt).collect();
    Ok(PathSet { times, paths, seed })
}

pub fn ensemble_stats(paths: &PathSet) -> Result<EnsembleStats> {
    ensure(!paths.paths.is_empty() && !paths.times.is_empty(), || {
        "empty path set".into()
    })?;
    let n = paths.paths.len() as f64;
    let cols = paths.times.len();
    let mut mean = vec![0.0; cols];
    let mut variance = vec![0.0; cols];
    for k in 0..cols {
        let m = paths.paths.iter().map(|p| p[k]).sum::<f64>() / n;
        mean[k] = m;
        if paths.paths.len() > 1 {
            let ss: f64 = paths.paths.iter().map(|p| (p[k] - m).powi(2)).sum();
            variance[k] = ss / (n - 1.0);
        }
    }
    Ok(EnsembleStats { mean, variance })
}
