//! Command-line front end: configuration merging, dispatch and CSV output.
//!
//! Values are resolved as command-line flags, then the config file, then the
//! built-in defaults. The config file is flat `key=value` text with `#`
//! comments; keys are the long flag names (`n-space` and `n_space` are both
//! accepted). Its path comes from `--config`, or else from `BS_LAB_CONFIG`.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::analytic::{closed_form_call, implied_vol, OptionContract};
use crate::error::Error;
use crate::fdm::{Method, DEFAULT_S_FLOOR_RATIO};
use crate::pricer::{price_at, price_mc, price_surface_fd, FdSettings, MarketParams};
use crate::sde::{simulate_gbm, GbmParams};

pub const CONFIG_ENV: &str = "BS_LAB_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Simulate GBM ensembles, one CSV per volatility.
    Gbm,
    /// Write the finite-difference price surface.
    Surface,
    /// Print a single option price.
    Price,
    /// Invert a price to a volatility.
    ImpliedVol,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriceMethod {
    Fd(Method),
    MonteCarlo,
    ClosedForm,
}

impl std::str::FromStr for PriceMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "explicit" => Ok(PriceMethod::Fd(Method::Explicit)),
            "implicit" => Ok(PriceMethod::Fd(Method::Implicit)),
            "mc" => Ok(PriceMethod::MonteCarlo),
            "closed-form" => Ok(PriceMethod::ClosedForm),
            other => Err(format!("unknown method {other:?} (explicit|implicit|mc|closed-form)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Numerics {
    pub s_max: f64,
    pub s_floor_ratio: f64,
    pub n_space: usize,
    pub n_time: usize,
    pub method: PriceMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub mu: f64,
    pub sigmas: Vec<f64>,
    pub s0: f64,
    pub n_steps: usize,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
}

/// Point at which `price` and `implied-vol` evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub spot: f64,
    pub time: f64,
    pub target_price: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub market: MarketParams,
    pub contract: OptionContract,
    pub numerics: Numerics,
    pub sim: SimConfig,
    pub query: Query,
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    /// `--help` / `--version` text; not a failure.
    Help(String),
    Usage(String),
    Run(Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) => 2,
            CliError::Run(Error::Stability { .. }) => 3,
            CliError::Run(Error::Convergence { .. }) => 5,
            CliError::Run(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Help(s) => f.write_str(s),
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Run(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Overridable settings; every field is optional so layers can be merged.
#[derive(Debug, Clone, Default, clap::Args)]
struct Layer {
    /// Risk-free rate
    #[arg(long)]
    r: Option<f64>,
    /// Volatility used for pricing
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    strike: Option<f64>,
    #[arg(long)]
    expiry: Option<f64>,
    #[arg(long)]
    s_max: Option<f64>,
    #[arg(long)]
    s_floor_ratio: Option<f64>,
    #[arg(long)]
    n_space: Option<usize>,
    #[arg(long)]
    n_time: Option<usize>,
    /// explicit | implicit | mc | closed-form
    #[arg(long)]
    method: Option<String>,
    /// Spot price for `price` and `implied-vol`
    #[arg(long)]
    spot: Option<f64>,
    /// Valuation time for `price`
    #[arg(long)]
    time: Option<f64>,
    /// Observed option price for `implied-vol`
    #[arg(long)]
    target_price: Option<f64>,
    /// GBM drift
    #[arg(long)]
    mu: Option<f64>,
    /// Comma-separated GBM volatilities
    #[arg(long)]
    sigmas: Option<String>,
    #[arg(long)]
    s0: Option<f64>,
    #[arg(long)]
    n_steps: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    n_paths: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format; only `csv` is supported
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Parser)]
#[command(
    name = "bs-lab",
    version,
    about = "Black-Scholes numerical laboratory",
    allow_negative_numbers = true
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// key=value config file
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    layer: Layer,
}

macro_rules! merge_layers {
    ($top:expr, $bottom:expr, $($field:ident),+ $(,)?) => {
        Layer { $($field: $top.$field.or($bottom.$field)),+ }
    };
}

fn merge(top: Layer, bottom: Layer) -> Layer {
    merge_layers!(
        top,
        bottom,
        r,
        sigma,
        strike,
        expiry,
        s_max,
        s_floor_ratio,
        n_space,
        n_time,
        method,
        spot,
        time,
        target_price,
        mu,
        sigmas,
        s0,
        n_steps,
        dt,
        n_paths,
        seed,
        output,
        format,
    )
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("cannot parse {value:?} for {key}")))
}

/// Parse a flat `key=value` file into a settings layer.
fn parse_config_file(text: &str) -> Result<Layer, CliError> {
    let mut layer = Layer::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        let k = key.as_str();
        match k {
            "r" => layer.r = Some(parse_value(k, value)?),
            "sigma" => layer.sigma = Some(parse_value(k, value)?),
            "strike" => layer.strike = Some(parse_value(k, value)?),
            "expiry" => layer.expiry = Some(parse_value(k, value)?),
            "s-max" => layer.s_max = Some(parse_value(k, value)?),
            "s-floor-ratio" => layer.s_floor_ratio = Some(parse_value(k, value)?),
            "n-space" => layer.n_space = Some(parse_value(k, value)?),
            "n-time" => layer.n_time = Some(parse_value(k, value)?),
            "method" => layer.method = Some(value.to_string()),
            "spot" => layer.spot = Some(parse_value(k, value)?),
            "time" => layer.time = Some(parse_value(k, value)?),
            "target-price" => layer.target_price = Some(parse_value(k, value)?),
            "mu" => layer.mu = Some(parse_value(k, value)?),
            "sigmas" => layer.sigmas = Some(value.to_string()),
            "s0" => layer.s0 = Some(parse_value(k, value)?),
            "n-steps" => layer.n_steps = Some(parse_value(k, value)?),
            "dt" => layer.dt = Some(parse_value(k, value)?),
            "n-paths" => layer.n_paths = Some(parse_value(k, value)?),
            "seed" => layer.seed = Some(parse_value(k, value)?),
            "output" => layer.output = Some(PathBuf::from(value)),
            "format" => layer.format = Some(value.to_string()),
            other => return Err(CliError::Usage(format!("unknown config key {other:?}"))),
        }
    }
    Ok(layer)
}

/// Volatilities 0.8, 1.0, ..., 1.8.
pub fn default_gbm_sigmas() -> Vec<f64> {
    (0..6).map(|i| (8 + 2 * i) as f64 / 10.0).collect()
}

pub const DEFAULT_MC_PATHS: usize = 200_000;

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn resolve(command: Command, layer: Layer) -> Result<RunConfig, CliError> {
    if let Some(fmt) = &layer.format {
        if fmt != "csv" {
            return Err(CliError::Usage(format!(
                "unsupported format {fmt:?}; only csv is available"
            )));
        }
    }
    let market = MarketParams::new(layer.r.unwrap_or(0.05), layer.sigma.unwrap_or(0.2)).map_err(usage)?;
    let contract = OptionContract::new(layer.strike.unwrap_or(100.0), layer.expiry.unwrap_or(1.0)).map_err(usage)?;

    let method = match &layer.method {
        Some(m) => m.parse().map_err(CliError::Usage)?,
        None => PriceMethod::Fd(Method::Implicit),
    };
    if command == Command::Surface && !matches!(method, PriceMethod::Fd(_)) {
        return Err(CliError::Usage("surface needs --method explicit or implicit".into()));
    }
    let numerics = Numerics {
        s_max: layer.s_max.unwrap_or(500.0),
        s_floor_ratio: layer.s_floor_ratio.unwrap_or(DEFAULT_S_FLOOR_RATIO),
        n_space: layer.n_space.unwrap_or(200),
        n_time: layer.n_time.unwrap_or(2000),
        method,
    };
    if matches!(command, Command::Surface | Command::Price) {
        if !(numerics.s_max > contract.strike) {
            return Err(CliError::Usage(format!(
                "s-max must exceed the strike, got {}",
                numerics.s_max
            )));
        }
        if numerics.n_space < 3 || numerics.n_time < 1 {
            return Err(CliError::Usage("need n-space >= 3 and n-time >= 1".into()));
        }
        if !(numerics.s_floor_ratio > 0.0) {
            return Err(CliError::Usage("s-floor-ratio must be > 0".into()));
        }
    }

    let sigmas = match &layer.sigmas {
        Some(list) => list
            .split(',')
            .map(|v| parse_value::<f64>("sigmas", v.trim()))
            .collect::<Result<Vec<_>, _>>()?,
        None => default_gbm_sigmas(),
    };
    let default_paths = if command == Command::Gbm { 1 } else { DEFAULT_MC_PATHS };
    let sim = SimConfig {
        mu: layer.mu.unwrap_or(1.0),
        sigmas,
        s0: layer.s0.unwrap_or(100.0),
        n_steps: layer.n_steps.unwrap_or(50),
        dt: layer.dt.unwrap_or(0.1),
        n_paths: layer.n_paths.unwrap_or(default_paths),
        seed: layer.seed.unwrap_or(1),
    };
    if command == Command::Gbm {
        if sim.sigmas.is_empty() {
            return Err(CliError::Usage("sigmas must not be empty".into()));
        }
        for &s in &sim.sigmas {
            GbmParams::new(sim.mu, s, sim.s0).map_err(usage)?;
        }
        if sim.n_steps == 0 || sim.n_paths == 0 || !(sim.dt > 0.0) {
            return Err(CliError::Usage("need n-steps >= 1, n-paths >= 1 and dt > 0".into()));
        }
    }

    let query = Query {
        spot: layer.spot.unwrap_or(contract.strike),
        time: layer.time.unwrap_or(0.0),
        target_price: layer.target_price,
    };
    if matches!(command, Command::Price | Command::ImpliedVol) && !(query.spot > 0.0) {
        return Err(CliError::Usage(format!("spot must be > 0, got {}", query.spot)));
    }
    if command == Command::ImpliedVol && query.target_price.is_none() {
        return Err(CliError::Usage("implied-vol needs --target-price".into()));
    }
    if command == Command::Price && method == PriceMethod::MonteCarlo && sim.n_paths < crate::pricer::MIN_MC_PATHS {
        return Err(CliError::Usage(format!(
            "mc needs n-paths >= {}",
            crate::pricer::MIN_MC_PATHS
        )));
    }

    Ok(RunConfig {
        command,
        market,
        contract,
        numerics,
        sim,
        query,
        output: layer.output,
    })
}

/// Build a [`RunConfig`] from `argv` (program name first). `config_file` is
/// used when `--config` is absent.
pub fn parse_config<I, T>(argv: I, config_file: Option<&Path>) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Help(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    let file_layer = match cli.config.as_deref().or(config_file) {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            parse_config_file(&text)?
        }
        None => Layer::default(),
    };
    resolve(cli.command, merge(cli.layer, file_layer))
}

/// Path of the ensemble for `sigma`: `<stem>_sigma<sigma>.<ext>`.
pub fn gbm_output_path(base: &Path, sigma: f64) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("gbm");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}_sigma{sigma:.2}.{ext}"))
}

fn temp_path(path: &Path) -> PathBuf {
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!(".{name}.tmp{}", std::process::id()))
}

/// Write every file to a temporary sibling first and rename only when all succeeded.
fn write_atomically(files: Vec<(PathBuf, Vec<u8>)>) -> Result<(), CliError> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, bytes) in files {
        let tmp = temp_path(&path);
        if let Err(e) = fs::write(&tmp, &bytes) {
            for (t, _) in &staged {
                let _ = fs::remove_file(t);
            }
            return Err(e.into());
        }
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        fs::rename(&tmp, &path)?;
    }
    Ok(())
}

/// Execute a command. Scalars are printed to `out`; CSV artifacts go to files.
pub fn run<W: Write>(config: &RunConfig, out: &mut W) -> Result<(), CliError> {
    match config.command {
        Command::Gbm => {
            let base = config.output.clone().unwrap_or_else(|| PathBuf::from("gbm.csv"));
            let sim = &config.sim;
            let mut files = Vec::with_capacity(sim.sigmas.len());
            for &sigma in &sim.sigmas {
                let params = GbmParams::new(sim.mu, sigma, sim.s0)?;
                let set = simulate_gbm(&params, sim.n_steps, sim.dt, sim.n_paths, sim.seed)?;
                let mut buf = Vec::new();
                set.write_csv(&mut buf)?;
                files.push((gbm_output_path(&base, sigma), buf));
            }
            let names: Vec<String> = files.iter().map(|(p, _)| p.display().to_string()).collect();
            write_atomically(files)?;
            for n in names {
                writeln!(out, "{n}")?;
            }
        }
        Command::Surface => {
            let PriceMethod::Fd(method) = config.numerics.method else {
                return Err(CliError::Usage("surface needs --method explicit or implicit".into()));
            };
            let surface = price_surface_fd(&config.market, &config.contract, &fd_settings(config, method))?;
            let path = config.output.clone().unwrap_or_else(|| PathBuf::from("surface.csv"));
            let mut buf = Vec::new();
            surface.write_csv(&mut buf)?;
            write_atomically(vec![(path.clone(), buf)])?;
            writeln!(out, "{}", path.display())?;
        }
        Command::Price => {
            let q = &config.query;
            let line = match config.numerics.method {
                PriceMethod::Fd(method) => {
                    let surface = price_surface_fd(&config.market, &config.contract, &fd_settings(config, method))?;
                    format!("{:.12}", price_at(&surface, q.spot, q.time)?)
                }
                PriceMethod::ClosedForm => {
                    let p = closed_form_call(q.spot, q.time, &config.contract, config.market.r, config.market.sigma)?;
                    format!("{p:.12}")
                }
                PriceMethod::MonteCarlo => {
                    let remaining = OptionContract::new(config.contract.strike, config.contract.expiry - q.time)
                        .map_err(|_| Error::Domain(format!("valuation time {} is not before expiry", q.time)))?;
                    let est = price_mc(&config.market, &remaining, q.spot, config.sim.n_paths, config.sim.seed)?;
                    format!("{:.12} {:.12}", est.price, est.std_err)
                }
            };
            emit(config, out, &line)?;
        }
        Command::ImpliedVol => {
            let target = config.query.target_price.expect("checked in resolve");
            let sigma = implied_vol(target, config.query.spot, &config.contract, config.market.r)?;
            emit(config, out, &format!("{sigma:.12}"))?;
        }
    }
    Ok(())
}

fn fd_settings(config: &RunConfig, method: Method) -> FdSettings {
    FdSettings {
        s_max: config.numerics.s_max,
        s_floor_ratio: config.numerics.s_floor_ratio,
        n_space: config.numerics.n_space,
        n_time: config.numerics.n_time,
        method,
    }
}

fn emit<W: Write>(config: &RunConfig, out: &mut W, line: &str) -> Result<(), CliError> {
    if let Some(path) = &config.output {
        write_atomically(vec![(path.clone(), format!("{line}\n").into_bytes())])?;
    }
    writeln!(out, "{line}")?;
    Ok(())
}
