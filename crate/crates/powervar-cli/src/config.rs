//! Effective run configuration: built-in defaults, overridden by a flat
//! key=value config file, overridden by command-line flags.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use clap::{Args, ValueEnum};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Method {
    Spectral,
    CrankNicolson,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Spectral => "spectral",
            Method::CrankNicolson => "crank_nicolson",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spectral" => Ok(Method::Spectral),
            "crank_nicolson" => Ok(Method::CrankNicolson),
            "monte_carlo" => Ok(Method::MonteCarlo),
            other => Err(format!(
                "unknown method '{other}' (expected spectral, crank_nicolson, or monte_carlo)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}' (expected json or csv)")),
        }
    }
}

/// Flags shared by every subcommand. Each is optional here; the effective
/// value comes from flag > config file > default.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Variance exponent k (must exceed 2)
    #[arg(long)]
    pub k: Option<f64>,

    /// Risk-free rate
    #[arg(long)]
    pub r: Option<f64>,

    /// Volatility scale sigma
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Payoff amplitude A
    #[arg(long = "A")]
    pub amplitude: Option<f64>,

    /// Payoff decay rate alpha
    #[arg(long = "alpha")]
    pub decay: Option<f64>,

    /// Payoff shape p (must exceed -1)
    #[arg(long)]
    pub p: Option<f64>,

    /// Contract maturity T
    #[arg(long = "T")]
    pub maturity: Option<f64>,

    /// Valuation time t (at most T)
    #[arg(long = "t")]
    pub valuation: Option<f64>,

    /// Comma-separated spot points, e.g. "60" or "30,60,90"
    #[arg(long)]
    pub s: Option<String>,

    /// Number of series terms N
    #[arg(long)]
    pub terms: Option<usize>,

    /// Pricing method
    #[arg(long, value_enum)]
    pub method: Option<Method>,

    /// Gauss rule size for projection (needs at least 2 N nodes)
    #[arg(long = "quad_nodes")]
    pub quad_nodes: Option<usize>,

    /// Finite-difference domain cutoff
    #[arg(long = "fd_s_max")]
    pub fd_s_max: Option<f64>,

    /// Finite-difference spatial intervals
    #[arg(long = "fd_space")]
    pub fd_space: Option<usize>,

    /// Finite-difference time steps
    #[arg(long = "fd_time")]
    pub fd_time: Option<usize>,

    /// Monte Carlo path count
    #[arg(long = "mc_paths")]
    pub mc_paths: Option<usize>,

    /// Monte Carlo steps per path
    #[arg(long = "mc_steps")]
    pub mc_steps: Option<usize>,

    /// Monte Carlo seed
    #[arg(long)]
    pub seed: Option<u64>,

    /// Relative tolerance for adaptive reference integrals
    #[arg(long = "rel_tol")]
    pub rel_tol: Option<f64>,

    /// Comma-separated truncation list for convergence studies
    #[arg(long = "n_list")]
    pub n_list: Option<String>,

    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Output path (standard output when omitted)
    #[arg(long)]
    pub output: Option<String>,

    /// Flat key=value config file mirroring the long flag names
    #[arg(long)]
    pub config: Option<String>,
}

/// Fully resolved configuration used by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub k: f64,
    pub r: f64,
    pub sigma: f64,
    pub amplitude: f64,
    pub decay: f64,
    pub p: f64,
    pub maturity: f64,
    pub valuation: f64,
    pub spots: Vec<f64>,
    pub terms: usize,
    pub method: Method,
    pub quad_nodes: usize,
    pub fd_s_max: f64,
    pub fd_space: usize,
    pub fd_time: usize,
    pub mc_paths: usize,
    pub mc_steps: usize,
    pub seed: u64,
    pub rel_tol: f64,
    pub n_list: Vec<usize>,
    pub format: Format,
    pub output: Option<String>,
}

/// Per-command defaults that differ; everything else is shared.
#[derive(Debug, Clone, Copy)]
pub struct CommandDefaults {
    pub spots: &'static str,
    pub quad_nodes: usize,
}

pub const PRICE_DEFAULTS: CommandDefaults = CommandDefaults { spots: "60", quad_nodes: 200 };
pub const COEFFS_DEFAULTS: CommandDefaults = CommandDefaults { spots: "60", quad_nodes: 200 };
pub const VALIDATE_DEFAULTS: CommandDefaults =
    CommandDefaults { spots: "30,60,90", quad_nodes: 512 };
pub const CONVERGE_DEFAULTS: CommandDefaults = CommandDefaults { spots: "60", quad_nodes: 200 };

fn parse_kv_file(path: &str) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config file '{path}': {e}")))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::InvalidParams(format!(
                "config file '{path}' line {}: expected key=value, got '{line}'",
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

const KNOWN_KEYS: [&str; 22] = [
    "k", "r", "sigma", "A", "alpha", "p", "T", "t", "s", "terms", "method", "quad_nodes",
    "fd_s_max", "fd_space", "fd_time", "mc_paths", "mc_steps", "seed", "rel_tol", "n_list",
    "format", "output",
];

fn pick<T: FromStr>(
    flag: Option<T>,
    file: &HashMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.get(key) {
        Some(raw) => raw.parse().map_err(|e| {
            CliError::InvalidParams(format!("config key '{key}': cannot parse '{raw}': {e}"))
        }),
        None => Ok(default),
    }
}

fn parse_f64_list(raw: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let items: Result<Vec<f64>, _> = raw.split(',').map(|p| p.trim().parse::<f64>()).collect();
    let items = items
        .map_err(|e| CliError::InvalidParams(format!("cannot parse {what} '{raw}': {e}")))?;
    if items.is_empty() {
        return Err(CliError::InvalidParams(format!("{what} list is empty")));
    }
    Ok(items)
}

fn parse_usize_list(raw: &str, what: &str) -> Result<Vec<usize>, CliError> {
    let items: Result<Vec<usize>, _> = raw.split(',').map(|p| p.trim().parse::<usize>()).collect();
    let items = items
        .map_err(|e| CliError::InvalidParams(format!("cannot parse {what} '{raw}': {e}")))?;
    if items.is_empty() {
        return Err(CliError::InvalidParams(format!("{what} list is empty")));
    }
    Ok(items)
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs, defaults: CommandDefaults) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => {
                let map = parse_kv_file(path)?;
                for key in map.keys() {
                    if !KNOWN_KEYS.contains(&key.as_str()) {
                        return Err(CliError::InvalidParams(format!(
                            "unknown config key '{key}'"
                        )));
                    }
                }
                map
            }
            None => HashMap::new(),
        };

        let spots_raw = pick(args.s.clone(), &file, "s", defaults.spots.to_string())?;
        let n_list_raw = pick(args.n_list.clone(), &file, "n_list", "8,16,32,64".to_string())?;

        Ok(RunConfig {
            k: pick(args.k, &file, "k", 3.0)?,
            r: pick(args.r, &file, "r", 0.05)?,
            sigma: pick(args.sigma, &file, "sigma", 0.2)?,
            amplitude: pick(args.amplitude, &file, "A", 1.0)?,
            decay: pick(args.decay, &file, "alpha", 0.05)?,
            p: pick(args.p, &file, "p", 2.0)?,
            maturity: pick(args.maturity, &file, "T", 1.0)?,
            valuation: pick(args.valuation, &file, "t", 0.0)?,
            spots: parse_f64_list(&spots_raw, "spot")?,
            terms: pick(args.terms, &file, "terms", 64)?,
            method: pick(args.method, &file, "method", Method::Spectral)?,
            quad_nodes: pick(args.quad_nodes, &file, "quad_nodes", defaults.quad_nodes)?,
            fd_s_max: pick(args.fd_s_max, &file, "fd_s_max", 300.0)?,
            fd_space: pick(args.fd_space, &file, "fd_space", 3000)?,
            fd_time: pick(args.fd_time, &file, "fd_time", 2000)?,
            mc_paths: pick(args.mc_paths, &file, "mc_paths", 200_000)?,
            mc_steps: pick(args.mc_steps, &file, "mc_steps", 500)?,
            seed: pick(args.seed, &file, "seed", 42)?,
            rel_tol: pick(args.rel_tol, &file, "rel_tol", 1e-9)?,
            n_list: parse_usize_list(&n_list_raw, "truncation")?,
            format: pick(args.format, &file, "format", Format::Json)?,
            output: args.output.clone().or_else(|| file.get("output").cloned()),
        })
    }
}
