//! Argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Accepts plain integers and float notation such as `1e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(format!("`{s}` is not a nonnegative integer"))
    }
}

/// Accepts decimals and simple fractions such as `2/3`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let bad = || format!("`{s}` is not a number");
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (f64, f64) = (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
            if d == 0.0 {
                return Err(bad());
            }
            Ok(n / d)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

#[derive(Debug, Parser)]
#[command(name = "jacobi", version, about = "Spectral density of Jacobi operators with paired power-law weights")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Weight exponent, in the open interval (1/2, 1).
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_real)]
    pub alpha: Option<f64>,
    /// First weight b_0 (default 1).
    #[arg(long, global = true)]
    pub b0: Option<f64>,
    /// Truncation constant in N(x) = kappa (alpha / 2|x|)^{1/(1-alpha)}.
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// Hard cap on the recurrence length.
    #[arg(long = "n-max", global = true, value_parser = parse_count)]
    pub n_max: Option<u64>,
    /// Output file (CSV) or directory (figures).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Exit with status 1 when any point is unconverged or a check fails.
    #[arg(long, global = true)]
    pub strict: bool,
    /// key=value file supplying defaults for any long flag; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Density f(x) = 1 / (pi C^2(x)) on a uniform grid.
    Density {
        #[arg(long = "x-min", default_value_t = -3.0, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long = "x-max", default_value_t = 3.0, allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long, default_value_t = 200, value_parser = parse_count)]
        points: u64,
    },
    /// Density figures for alpha = 0.6, 2/3 and 0.8 with shape checks.
    Figures,
    /// Fit the power law of f(x) as x -> 0.
    Exponent {
        #[arg(long = "x-lo")]
        x_lo: Option<f64>,
        #[arg(long = "x-hi")]
        x_hi: Option<f64>,
        #[arg(long, default_value_t = 20, value_parser = parse_count)]
        points: u64,
        /// Allowed |measured - predicted|; defaults to 0.15 for alpha <= 2/3, else 0.2.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Check the four sufficient conditions on the weights.
    Conditions {
        #[arg(long = "max-n", default_value_t = 1_000_000, value_parser = parse_count)]
        max_n: u64,
        #[arg(long = "slope-tolerance", default_value_t = 0.1)]
        slope_tolerance: f64,
    },
    /// Convergence of the residual transfer-matrix product.
    Product {
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 1_000_000, value_parser = parse_count)]
        k: u64,
        #[arg(long, default_value_t = 40, value_parser = parse_count)]
        samples: u64,
    },
    /// Discrete product against its continuous model and closed form.
    Ode {
        #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
        x: f64,
        #[arg(long = "k-max", default_value_t = 100_000, value_parser = parse_count)]
        k_max: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Density { .. } => "density",
            Command::Figures => "figures",
            Command::Exponent { .. } => "exponent",
            Command::Conditions { .. } => "conditions",
            Command::Product { .. } => "product",
            Command::Ode { .. } => "ode",
        }
    }
}
