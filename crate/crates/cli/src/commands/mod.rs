//! One module per subcommand, plus shared validation.

pub mod conditions;
pub mod density;
pub mod exponent;
pub mod figures;
pub mod ode;
pub mod product;

use std::io::Write;

use jacobi_spectral::{Policy, Weights};

use crate::args::{Cli, Command, Common};
use crate::{CliError, Outcome};

pub const DEFAULT_N_MAX: u64 = 100_000_000;

pub fn weights(common: &Common) -> Result<Weights, CliError> {
    let alpha = common
        .alpha
        .ok_or_else(|| CliError::Usage("--alpha is required; valid interval is (1/2, 1)".into()))?;
    weights_for(alpha, common.b0.unwrap_or(1.0))
}

pub fn weights_for(alpha: f64, b0: f64) -> Result<Weights, CliError> {
    Weights::new(alpha, b0).map_err(|e| CliError::Usage(e.to_string()))
}

/// Density policy with `--kappa` / `--n-max` applied over `base`.
pub fn policy(common: &Common, base: Policy) -> Result<Policy, CliError> {
    let mut p = base;
    if let Some(k) = common.kappa {
        p.kappa = k;
    }
    if let Some(n) = common.n_max {
        p.n_max = n;
        p.n_min = p.n_min.min(n);
    }
    p.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(p)
}

pub fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let c = &cli.common;
    let out = c.out.as_deref();
    match cli.command {
        Command::Density { x_min, x_max, points } => {
            let seq = weights(c)?;
            let grid = density::grid(x_min, x_max, points)?;
            let pol = policy(c, Policy::default())?;
            density::run(&seq, &pol, &grid, out, stdout)
        }
        Command::Figures => {
            let pol = policy(c, figures::default_policy())?;
            let dir = c.out.clone().unwrap_or_else(|| "figures".into());
            let run = figures::run(c.b0.unwrap_or(1.0), &pol, &dir)?;
            Ok(run.outcome())
        }
        Command::Exponent { x_lo, x_hi, points, tolerance } => {
            let seq = weights(c)?;
            let pol = policy(c, jacobi_spectral::transition::fit_policy())?;
            let req = exponent::Request::resolve(&seq, x_lo, x_hi, points, tolerance)?;
            exponent::run(&seq, &pol, &req, out, stdout)
        }
        Command::Conditions { max_n, slope_tolerance } => {
            let seq = weights(c)?;
            conditions::run(&seq, max_n, slope_tolerance, out, stdout)
        }
        Command::Product { x, k, samples } => {
            let seq = weights(c)?;
            product::run(&seq, x, k, samples, out, stdout)
        }
        Command::Ode { x, k_max, tol } => {
            let seq = weights(c)?;
            ode::run(&seq, x, k_max, tol, out, stdout)
        }
    }
}
