use std::io::Write;
use std::path::Path;

use jacobi_spectral::density::sweep;
use jacobi_spectral::{Estimate, Policy, Weights};

use crate::output::{flag, num, write_table};
use crate::{CliError, Outcome};

pub const HEADER: [&str; 7] = ["x", "delta", "f", "n_used", "spread", "amplitude_delta", "converged"];

/// Uniform grid on `[x_min, x_max]`; the origin is rejected.
pub fn grid(x_min: f64, x_max: f64, points: u64) -> Result<Vec<f64>, CliError> {
    if points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    if !(x_min.is_finite() && x_max.is_finite()) || x_min > x_max {
        return Err(CliError::Usage(format!("grid bounds [{x_min}, {x_max}] are invalid")));
    }
    let n = points as usize;
    let g: Vec<f64> = if n == 1 {
        vec![x_min]
    } else {
        let h = (x_max - x_min) / (n - 1) as f64;
        (0..n).map(|i| if i + 1 == n { x_max } else { x_min + h * i as f64 }).collect()
    };
    if g.contains(&0.0) {
        return Err(CliError::Usage("grid contains x = 0; choose bounds or --points that avoid it".into()));
    }
    Ok(g)
}

pub fn row(e: &Estimate) -> Vec<String> {
    vec![
        num(e.x),
        num(e.delta),
        num(e.f),
        e.n_used.to_string(),
        num(e.spread),
        num(e.amplitude_delta),
        flag(e.converged).into(),
    ]
}

pub fn estimate(seq: &Weights, policy: &Policy, grid: &[f64]) -> Result<Vec<Estimate>, CliError> {
    sweep(seq, grid, policy).map_err(|e| CliError::Failed(e.to_string()))
}

pub fn run(
    seq: &Weights,
    policy: &Policy,
    grid: &[f64],
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let est = estimate(seq, policy, grid)?;
    let rows: Vec<Vec<String>> = est.iter().map(row).collect();
    write_table(out, stdout, &HEADER, &rows)?;
    let bad: Vec<String> = est.iter().filter(|e| !e.converged).map(|e| num(e.x)).collect();
    let mut summary = vec![format!("density: {} points, {} unconverged", est.len(), bad.len())];
    if !bad.is_empty() {
        summary.push(format!("unconverged at x = {}", bad.join(", ")));
    }
    Ok(Outcome { ok: bad.is_empty(), summary })
}
