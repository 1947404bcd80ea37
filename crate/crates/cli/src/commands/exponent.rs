use std::io::Write;
use std::path::Path;

use jacobi_spectral::transition::{classify, default_window, fit_exponent, ExponentFit};
use jacobi_spectral::{Policy, Weights};

use crate::output::{num, short, write_table};
use crate::{CliError, Outcome};

pub const HEADER: [&str; 7] = ["alpha", "slope", "predicted", "residual_rms", "x_lo", "x_hi", "points_used"];

#[derive(Clone, Debug, PartialEq)]
pub struct Request {
    pub window: (f64, f64),
    pub points: usize,
    pub tolerance: f64,
}

/// Default acceptance band around the predicted exponent.
pub fn default_tolerance(alpha: f64) -> f64 {
    if alpha <= 2.0 / 3.0 + 1e-12 {
        0.15
    } else {
        0.2
    }
}

impl Request {
    pub fn resolve(
        seq: &Weights,
        x_lo: Option<f64>,
        x_hi: Option<f64>,
        points: u64,
        tolerance: Option<f64>,
    ) -> Result<Self, CliError> {
        let (lo, hi) = default_window(seq.alpha()).map_err(|e| CliError::Usage(e.to_string()))?;
        let window = (x_lo.unwrap_or(lo), x_hi.unwrap_or(hi));
        if !(window.0 > 0.0 && window.1 > window.0 && window.1.is_finite()) {
            return Err(CliError::Usage(format!("fit window [{}, {}] must satisfy 0 < x-lo < x-hi", window.0, window.1)));
        }
        if points < 10 {
            return Err(CliError::Usage("--points must be at least 10".into()));
        }
        let tolerance = tolerance.unwrap_or_else(|| default_tolerance(seq.alpha()));
        if !(tolerance > 0.0) {
            return Err(CliError::Usage("--tolerance must be positive".into()));
        }
        Ok(Self { window, points: points as usize, tolerance })
    }
}

pub fn row(f: &ExponentFit) -> Vec<String> {
    vec![
        num(f.alpha),
        num(f.slope),
        num(f.predicted),
        num(f.residual_rms),
        num(f.x_window.0),
        num(f.x_window.1),
        f.points_used.to_string(),
    ]
}

pub fn run(
    seq: &Weights,
    policy: &Policy,
    req: &Request,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let fit = fit_exponent(seq, policy, req.window, req.points).map_err(|e| CliError::Failed(e.to_string()))?;
    write_table(out, stdout, &HEADER, &[row(&fit)])?;
    let class = classify(seq.alpha()).map_err(|e| CliError::Usage(e.to_string()))?;
    let ok = (fit.slope - fit.predicted).abs() <= req.tolerance;
    let summary = vec![
        format!("alpha = {}, classification: {}", seq.alpha(), class),
        format!("predicted exponent: {}", short(fit.predicted)),
        format!(
            "measured exponent: {:.4} over [{}, {}] from {} points (rms {:.2e})",
            fit.slope, fit.x_window.0, fit.x_window.1, fit.points_used, fit.residual_rms
        ),
        format!("{} (tolerance {})", if ok { "PASS" } else { "FAIL" }, req.tolerance),
    ];
    Ok(Outcome { ok, summary })
}
