use std::io::Write;
use std::path::Path;

use jacobi_spectral::continuum::discrete_vs_continuum;
use jacobi_spectral::Weights;

use crate::output::{num, short, write_table};
use crate::{CliError, Outcome};

pub const HEADER: [&str; 4] = ["x", "discrete_first_column", "continuum_first_column", "closed_form_first_column"];

pub fn run(
    seq: &Weights,
    x: f64,
    k_max: u64,
    tol: f64,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<Outcome, CliError> {
    if x == 0.0 || !x.is_finite() {
        return Err(CliError::Usage("--x must be finite and nonzero".into()));
    }
    if !(tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let r = discrete_vs_continuum(seq, x, k_max, tol).map_err(|e| CliError::Failed(e.to_string()))?;
    let rows: Vec<Vec<String>> = (0..r.ladder.len())
        .map(|i| {
            vec![
                num(r.ladder[i]),
                num(r.discrete_first_column[i]),
                num(r.continuum_first_column[i]),
                num(r.closed_form_first_column[i]),
            ]
        })
        .collect();
    write_table(out, stdout, &HEADER, &rows)?;
    let a = seq.alpha();
    let predicted = -a / (2.0 * (1.0 - a));
    let within = |s: f64| (s - predicted).abs() <= 0.15;
    let summary = vec![
        format!("predicted scaling slope: {}", short(predicted)),
        format!(
            "scaling slopes: discrete {:.4}, continuum {:.4}, closed form {:.4}",
            r.discrete_slope, r.continuum_slope, r.closed_form_slope
        ),
        format!(
            "growth of |G e1| over k = {}..{}: discrete {:.6}, continuum {:.6}",
            r.k_max / 10,
            r.k_max,
            r.discrete_growth,
            r.continuum_growth
        ),
        format!("first-column signs agree: {}", r.first_column_signs_agree),
    ];
    Ok(Outcome { ok: within(r.discrete_slope) && within(r.continuum_slope), summary })
}
