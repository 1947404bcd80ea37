use std::io::Write;
use std::path::Path;

use jacobi_spectral::weights::{check_conditions, ConditionReport, Verdict};
use jacobi_spectral::Weights;

use crate::output::{num, write_table};
use crate::{CliError, Outcome};

pub const HEADER: [&str; 4] = ["condition", "verdict", "statistic", "partial_sum"];

pub fn rows(r: &ConditionReport) -> Vec<Vec<String>> {
    let last = |v: &[jacobi_spectral::weights::PartialSum]| v.last().map_or(f64::NAN, |p| p.sum);
    let stats = [
        (r.c1_growth, r.c1_last_weight),
        (r.c2_decay, r.c2_ratio_limit),
        (r.c3_decay, last(&r.c3_partial_sums)),
        (r.c4_decay, last(&r.c4_partial_sums)),
    ];
    stats
        .iter()
        .enumerate()
        .map(|(i, (s, p))| vec![(i + 1).to_string(), r.verdicts[i].as_str().into(), num(*s), num(*p)])
        .collect()
}

pub fn run(
    seq: &Weights,
    max_n: u64,
    slope_tolerance: f64,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<Outcome, CliError> {
    if !(slope_tolerance > 0.0) {
        return Err(CliError::Usage("--slope-tolerance must be positive".into()));
    }
    let r = check_conditions(seq, max_n, slope_tolerance).map_err(|e| CliError::Usage(e.to_string()))?;
    write_table(out, stdout, &HEADER, &rows(&r))?;
    let summary = (0..4).map(|i| format!("condition{}: {}", i + 1, r.verdicts[i])).collect();
    Ok(Outcome { ok: !r.verdicts.contains(&Verdict::Inconclusive), summary })
}
