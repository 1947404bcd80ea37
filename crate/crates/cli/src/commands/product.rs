use std::io::Write;
use std::path::Path;

use jacobi_spectral::asymptotics::{cauchy_check, factorize_product, tail_check};
use jacobi_spectral::Weights;

use crate::output::{num, short, write_table};
use crate::{CliError, Outcome};

pub const HEADER: [&str; 4] = ["k", "gap", "det_g", "tail_norm"];

pub fn run(
    seq: &Weights,
    x: f64,
    k: u64,
    samples: u64,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<Outcome, CliError> {
    if x == 0.0 || !x.is_finite() {
        return Err(CliError::Usage("--x must be finite and nonzero".into()));
    }
    if k < 20 {
        return Err(CliError::Usage("--k must be at least 20".into()));
    }
    if samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let k_lo = (k / 10).clamp(2, 1000);
    let fail = |e: jacobi_spectral::asymptotics::AsymptoticsError| CliError::Failed(e.to_string());
    let cauchy = cauchy_check(seq, x, k_lo, k, samples as usize).map_err(fail)?;
    let tail = tail_check(seq, x, &cauchy.k).map_err(fail)?;
    let fact = factorize_product(seq, x, k).map_err(fail)?;
    let rel = (fact.reconstruct() - fact.product).norm() / fact.product.norm();

    let rows: Vec<Vec<String>> = (0..cauchy.k.len())
        .map(|i| vec![cauchy.k[i].to_string(), num(cauchy.gap[i]), num(cauchy.det_g[i]), num(tail.q_norm[i])])
        .collect();
    write_table(out, stdout, &HEADER, &rows)?;
    let predicted = -(1.0 - seq.alpha());
    let det = fact.g.det();
    let summary = vec![
        format!("convergence slope of |G(2k) - G(k)|: {:.4} (predicted {})", cauchy.slope, short(predicted)),
        format!("tail sum slope: {:.4}", tail.slope),
        format!("det G({k}) = {det:.6}, |G e1| = {:.6}", fact.first_column_norm()),
        format!("factorization reconstruction error: {rel:.2e}"),
    ];
    Ok(Outcome { ok: det.abs() > 1e-6 && (cauchy.slope - predicted).abs() <= 0.15, summary })
}
