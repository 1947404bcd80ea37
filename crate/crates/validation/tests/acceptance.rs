use std::process::ExitCode;
use std::time::Instant;

use jacobi_validation as v;

fn timed<F: FnOnce() -> v::Check>(f: F) -> (v::Check, f64) {
    let t = Instant::now();
    let c = f();
    (c, t.elapsed().as_secs_f64())
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let t = Instant::now();
    let fits = v::exponent_fits();
    let fit_secs = t.elapsed().as_secs_f64();

    let mut results = vec![
        (v::exponent_law(&fits), fit_secs),
        timed(|| v::classification(&fits)),
    ];
    let checks: [fn() -> v::Check; 6] = [
        v::estimator_cross_validation,
        v::exact_closed_forms,
        v::structure_identities,
        v::product_convergence,
        v::continuum_scaling,
        v::oscillatory_asymptotics,
    ];
    results.extend(checks.iter().map(timed));
    results.push(timed(|| v::figure_reproduction(dir.path())));
    results.push(timed(v::conditions));

    println!("\nrunning {} acceptance checks", results.len());
    for (c, secs) in &results {
        println!("{} {} ({secs:.1} s): {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = results.iter().filter(|(c, _)| !c.passed).count();
    println!("\nacceptance: {} passed, {failed} failed\n", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
