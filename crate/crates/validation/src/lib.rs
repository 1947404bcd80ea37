//! End-to-end acceptance checks. Each check runs a full computation and
//! reports whether it met its tolerance, with the measured numbers.

use std::path::Path;

use jacobi_cli::commands::figures;
use jacobi_spectral::asymptotics::{cauchy_check, eigen_a, factorize_product};
use jacobi_spectral::continuum::{
    closed_form_limit, degenerate_exponents, discrete_vs_continuum, frobenius_exponents, oscillatory_integral, Kind,
    Upper,
};
use jacobi_spectral::density::{amplitude_estimator, estimate_density, window_delta};
use jacobi_spectral::recurrence::{block_a, DeltaStream, PolyState};
use jacobi_spectral::scalar::{geometric_ladder, log_log_slope};
use jacobi_spectral::transition::{classify, default_window, fit_exponent, fit_policy, ExponentFit};
use jacobi_spectral::weights::{check_conditions, Verdict};
use jacobi_spectral::{Matrix, Params, Policy, Weights};

/// Exponents exercised by the fit-based checks.
pub const ALPHAS: [f64; 5] = [0.55, 0.6, 2.0 / 3.0, 0.75, 0.8];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

fn weights(alpha: f64, b0: f64) -> Weights {
    Weights::new(alpha, b0).expect("alpha in (1/2, 1)")
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn alpha_name(a: f64) -> String {
    if (a - 2.0 / 3.0).abs() < 1e-12 {
        "2/3".into()
    } else {
        format!("{a}")
    }
}

/// One fit per entry of [`ALPHAS`] over its tabulated window, 20 points each.
pub fn exponent_fits() -> Vec<ExponentFit> {
    ALPHAS
        .iter()
        .map(|&a| {
            let window = default_window(a).expect("tabulated");
            fit_exponent(&weights(a, 1.0), &fit_policy(), window, 20).expect("fit")
        })
        .collect()
}

pub fn exponent_law(fits: &[ExponentFit]) -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for f in fits {
        let tol = if f.alpha <= 2.0 / 3.0 + 1e-12 { 0.15 } else { 0.2 };
        let good = (f.slope - f.predicted).abs() <= tol && f.points_used >= 20;
        ok &= good;
        parts.push(format!("{}: {:.3} vs {:.3} ({} pts)", alpha_name(f.alpha), f.slope, f.predicted, f.points_used));
    }
    Check::new("exponent law", ok, parts.join(", "))
}

pub fn classification(fits: &[ExponentFit]) -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for f in fits {
        let class = classify(f.alpha).expect("alpha in range");
        let agree = if class.sign() == 0 { f.slope.abs() <= 0.15 } else { f.slope.signum() as i8 == class.sign() };
        ok &= agree;
        parts.push(format!("{}: {} ({:+.3})", alpha_name(f.alpha), class, f.slope));
    }
    let e = estimate_density(&weights(2.0 / 3.0, 1.0), 0.01, &Policy::default()).expect("estimate");
    let f0_ok = e.converged && e.f.is_finite() && e.f > 0.0;
    ok &= f0_ok;
    parts.push(format!("f(0.01) at 2/3 = {:.6}", e.f));
    Check::new("classification", ok, parts.join(", "))
}

pub fn estimator_cross_validation() -> Check {
    let n_end = 2_000_000u64;
    let mut worst_raw = 0.0f64;
    let mut worst_est = 0.0f64;
    for a in [0.6, 0.8] {
        let seq = weights(a, 1.0);
        for x in [0.5, 1.0, 2.0] {
            let (mean, _) = window_delta(&seq, x, n_end, 0.5);
            let amp = amplitude_estimator(&seq, x, n_end / 4..=n_end / 2);
            worst_raw = worst_raw.max(rel(mean, amp));
            let e = estimate_density(&seq, x, &Policy::default()).expect("estimate");
            worst_est = worst_est.max(rel(e.delta, e.amplitude_delta));
        }
    }
    Check::new(
        "estimator cross-validation",
        worst_raw < 0.01 && worst_est < 0.01,
        format!("window mean vs amplitude {worst_raw:.2e}, extrapolated vs amplitude {worst_est:.2e} (limit 1e-2)"),
    )
}

pub fn exact_closed_forms() -> Check {
    let mut worst_p = 0.0f64;
    let mut worst_d = 0.0f64;
    let mut odd_zero = true;
    for (a, b0) in [(0.6, 1.0), (0.8, 2.0)] {
        let seq = weights(a, b0);
        let mut s = PolyState::start(&seq, 0.0);
        odd_zero &= s.p_curr == 0.0;
        for k in 1..=1_000_000u64 {
            s = s.step(&seq);
            let want = if k % 2 == 0 { b0 } else { -b0 } / (k as f64).powf(a);
            worst_p = worst_p.max(rel(s.p_curr, want));
            s = s.step(&seq);
            odd_zero &= s.p_curr == 0.0;
        }
        for d in DeltaStream::new(&seq, 0.0).take(2_000_000).filter(|d| d.n % 2 == 0) {
            let k = (d.n / 2) as f64;
            worst_d = worst_d.max(rel(d.delta, b0 * b0 / k.powf(a)));
        }
    }
    let mut even = true;
    for x in [0.3, 1.7] {
        let seq = weights(0.6, 1.0);
        even &= DeltaStream::new(&seq, x)
            .zip(DeltaStream::new(&seq, -x))
            .take(1_000_000)
            .all(|(p, m)| p.delta.to_bits() == m.delta.to_bits());
    }
    Check::new(
        "exact closed forms",
        odd_zero && worst_p < 1e-12 && worst_d < 1e-12 && even,
        format!(
            "odd P(0) zero: {odd_zero}, even P(0) rel {worst_p:.1e}, Delta(0) rel {worst_d:.1e}, bit-exact evenness: {even}"
        ),
    )
}

pub fn structure_identities() -> Check {
    let a = 0.6;
    let seq = weights(a, 1.0);
    let mut worst_det = 0.0f64;
    let mut worst_mod = 0.0f64;
    for k in [1u64, 10, 1000, 100_000, 1_000_000] {
        for x in [0.5, 1.0, 2.0] {
            let det = (k as f64 / (k + 1) as f64).powf(a);
            worst_det = worst_det.max(rel(block_a(&seq, k, x).det(), det));
            if let Ok(e) = eigen_a(&seq, k, x) {
                worst_mod = worst_mod.max(rel(e.lambda_plus.norm_sqr(), det));
                worst_mod = worst_mod.max(rel(e.lambda_minus.norm_sqr(), det));
            }
        }
    }
    let (s, p, e) = (Matrix::s(), Matrix::p(), Matrix::identity());
    let algebra = s * s == -e && p * p == e && p * s == -(s * p);
    let f = factorize_product(&seq, 1.0, 10_000).expect("factorization");
    let orth = (f.f * f.f.transpose()).max_abs_diff(&e);
    let direct = (1..=10_000u64).fold(Matrix::identity(), |acc, k| block_a(&seq, k, 1.0) * acc);
    let recon = (f.reconstruct() - direct).norm() / direct.norm();
    Check::new(
        "structure identities",
        worst_det < 1e-14 && worst_mod < 1e-14 && algebra && orth < 1e-12 && recon < 1e-10,
        format!(
            "det A rel {worst_det:.1e}, |lambda|^2 rel {worst_mod:.1e}, S/P algebra exact: {algebra}, F orthogonality {orth:.1e}, reconstruction {recon:.1e}"
        ),
    )
}

pub fn product_convergence() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [0.6, 0.8] {
        let r = cauchy_check(&weights(a, 1.0), 1.0, 1_000, 1_000_000, 40).expect("product");
        let det_min = r.det_g.iter().map(|d| d.abs()).fold(f64::INFINITY, f64::min);
        let good = (r.slope + (1.0 - a)).abs() <= 0.15 && det_min > 1e-6;
        ok &= good;
        parts.push(format!("{a}: slope {:.3} vs {:.1}, min |det G| {det_min:.6}", r.slope, -(1.0 - a)));
    }
    Check::new("product convergence", ok, parts.join(", "))
}

pub fn continuum_scaling() -> Check {
    let a = 0.6;
    let want = -a / (2.0 * (1.0 - a));
    let xs = geometric_ladder(1e-3, 1e-1, 9);
    let norms: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let g = closed_form_limit(&Params::new(a, x).expect("params"), Matrix::identity()).expect("closed form").g_limit;
            g.a11.hypot(g.a21)
        })
        .collect();
    let closed = log_log_slope(&xs, &norms).unwrap_or(f64::NAN);
    let r = discrete_vs_continuum(&weights(a, 1.0), 0.05, 100_000, 1e-9).expect("comparison");
    Check::new(
        "continuum scaling",
        (closed - want).abs() <= 0.1 && (r.discrete_slope - want).abs() <= 0.15,
        format!(
            "closed form {closed:.3}, discrete {:.3} over [{:.3}, {:.3}], predicted {want:.3}",
            r.discrete_slope,
            r.ladder[0],
            r.ladder[r.ladder.len() - 1]
        ),
    )
}

pub fn oscillatory_asymptotics() -> Check {
    let a = 0.6;
    let values: Vec<f64> = geometric_ladder(1e-4, 1e-1, 7)
        .iter()
        .map(|&x| {
            let p = Params::new(a, x).expect("params");
            let c = oscillatory_integral(Kind::Cos, &p, 1.0, Upper::Infinite).expect("integral");
            c + a / (2.0 * p.s) * p.beta.abs().ln()
        })
        .collect();
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let variation = hi - lo;

    let mut frob_ok = true;
    let mut worst = 0.0f64;
    for alpha in [0.55, 0.6, 0.75, 0.8] {
        let target = (1.0 - 2.0 * alpha) / (1.0 - alpha);
        let (_, q2) = degenerate_exponents::<f64>(alpha);
        frob_ok &= (q2 - target).abs() < 1e-12;
        let mut prev = f64::INFINITY;
        for m in 1..=6 {
            let e = frobenius_exponents(&Params::with_gamma(alpha, 1.0, 10f64.powi(-m)).expect("params"));
            let err = e.p1.abs().max((1.0 + e.p2 - target).abs());
            frob_ok &= err <= prev;
            prev = err;
        }
        worst = worst.max(prev);
    }
    frob_ok &= worst < 1e-3;
    Check::new(
        "oscillatory integral asymptotics",
        variation < 0.05 && frob_ok,
        format!("variation of c + (alpha/2s) ln|beta| = {variation:.4} (limit 0.05), Frobenius limit error {worst:.1e}"),
    )
}

pub fn figure_reproduction(dir: &Path) -> Check {
    let run = match figures::run(1.0, &figures::default_policy(), dir) {
        Ok(r) => r,
        Err(e) => return Check::new("figure reproduction", false, e.to_string()),
    };
    let files = run.panels.iter().all(|p| p.svg.is_file() && p.csv.is_file());
    let shapes: Vec<String> = run
        .shapes
        .iter()
        .map(|s| format!("{} {} = {:.4} in ({}, {})", s.panel, s.check, s.value, s.lower, s.upper))
        .collect();
    let ok = files && run.shapes.iter().all(|s| s.passed());
    Check::new("figure reproduction", ok, format!("svg written: {files}, {}", shapes.join("; ")))
}

pub fn conditions() -> Check {
    let want = [Verdict::Holds, Verdict::Holds, Verdict::Fails, Verdict::Holds];
    let mut ok = true;
    let mut parts = Vec::new();
    for a in ALPHAS {
        let r = check_conditions(&weights(a, 1.0), 1_000_000, 0.1).expect("conditions");
        ok &= r.verdicts == want;
        let v: Vec<&str> = r.verdicts.iter().map(Verdict::as_str).collect();
        parts.push(format!("{}: {}", alpha_name(a), v.join("/")));
    }
    Check::new("conditions", ok, parts.join(", "))
}
