//! Continuous analogue of the residual product: oscillatory integrals, the
//! exactly solvable constant-`W` system, matrix ODEs and Frobenius exponents.

use std::sync::OnceLock;

use thiserror::Error;

use crate::asymptotics::{rotation_phase_constant, ProductWalk};
use crate::mat2::{vec_norm, Mat2};
use crate::ode::{integrate, OdeError, Tolerance};
use crate::scalar::{geometric_ladder, log_log_slope, KahanSum, Scalar};
use crate::weights::WeightSequence;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContinuumError {
    #[error("alpha = {0} lies outside the open interval (1/2, 1)")]
    AlphaOutOfRange(f64),
    #[error("integral over [{lower}, ∞) diverges when the phase speed is zero")]
    Divergent { lower: f64 },
    #[error("lower limit {0} must be at least 1 and finite")]
    BadLimits(f64),
    #[error("spectral point must be nonzero")]
    ZeroPoint,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("integration failed, last good n = {last_good_n}")]
    Integration { last_good_n: f64 },
}

impl From<OdeError> for ContinuumError {
    fn from(e: OdeError) -> Self {
        ContinuumError::Integration { last_good_n: e.last_good_t() }
    }
}

/// Phase `θ(t) = β t^s + γ` of the continuous coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatoryParams<T> {
    pub alpha: T,
    pub beta: T,
    pub s: T,
    pub gamma: T,
}

impl<T: Scalar> OscillatoryParams<T> {
    /// Parameters at spectral point `x`, with the phase offset taken from the
    /// rotation angle `t_k` of the discrete product.
    pub fn new(alpha: T, x: T) -> Result<Self, ContinuumError> {
        let gamma = T::lit(2.0) * x * rotation_phase_constant(alpha);
        Self::with_gamma(alpha, x, gamma)
    }

    pub fn with_gamma(alpha: T, x: T, gamma: T) -> Result<Self, ContinuumError> {
        if !(alpha > T::lit(0.5) && alpha < T::one()) {
            return Err(ContinuumError::AlphaOutOfRange(alpha.to_f64_lossy()));
        }
        let s = T::one() - alpha;
        Ok(Self { alpha, beta: -T::lit(2.0) * x / s, s, gamma })
    }

    #[inline]
    pub fn phase(&self, t: T) -> T {
        self.beta * t.powf(self.s) + self.gamma
    }

    /// Coupling `(α / 2t) (cos θ P + sin θ Q)`.
    #[inline]
    pub fn coupling(&self, t: T) -> Mat2<T> {
        Mat2::reflection(self.phase(t)).scale(self.alpha / (T::lit(2.0) * t))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Cos,
    Sin,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Upper<T> {
    Finite(T),
    Infinite,
}

/// Absolute bound on the extrapolated alternating tail.
pub const TAIL_BOUND: f64 = 1e-10;

fn gauss_legendre() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        const N: usize = 20;
        let mut out = Vec::with_capacity(N);
        for i in 0..N {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for n in 2..=N {
                    let p2 = ((2 * n - 1) as f64 * x * p1 - (n - 1) as f64 * p0) / n as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out
    })
}

#[inline]
fn trig<T: Scalar>(kind: Kind, v: T) -> T {
    match kind {
        Kind::Cos => v.cos(),
        Kind::Sin => v.sin(),
    }
}

/// `∫_p^q trig(y + g) / y dy` on a short panel.
fn panel<T: Scalar>(kind: Kind, g: T, p: T, q: T) -> T {
    let two = T::lit(2.0);
    let mut acc = KahanSum::new();
    if q > p * two {
        // Wide relative range: integrate in u = ln y, one octave at a time.
        let (lp, lq) = (p.ln(), q.ln());
        let pieces = ((lq - lp) / T::LN_2()).ceil().max(T::one());
        let np = pieces.to_usize().unwrap_or(1);
        let w = (lq - lp) / pieces;
        for j in 0..np {
            let a = lp + w * T::from_usize(j).unwrap();
            for &(node, weight) in gauss_legendre() {
                let u = a + w * (T::lit(node) + T::one()) / two;
                acc.add(T::lit(weight) * w / two * trig(kind, u.exp() + g));
            }
        }
    } else {
        let w = q - p;
        for &(node, weight) in gauss_legendre() {
            let y = p + w * (T::lit(node) + T::one()) / two;
            acc.add(T::lit(weight) * w / two * trig(kind, y + g) / y);
        }
    }
    acc.value()
}

/// First zero of `trig(y + g)` strictly above `a`.
fn next_zero<T: Scalar>(kind: Kind, g: T, a: T) -> T {
    let pi = T::PI();
    let shift = match kind {
        Kind::Cos => T::FRAC_PI_2(),
        Kind::Sin => T::zero(),
    };
    let m = ((a + g - shift) / pi).floor() + T::one();
    let mut z = shift + m * pi - g;
    while z <= a {
        z += pi;
    }
    z
}

/// `∫_a^b trig(y + g) / y dy` with `0 < a < b ≤ ∞`.
fn substituted<T: Scalar>(kind: Kind, g: T, a: T, b: Option<T>, bound: T) -> T {
    let pi = T::PI();
    let z0 = next_zero(kind, g, a);
    match b {
        Some(b) if b <= z0 => panel(kind, g, a, b),
        Some(b) => {
            let mut acc = KahanSum::new();
            acc.add(panel(kind, g, a, z0));
            let mut z = z0;
            while z + pi < b {
                acc.add(panel(kind, g, z, z + pi));
                z += pi;
            }
            acc.add(panel(kind, g, z, b));
            acc.value()
        }
        None => {
            let head = panel(kind, g, a, z0);
            let (value, _) = alternating_tail(kind, g, z0, bound);
            head + value
        }
    }
}

/// Sum of the between-zeros integrals from `z0` to infinity, accelerated by
/// repeated averaging of partial sums. Returns the value and its error bound.
fn alternating_tail<T: Scalar>(kind: Kind, g: T, z0: T, bound: T) -> (T, T) {
    const LEVELS: usize = 14;
    let pi = T::PI();
    let half = T::lit(0.5);
    let mut terms: usize = 48;
    let mut partial: Vec<T> = Vec::new();
    let mut acc = KahanSum::new();
    let mut z = z0;
    loop {
        while partial.len() < terms + LEVELS + 1 {
            acc.add(panel(kind, g, z, z + pi));
            partial.push(acc.value());
            z += pi;
        }
        let mut row: Vec<T> = partial[partial.len() - LEVELS - 1..].to_vec();
        let mut err = T::infinity();
        for _ in 0..LEVELS {
            let next: Vec<T> = row.windows(2).map(|w| (w[0] + w[1]) * half).collect();
            if next.len() >= 2 {
                err = (next[next.len() - 1] - next[next.len() - 2]).abs();
            }
            row = next;
        }
        let value = row[0];
        if err <= bound || terms > 1 << 16 {
            return (value, err);
        }
        terms *= 2;
    }
}

/// `(α/2) ∫_lower^upper trig(β t^s + γ) / t dt`.
pub fn oscillatory_integral<T: Scalar>(
    kind: Kind,
    params: &OscillatoryParams<T>,
    lower: T,
    upper: Upper<T>,
) -> Result<T, ContinuumError> {
    oscillatory_integral_with(kind, params, lower, upper, T::lit(TAIL_BOUND))
}

pub fn oscillatory_integral_with<T: Scalar>(
    kind: Kind,
    params: &OscillatoryParams<T>,
    lower: T,
    upper: Upper<T>,
    tail_bound: T,
) -> Result<T, ContinuumError> {
    if !(lower >= T::one() && lower.is_finite()) {
        return Err(ContinuumError::BadLimits(lower.to_f64_lossy()));
    }
    let half_alpha = params.alpha / T::lit(2.0);
    if let Upper::Finite(u) = upper {
        if u == lower {
            return Ok(T::zero());
        }
        if u < lower {
            let v = oscillatory_integral_with(kind, params, u, Upper::Finite(lower), tail_bound)?;
            return Ok(-v);
        }
    }
    if params.beta == T::zero() {
        return match upper {
            Upper::Infinite => Err(ContinuumError::Divergent { lower: lower.to_f64_lossy() }),
            Upper::Finite(u) => Ok(half_alpha * trig(kind, params.gamma) * (u / lower).ln()),
        };
    }
    // y = |β| t^s turns β t^s + γ into σ (y + σγ) with σ = sign β.
    let sigma = params.beta.signum();
    let b_abs = params.beta.abs();
    let g = sigma * params.gamma;
    let a = b_abs * lower.powf(params.s);
    let b = match upper {
        Upper::Finite(u) => Some(b_abs * u.powf(params.s)),
        Upper::Infinite => None,
    };
    let core = substituted(kind, g, a, b, tail_bound);
    let odd = match kind {
        Kind::Cos => T::one(),
        Kind::Sin => sigma,
    };
    Ok(half_alpha / params.s * odd * core)
}

/// Closed-form limit of the constant-`W` system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormLimit<T> {
    /// `c = (α/2) ∫_1^∞ cos θ(t) / t dt`.
    pub integral_c: T,
    /// `s_∞ = (α/2) ∫_1^∞ sin θ(t) / t dt`.
    pub s_inf: T,
    pub w: Mat2<T>,
    pub z: Mat2<T>,
    pub g_limit: Mat2<T>,
}

/// `W = [[0, e^{-2c}], [e^{2c}, 0]]`.
pub fn w_matrix<T: Scalar>(c: T) -> Mat2<T> {
    let e = (T::lit(2.0) * c).exp();
    Mat2::new(T::zero(), T::one() / e, e, T::zero())
}

/// `exp(s W) = cosh(s) E + sinh(s) W`, valid because `W² = E`.
pub fn exp_w<T: Scalar>(s: T, w: &Mat2<T>) -> Mat2<T> {
    Mat2::identity().scale(s.cosh()) + w.scale(s.sinh())
}

pub fn closed_form_limit<T: Scalar>(
    params: &OscillatoryParams<T>,
    v1: Mat2<T>,
) -> Result<ClosedFormLimit<T>, ContinuumError> {
    if params.beta == T::zero() {
        return Err(ContinuumError::ZeroPoint);
    }
    let c = oscillatory_integral(Kind::Cos, params, T::one(), Upper::Infinite)?;
    let s_inf = oscillatory_integral(Kind::Sin, params, T::one(), Upper::Infinite)?;
    let w = w_matrix(c);
    let z = Mat2::diag(c.exp(), (-c).exp());
    Ok(ClosedFormLimit { integral_c: c, s_inf, w, z, g_limit: z * exp_w(s_inf, &w) * v1 })
}

/// Roots of the indicial equation of the second-order scalar form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrobeniusExponents<T> {
    pub p1: T,
    pub p2: T,
}

pub fn frobenius_exponents<T: Scalar>(params: &OscillatoryParams<T>) -> FrobeniusExponents<T> {
    let two_s = T::lit(2.0) * params.s;
    let c = params.gamma.cos();
    FrobeniusExponents {
        p1: params.alpha * (T::one() - c) / two_s,
        p2: -params.alpha * (T::one() + c) / two_s,
    }
}

/// Exponents of the `γ = 0` equation `p(p - 1) + (α/s) p = 0`: `(0, 1 - α/s)`.
pub fn degenerate_exponents<T: Scalar>(alpha: T) -> (T, T) {
    let s = T::one() - alpha;
    (T::zero(), T::one() - alpha / s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixOde {
    /// `G' = (α / 2n)(cos θ P + sin θ Q) G`.
    GEquation,
    /// `V' = (α sin θ / 2n) W_n V` with `W_n` built from the running `c_n`.
    VEquation,
    /// `V' = (α sin θ / 2n) W V` with `W` frozen at its limit.
    VConstW,
}

/// Solve one of the matrix ODEs from `n_start` to `n_end`.
pub fn integrate_matrix_ode<T: Scalar>(
    which: MatrixOde,
    params: &OscillatoryParams<T>,
    n_start: T,
    n_end: T,
    init: Mat2<T>,
    tol: T,
) -> Result<Mat2<T>, ContinuumError> {
    if !(n_start >= T::one()) || !(n_end >= T::one()) {
        return Err(ContinuumError::BadLimits(n_start.min(n_end).to_f64_lossy()));
    }
    if !(tol > T::zero()) {
        return Err(ContinuumError::BadTolerance);
    }
    let tolerance = Tolerance::new(tol);
    let two = T::lit(2.0);
    let p = *params;
    match which {
        MatrixOde::GEquation => {
            let (y, _) = integrate(
                |t, y: &[T; 4]| (p.coupling(t) * Mat2::from_entries(*y)).entries(),
                n_start,
                n_end,
                init.entries(),
                &tolerance,
            )?;
            Ok(Mat2::from_entries(y))
        }
        MatrixOde::VEquation => {
            let c0 = oscillatory_integral(Kind::Cos, &p, T::one(), Upper::Finite(n_start))?;
            let e = init.entries();
            let (y, _) = integrate(
                |t, y: &[T; 5]| {
                    let th = p.phase(t);
                    let (sn, cs) = th.sin_cos();
                    let w = w_matrix(y[4]);
                    let v = Mat2::new(y[0], y[1], y[2], y[3]);
                    let dv = (w * v).scale(p.alpha * sn / (two * t));
                    [dv.a11, dv.a12, dv.a21, dv.a22, p.alpha * cs / (two * t)]
                },
                n_start,
                n_end,
                [e[0], e[1], e[2], e[3], c0],
                &tolerance,
            )?;
            Ok(Mat2::new(y[0], y[1], y[2], y[3]))
        }
        MatrixOde::VConstW => {
            let w = w_matrix(oscillatory_integral(Kind::Cos, &p, T::one(), Upper::Infinite)?);
            let (y, _) = integrate(
                |t, y: &[T; 4]| (w * Mat2::from_entries(*y)).scale(p.alpha * p.phase(t).sin() / (two * t)).entries(),
                n_start,
                n_end,
                init.entries(),
                &tolerance,
            )?;
            Ok(Mat2::from_entries(y))
        }
    }
}

/// Block index past which the oscillating coupling is below `level` relative to its phase speed.
pub fn settle_index(alpha: f64, x: f64, level: f64) -> f64 {
    (alpha / (4.0 * x.abs() * level)).powf(1.0 / (1.0 - alpha))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteContinuum {
    pub x: f64,
    pub k_max: u64,
    pub discrete_g: Mat2<f64>,
    pub continuum_g: Mat2<f64>,
    /// `‖G(k_max) e_1‖ / ‖G(k_max / 10) e_1‖` for each model.
    pub discrete_growth: f64,
    pub continuum_growth: f64,
    pub first_column_signs_agree: bool,
    pub ladder: Vec<f64>,
    pub discrete_first_column: Vec<f64>,
    pub continuum_first_column: Vec<f64>,
    pub closed_form_first_column: Vec<f64>,
    pub discrete_slope: f64,
    pub continuum_slope: f64,
    pub closed_form_slope: f64,
}

struct ModelPair {
    discrete_early: Mat2<f64>,
    discrete_late: Mat2<f64>,
    continuum_early: Mat2<f64>,
    continuum_late: Mat2<f64>,
}

/// Run the exact residual product and the `G` equation side by side from block 1.
fn run_models<T: Scalar>(
    seq: &WeightSequence<T>,
    x: T,
    k_early: u64,
    k_late: u64,
    tol: T,
) -> Result<ModelPair, ContinuumError> {
    let params = OscillatoryParams::new(seq.alpha(), x)?;
    let mut walk = ProductWalk::new(seq, x);
    walk.advance_to(1);
    let g1 = walk.factorization().g;
    walk.advance_to(k_early);
    let d_early = walk.factorization().g;
    walk.advance_to(k_late);
    let d_late = walk.factorization().g;
    let c_early = integrate_matrix_ode(MatrixOde::GEquation, &params, T::one(), T::idx(k_early), g1, tol)?;
    let c_late =
        integrate_matrix_ode(MatrixOde::GEquation, &params, T::idx(k_early), T::idx(k_late), c_early, tol)?;
    let f = |m: Mat2<T>| Mat2::from_entries(m.entries().map(|v| v.to_f64_lossy()));
    Ok(ModelPair {
        discrete_early: f(d_early),
        discrete_late: f(d_late),
        continuum_early: f(c_early),
        continuum_late: f(c_late),
    })
}

/// Compare the exact residual product with its continuous model at `x`, and
/// the small-`x` scaling of both over the decade centred on `x`.
pub fn discrete_vs_continuum<T: Scalar>(
    seq: &WeightSequence<T>,
    x: T,
    k_max: u64,
    tol: T,
) -> Result<DiscreteContinuum, ContinuumError> {
    if x == T::zero() {
        return Err(ContinuumError::ZeroPoint);
    }
    if !(tol > T::zero()) {
        return Err(ContinuumError::BadTolerance);
    }
    let k_max = k_max.max(10);
    let here = run_models(seq, x, k_max / 10, k_max, tol)?;
    let col = |m: &Mat2<f64>| vec_norm(m.col(0));
    let signs = {
        let (a, b) = (here.discrete_late.col(0), here.continuum_late.col(0));
        a[0].signum() == b[0].signum() && a[1].signum() == b[1].signum()
    };

    let xf = x.abs().to_f64_lossy();
    let ladder = geometric_ladder(xf / 10f64.sqrt(), xf * 10f64.sqrt(), 7);
    let alpha = seq.alpha().to_f64_lossy();
    let mut disc = Vec::new();
    let mut cont = Vec::new();
    let mut closed = Vec::new();
    for &xl in &ladder {
        let settle = (settle_index(alpha, xl, 0.01) as u64).clamp(k_max, 4 * k_max.max(1_000_000));
        let xt = T::lit(xl);
        let m = run_models(seq, xt, (settle / 10).max(1), settle, tol)?;
        disc.push(col(&m.discrete_late));
        cont.push(col(&m.continuum_late));
        let cf = closed_form_limit(&OscillatoryParams::new(seq.alpha(), xt)?, Mat2::identity())?;
        closed.push(vec_norm(cf.g_limit.col(0)).to_f64_lossy());
    }
    let slope = |v: &[f64]| log_log_slope(&ladder, v).unwrap_or(f64::NAN);
    Ok(DiscreteContinuum {
        x: xf,
        k_max,
        discrete_g: here.discrete_late,
        continuum_g: here.continuum_late,
        discrete_growth: col(&here.discrete_late) / col(&here.discrete_early),
        continuum_growth: col(&here.continuum_late) / col(&here.continuum_early),
        first_column_signs_agree: signs,
        discrete_slope: slope(&disc),
        continuum_slope: slope(&cont),
        closed_form_slope: slope(&closed),
        ladder,
        discrete_first_column: disc,
        continuum_first_column: cont,
        closed_form_first_column: closed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_weights_sum_to_two() {
        let s: f64 = gauss_legendre().iter().map(|(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_finder() {
        let z = next_zero(Kind::Cos, 0.3f64, 1.0);
        assert!(z > 1.0 && (z + 0.3).cos().abs() < 1e-14);
        assert!(next_zero(Kind::Sin, 0.0f64, std::f64::consts::PI) > std::f64::consts::PI);
    }

    #[test]
    fn divergent_without_phase_speed() {
        let p = OscillatoryParams::with_gamma(0.6, 0.0, 0.2).unwrap();
        assert!(matches!(
            oscillatory_integral(Kind::Cos, &p, 1.0, Upper::Infinite),
            Err(ContinuumError::Divergent { .. })
        ));
        let v = oscillatory_integral(Kind::Cos, &p, 1.0, Upper::Finite(std::f64::consts::E)).unwrap();
        assert!((v - 0.3 * 0.2f64.cos()).abs() < 1e-15);
    }
}
