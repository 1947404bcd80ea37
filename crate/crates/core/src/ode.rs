//! Adaptive Dormand–Prince 5(4) integrator for small fixed-size systems.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at t = {last_good_t}")]
    StepUnderflow { last_good_t: f64 },
    #[error("step budget exhausted at t = {last_good_t}")]
    TooManySteps { last_good_t: f64 },
    #[error("non-finite state at t = {last_good_t}")]
    NonFinite { last_good_t: f64 },
}

impl OdeError {
    pub fn last_good_t(&self) -> f64 {
        match *self {
            OdeError::StepUnderflow { last_good_t }
            | OdeError::TooManySteps { last_good_t }
            | OdeError::NonFinite { last_good_t } => last_good_t,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Tolerance<T> {
    pub rtol: T,
    pub atol: T,
    /// Smallest admissible step relative to `|t|`.
    pub min_step_rel: T,
    pub max_steps: usize,
}

impl<T: Scalar> Tolerance<T> {
    pub fn new(tol: T) -> Self {
        Self { rtol: tol, atol: tol, min_step_rel: T::lit(1e-12), max_steps: 5_000_000 }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy<T: Scalar, const N: usize>(y: &[T; N], terms: &[(T, &[T; N])]) -> [T; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += *c * k[i];
        }
    }
    out
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction).
pub fn integrate<T, const N: usize, F>(
    mut f: F,
    t0: T,
    t1: T,
    y0: [T; N],
    tol: &Tolerance<T>,
) -> Result<([T; N], OdeStats), OdeError>
where
    T: Scalar,
    F: FnMut(T, &[T; N]) -> [T; N],
{
    let mut stats = OdeStats::default();
    if t1 == t0 {
        return Ok((y0, stats));
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let l = T::lit;

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);

    let scale = |y: &[T; N]| -> T {
        let mut m = T::zero();
        for v in y {
            m = m.max(v.abs());
        }
        tol.atol + tol.rtol * m
    };
    let mut h = {
        let d0 = scale(&y);
        let mut fmax = T::zero();
        for v in &k1 {
            fmax = fmax.max(v.abs());
        }
        let guess = if fmax > T::zero() { l(0.01) * d0 / fmax } else { span * l(1e-3) };
        guess.min(span * l(0.1)).max(span * l(1e-12))
    };

    let mut steps = 0usize;
    loop {
        let remaining = (t1 - t) * dir;
        if remaining <= T::zero() {
            return Ok((y, stats));
        }
        steps += 1;
        if steps > tol.max_steps {
            return Err(OdeError::TooManySteps { last_good_t: t.to_f64_lossy() });
        }
        let last = h >= remaining;
        let hs = if last { remaining } else { h };
        let hd = hs * dir;

        let k2 = f(t + l(C2) * hd, &axpy(&y, &[(hd * l(A21), &k1)]));
        let k3 = f(t + l(C3) * hd, &axpy(&y, &[(hd * l(A31), &k1), (hd * l(A32), &k2)]));
        let k4 = f(
            t + l(C4) * hd,
            &axpy(&y, &[(hd * l(A41), &k1), (hd * l(A42), &k2), (hd * l(A43), &k3)]),
        );
        let k5 = f(
            t + l(C5) * hd,
            &axpy(
                &y,
                &[(hd * l(A51), &k1), (hd * l(A52), &k2), (hd * l(A53), &k3), (hd * l(A54), &k4)],
            ),
        );
        let k6 = f(
            t + hd,
            &axpy(
                &y,
                &[
                    (hd * l(A61), &k1),
                    (hd * l(A62), &k2),
                    (hd * l(A63), &k3),
                    (hd * l(A64), &k4),
                    (hd * l(A65), &k5),
                ],
            ),
        );
        let y_new = axpy(
            &y,
            &[(hd * l(B1), &k1), (hd * l(B3), &k3), (hd * l(B4), &k4), (hd * l(B5), &k5), (hd * l(B6), &k6)],
        );
        let t_new = if last { t1 } else { t + hd };
        let k7 = f(t_new, &y_new);

        let mut err = T::zero();
        for i in 0..N {
            let e = hd
                * (l(E1) * k1[i] + l(E3) * k3[i] + l(E4) * k4[i] + l(E5) * k5[i] + l(E6) * k6[i] + l(E7) * k7[i]);
            let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            if hs <= tol.min_step_rel * t.abs().max(T::one()) {
                return Err(OdeError::NonFinite { last_good_t: t.to_f64_lossy() });
            }
            h = hs * l(0.1);
            stats.rejected += 1;
            continue;
        }

        if err <= T::one() {
            t = t_new;
            y = y_new;
            k1 = k7;
            stats.accepted += 1;
            let grow = if err == T::zero() { l(5.0) } else { (l(0.9) * err.powf(l(-0.2))).min(l(5.0)) };
            h = hs * grow.max(T::one());
        } else {
            stats.rejected += 1;
            h = hs * (l(0.9) * err.powf(l(-0.2))).max(l(0.2));
            if h <= tol.min_step_rel * t.abs().max(T::one()) {
                return Err(OdeError::StepUnderflow { last_good_t: t.to_f64_lossy() });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_one_period() {
        let tol = Tolerance::new(1e-11);
        let (y, _) = integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, 2.0 * std::f64::consts::PI, [1.0, 0.0], &tol)
            .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9 && y[1].abs() < 1e-9);
    }

    #[test]
    fn backward_integration() {
        let tol = Tolerance::new(1e-12);
        let (y, _) = integrate(|_, y: &[f64; 1]| [y[0]], 1.0, 0.0, [1.0f64.exp()], &tol).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn underflow_reports_last_good_time() {
        let mut tol = Tolerance::new(1e-10);
        tol.min_step_rel = 1e-6;
        let r = integrate(|t, y: &[f64; 1]| [y[0] * y[0] / (1.0 - t).max(1e-300)], 0.0, 2.0, [1.0], &tol);
        let e = r.unwrap_err();
        assert!(e.last_good_t() < 1.0);
    }
}
