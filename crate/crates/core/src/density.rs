//! Spectral density `f(x) = 1 / (π C²(x))` from the recurrence, with a
//! tail-extrapolated limit and a raw amplitude cross-estimator.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use thiserror::Error;

use crate::mat2::Mat2;
use crate::ode::{integrate, OdeError, Tolerance};
use crate::recurrence::DeltaStream;
use crate::scalar::{KahanSum, Scalar};
use crate::weights::{WeightRule, WeightSequence};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("the density at x = 0 is a limit and is not estimated directly")]
    ZeroPoint,
    #[error("non-finite spectral point")]
    NonFinitePoint,
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),
    #[error("tail integration failed: {0}")]
    Tail(#[from] OdeError),
}

/// How far the recurrence is run for a given spectral point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy<T> {
    /// Multiple of the crossover index.
    pub kappa: T,
    /// Hard cap on the recurrence length.
    pub n_max: u64,
    /// Floor on the recurrence length.
    pub n_min: u64,
    /// The averaging window is `[window_fraction * N, N]`.
    pub window_fraction: T,
    /// Number of tail extrapolations spread over the window.
    pub checkpoints: usize,
    /// Tail integration stops once the residual oscillation amplitude drops below this.
    pub tail_cutoff: T,
    pub tail_tol: T,
}

impl<T: Scalar> Default for TruncationPolicy<T> {
    fn default() -> Self {
        Self {
            kappa: T::lit(50.0),
            n_max: 100_000_000,
            n_min: 2_000_000,
            window_fraction: T::lit(0.5),
            checkpoints: 5,
            tail_cutoff: T::lit(1e-3),
            tail_tol: T::lit(1e-10),
        }
    }
}

impl<T: Scalar> TruncationPolicy<T> {
    pub fn validate(&self) -> Result<(), DensityError> {
        let bad = |m: &str| Err(DensityError::InvalidPolicy(m.to_string()));
        if !(self.kappa > T::zero() && self.kappa.is_finite()) {
            return bad("kappa must be positive");
        }
        if self.n_min < 1000 {
            return bad("n_min must be at least 1000");
        }
        if self.n_max < self.n_min {
            return bad("n_max must not be below n_min");
        }
        if !(self.window_fraction > T::zero() && self.window_fraction < T::one()) {
            return bad("window_fraction must lie in (0, 1)");
        }
        if self.checkpoints < 2 {
            return bad("need at least two checkpoints");
        }
        if !(self.tail_cutoff > T::zero() && self.tail_cutoff < T::one()) {
            return bad("tail_cutoff must lie in (0, 1)");
        }
        if !(self.tail_tol > T::zero()) {
            return bad("tail_tol must be positive");
        }
        Ok(())
    }

    /// Uncapped length `kappa * (alpha / 2|x|)^{1/(1-alpha)}`.
    pub fn ideal_length(&self, alpha: T, x: T) -> T {
        let l = T::lit;
        self.kappa * (alpha / (l(2.0) * x.abs())).powf(T::one() / (T::one() - alpha))
    }

    /// Even recurrence length `N(x)` and whether the cap was hit.
    pub fn truncation(&self, alpha: T, x: T) -> (u64, bool) {
        let ideal = self.ideal_length(alpha, x).ceil();
        let capped = !(ideal <= T::idx(self.n_max));
        let n = if capped {
            self.n_max
        } else {
            ideal.to_u64().unwrap_or(self.n_max).max(self.n_min)
        };
        (n + (n & 1), capped)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityEstimate<T> {
    pub x: T,
    /// Estimate of `Δ(x) = C²(x)`.
    pub delta: T,
    pub f: T,
    pub n_used: u64,
    /// Max minus min of the extrapolated limits across the window.
    pub spread: T,
    /// Raw window mean of `k^α (P_{2k-1}² + P_{2k}²)`.
    pub amplitude_delta: T,
    pub capped: bool,
    pub converged: bool,
}

/// Coefficients of one block step expressed in the co-rotating frame.
struct FrameStep<T> {
    /// Residual rotation rate.
    n1: T,
    /// Amplitude of the oscillating reflection part.
    h: T,
    /// Phase offset of the reflection part.
    phi: T,
}

fn frame_step<T: Scalar>(alpha: T, x: T, k: T) -> FrameStep<T> {
    let l = T::lit;
    let two = l(2.0);
    let p = x / k.powf(alpha);
    let eps = -(-alpha * (T::one() / k).ln_1p()).exp_m1();
    let d = T::one() - eps;
    let r = d.sqrt();
    let (s, c) = p.sin_cos();
    let p2 = p * p;
    let s_minus_cp = if p.abs() < l(1e-3) {
        p2 * p / l(3.0) - p2 * p2 * p / l(30.0)
    } else {
        s - c * p
    };
    let n2 = (eps * (c - s * p) + c * d * p2) / (two * r);
    let n3 = (-eps * (c * p + s) - s * d * p2) / (two * r);
    let n1 = ((T::one() + d) * s_minus_cp - s * d * p2) / (two * r);
    FrameStep { n1, h: n2.hypot(n3), phi: n3.atan2(n2) }
}

/// Continuous model of the block recursion past index `k0`, with coefficients
/// sampled half a block behind.
struct TailModel<T> {
    alpha: T,
    x: T,
    s: T,
    base: T,
}

impl<T: Scalar> TailModel<T> {
    fn new(alpha: T, x: T, k0: T) -> Self {
        let s = T::one() - alpha;
        Self { alpha, x, s, base: (k0 - T::lit(0.5)).powf(s) }
    }

    /// Frame angle accumulated since the anchor block.
    fn tau(&self, km: T) -> T {
        -self.x * (km.powf(self.s) - self.base) / self.s
    }

    fn coefficient(&self, k: T) -> (Mat2<T>, FrameStep<T>, T) {
        let km = k - T::lit(0.5);
        let st = frame_step(self.alpha, self.x, km);
        let phase = st.phi + T::lit(2.0) * self.tau(km);
        (Mat2::s().scale(st.n1) + Mat2::reflection(phase).scale(st.h), st, phase)
    }

    /// Oscillation amplitude relative to the phase speed.
    fn ratio(&self, k: T) -> T {
        let km = k - T::lit(0.5);
        let st = frame_step(self.alpha, self.x, km);
        st.h / (T::lit(2.0) * self.x.abs() * km.powf(-self.alpha))
    }
}

/// Limit of `k^α (P_{2k-1}² + P_{2k}²)` extrapolated from `v = (P_{2k-1}, P_{2k})`.
///
/// The co-rotating frame is anchored at block `k`; its absolute angle drops out
/// of the norm, so no phase sum over earlier blocks is needed.
pub fn extrapolate_amplitude<T: Scalar>(alpha: T, x: T, k: u64, v: [T; 2], cutoff: T, tol: T) -> Result<T, OdeError> {
    let kf = T::idx(k);
    let scale = kf.powf(alpha / T::lit(2.0));
    let sign = if k % 2 == 1 { -T::one() } else { T::one() };
    let y = [sign * scale * v[0], sign * scale * v[1]];
    let model = TailModel::new(alpha, x, kf);
    let mut k_far = kf;
    while model.ratio(k_far) >= cutoff {
        k_far *= T::lit(2.0);
    }
    let (z, _) = integrate(
        |t, z: &[T; 2]| model.coefficient(t).0.apply(*z),
        kf,
        k_far,
        y,
        &Tolerance::new(tol),
    )?;

    let (_, st, phase) = model.coefficient(k_far);
    let speed = -T::lit(2.0) * x * (k_far - T::lit(0.5)).powf(-alpha);
    // Reflection at angle phase + π/2, written out so that x -> -x mirrors exactly.
    let (sn, cs) = phase.sin_cos();
    let q = Mat2::new(-sn, cs, cs, sn).scale(st.h / speed);
    let zi = (Mat2::identity() + q).apply(z);
    Ok(zi[0] * zi[0] + zi[1] * zi[1])
}

/// Estimate `C²(x)` and `f(x)` at a nonzero spectral point.
pub fn estimate_density<T: Scalar>(
    seq: &WeightSequence<T>,
    x: T,
    policy: &TruncationPolicy<T>,
) -> Result<DensityEstimate<T>, DensityError> {
    policy.validate()?;
    if x == T::zero() {
        return Err(DensityError::ZeroPoint);
    }
    if !x.is_finite() {
        return Err(DensityError::NonFinitePoint);
    }
    let alpha = seq.alpha();
    let (n, capped) = policy.truncation(alpha, x);
    let blocks = n / 2;
    let k_lo = ((policy.window_fraction * T::idx(blocks)).ceil().to_u64().unwrap_or(1)).clamp(1, blocks);
    let m = policy.checkpoints as u64;
    let checkpoints: Vec<u64> = (0..m).map(|i| k_lo + (blocks - k_lo) * i / (m - 1)).collect();

    let mut p_odd = x / seq.b0();
    let mut p_even = x * p_odd - seq.b0();
    let mut bk = T::one();
    let mut amp = KahanSum::new();
    let mut limits = Vec::with_capacity(checkpoints.len());
    let mut next_cp = 0usize;

    for k in 1..=blocks {
        if k >= k_lo {
            amp.add(bk * (p_odd * p_odd + p_even * p_even));
        }
        while next_cp < checkpoints.len() && checkpoints[next_cp] == k {
            limits.push(extrapolate_amplitude(
                alpha,
                x,
                k,
                [p_odd, p_even],
                policy.tail_cutoff,
                policy.tail_tol,
            )?);
            next_cp += 1;
        }
        if k == blocks {
            break;
        }
        let b_next = T::idx(k + 1).powf(alpha);
        let odd = (x * p_even - bk * p_odd) / bk;
        let even = (x * odd - bk * p_even) / b_next;
        p_odd = odd;
        p_even = even;
        bk = b_next;
    }

    let count = T::from_usize(limits.len()).expect("small count");
    let delta = limits.iter().fold(T::zero(), |a, &v| a + v) / count;
    let lo = limits.iter().fold(T::infinity(), |a, &v| a.min(v));
    let hi = limits.iter().fold(T::neg_infinity(), |a, &v| a.max(v));
    let spread = hi - lo;
    let amplitude_delta = amp.value() / T::idx(blocks - k_lo + 1);
    let healthy = delta.is_finite() && delta > T::zero();
    let converged = healthy && !(capped && spread / delta > T::lit(0.2));
    Ok(DensityEstimate {
        x,
        delta,
        f: T::one() / (T::PI() * delta),
        n_used: n,
        spread,
        amplitude_delta,
        capped,
        converged,
    })
}

/// Window mean of `k^α (P_{2k-1}(x)² + P_{2k}(x)²)` over `k_window`.
pub fn amplitude_estimator<T: Scalar>(seq: &WeightSequence<T>, x: T, k_window: RangeInclusive<u64>) -> T {
    let (k_lo, k_hi) = (*k_window.start(), *k_window.end());
    assert!(k_lo >= 1 && k_lo <= k_hi, "empty or invalid block window");
    let alpha = seq.alpha();
    let mut p_odd = x / seq.b0();
    let mut p_even = x * p_odd - seq.b0();
    let mut bk = T::one();
    let mut acc = KahanSum::new();
    for k in 1..=k_hi {
        if k >= k_lo {
            acc.add(bk * (p_odd * p_odd + p_even * p_even));
        }
        let b_next = T::idx(k + 1).powf(alpha);
        let odd = (x * p_even - bk * p_odd) / bk;
        p_even = (x * odd - bk * p_even) / b_next;
        p_odd = odd;
        bk = b_next;
    }
    acc.value() / T::idx(k_hi - k_lo + 1)
}

/// Mean and max-minus-min of the raw `Δ_n` samples over `n ∈ [⌈fraction·n_end⌉, n_end]`.
pub fn window_delta<T: Scalar, W: WeightRule<T> + ?Sized>(rule: &W, x: T, n_end: u64, fraction: f64) -> (T, T) {
    let n_lo = ((fraction * n_end as f64).ceil() as u64).max(1);
    let mut acc = KahanSum::new();
    let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
    for s in DeltaStream::new(rule, x).take(n_end as usize).skip(n_lo as usize - 1) {
        acc.add(s.delta);
        lo = lo.min(s.delta);
        hi = hi.max(s.delta);
    }
    (acc.value() / T::idx(n_end - n_lo + 1), hi - lo)
}

/// One estimate per grid point, in grid order.
pub fn sweep<T: Scalar>(
    seq: &WeightSequence<T>,
    grid: &[T],
    policy: &TruncationPolicy<T>,
) -> Result<Vec<DensityEstimate<T>>, DensityError> {
    policy.validate()?;
    grid.par_iter().map(|&x| estimate_density(seq, x, policy)).collect()
}
