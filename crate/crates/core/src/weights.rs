//! Off-diagonal weight sequences and the four sufficient conditions for
//! absolutely continuous spectrum.

use thiserror::Error;

use crate::scalar::{fit_line, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("alpha = {0} lies outside the open interval (1/2, 1)")]
    AlphaOutOfRange(f64),
    #[error("b0 = {0} must be positive and finite")]
    BadB0(f64),
    #[error("max_n = {0} is too small, need at least 100")]
    MaxNTooSmall(u64),
}

/// Any positive sequence `n -> b_n`.
pub trait WeightRule<T: Scalar>: Send + Sync {
    fn weight(&self, n: u64) -> T;
}

/// Paired power weights: `b_0` given, `b_{2k-1} = b_{2k} = k^alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightSequence<T> {
    alpha: T,
    b0: T,
}

impl<T: Scalar> WeightSequence<T> {
    pub fn new(alpha: T, b0: T) -> Result<Self, WeightError> {
        let half = T::lit(0.5);
        if !(alpha > half && alpha < T::one()) {
            return Err(WeightError::AlphaOutOfRange(alpha.to_f64_lossy()));
        }
        if !(b0 > T::zero() && b0.is_finite()) {
            return Err(WeightError::BadB0(b0.to_f64_lossy()));
        }
        Ok(Self { alpha, b0 })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn b0(&self) -> T {
        self.b0
    }

    /// Same exponent, different `b_0`.
    pub fn with_b0(&self, b0: T) -> Result<Self, WeightError> {
        Self::new(self.alpha, b0)
    }

    /// `k^alpha`, the common value of the k-th weight pair.
    #[inline]
    pub fn pair(&self, k: u64) -> T {
        T::idx(k).powf(self.alpha)
    }
}

impl<T: Scalar> WeightRule<T> for WeightSequence<T> {
    #[inline]
    fn weight(&self, n: u64) -> T {
        if n == 0 {
            self.b0
        } else {
            self.pair(n.div_ceil(2))
        }
    }
}

/// Unpaired weights `b_n = n^alpha` for `n >= 1`.
#[derive(Clone, Copy, Debug)]
pub struct PowerWeights<T> {
    pub alpha: T,
    pub b0: T,
}

impl<T: Scalar> WeightRule<T> for PowerWeights<T> {
    fn weight(&self, n: u64) -> T {
        if n == 0 {
            self.b0
        } else {
            T::idx(n).powf(self.alpha)
        }
    }
}

/// Constant weights.
#[derive(Clone, Copy, Debug)]
pub struct ConstantWeights<T>(pub T);

impl<T: Scalar> WeightRule<T> for ConstantWeights<T> {
    fn weight(&self, _n: u64) -> T {
        self.0
    }
}

/// Weights given by a closure.
pub struct FnWeights<F>(pub F);

impl<T: Scalar, F: Fn(u64) -> T + Send + Sync> WeightRule<T> for FnWeights<F> {
    fn weight(&self, n: u64) -> T {
        (self.0)(n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartialSum {
    pub n: u64,
    pub sum: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub max_n: u64,
    pub c1_diverges: bool,
    pub c1_last_weight: f64,
    /// Fitted growth exponent of `b_n` over the last decade.
    pub c1_growth: f64,
    pub c2_ratio_limit: f64,
    /// Fitted decay exponent of `|b_n / b_{n+1} - 1|`.
    pub c2_decay: f64,
    pub c3_partial_sums: Vec<PartialSum>,
    /// Fitted `p` in `summand ~ n^{-p}`.
    pub c3_decay: f64,
    pub c4_partial_sums: Vec<PartialSum>,
    pub c4_decay: f64,
    pub verdicts: [Verdict; 4],
}

const BINS: usize = 20;

/// Mean of `values[n]` over log-spaced bins of the last decade `[max_n/10, max_n]`.
fn decade_bins(values: &[f64], max_n: u64) -> Vec<(f64, f64)> {
    let lo = (max_n / 10).max(1) as f64;
    let hi = max_n as f64;
    let mut out = Vec::with_capacity(BINS);
    for b in 0..BINS {
        let a = (lo * (hi / lo).powf(b as f64 / BINS as f64)).floor() as u64;
        let z = (lo * (hi / lo).powf((b + 1) as f64 / BINS as f64)).floor() as u64;
        let (a, z) = (a.max(1), z.min(max_n));
        if z <= a {
            continue;
        }
        let mean = values[a as usize..z as usize].iter().sum::<f64>() / (z - a) as f64;
        out.push((((a as f64) * (z as f64)).sqrt(), mean));
    }
    out
}

/// Decay exponent `p` of binned positive data; infinite when the tail vanishes.
fn decay_exponent(bins: &[(f64, f64)]) -> f64 {
    let (xs, ys): (Vec<f64>, Vec<f64>) = bins
        .iter()
        .filter(|(_, m)| *m > 0.0)
        .map(|(c, m)| (c.ln(), m.ln()))
        .unzip();
    if xs.len() < bins.len().max(2) / 2 {
        return f64::INFINITY;
    }
    fit_line(&xs, &ys, None).map_or(f64::INFINITY, |f| -f.slope)
}

fn summability_verdict(p: f64, sums: &[f64], max_n: u64, tol: f64) -> Verdict {
    if p > 1.0 + tol {
        return Verdict::Holds;
    }
    if p < 1.0 - tol {
        return Verdict::Fails;
    }
    // Borderline exponent: compare partial-sum growth over the last two decades.
    let at = |n: u64| sums[n as usize];
    let older = at(max_n / 10) - at(max_n / 100);
    let recent = at(max_n) - at(max_n / 10);
    if older > 0.0 && recent / older > 0.9 {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    }
}

fn sample_points(max_n: u64) -> Vec<u64> {
    let mut pts: Vec<u64> = (0..=48)
        .map(|i| (2.0f64 * (max_n as f64 / 2.0).powf(i as f64 / 48.0)).round() as u64)
        .chain([max_n / 100, max_n / 10, max_n])
        .filter(|&n| n >= 2 && n <= max_n)
        .collect();
    pts.sort_unstable();
    pts.dedup();
    pts
}

/// Numerically certify the four sufficient conditions on `n <= max_n`.
pub fn check_conditions<T: Scalar, W: WeightRule<T> + ?Sized>(
    rule: &W,
    max_n: u64,
    slope_tolerance: f64,
) -> Result<ConditionReport, WeightError> {
    if max_n < 100 {
        return Err(WeightError::MaxNTooSmall(max_n));
    }
    let b: Vec<f64> = (0..=max_n + 1).map(|n| rule.weight(n).to_f64_lossy()).collect();
    let m = max_n as usize;

    let mut s3 = vec![0.0; m + 1];
    let mut s4 = vec![0.0; m + 1];
    let mut t3 = vec![0.0; m + 1];
    let mut t4 = vec![0.0; m + 1];
    let mut ratio_dev = vec![0.0; m + 1];
    for n in 1..=m {
        t4[n] = (1.0 / b[n] - 1.0 / b[n - 1]).abs();
        if n >= 2 {
            t3[n] = (b[n - 1] / b[n] - b[n - 2] / b[n - 1]).abs();
        }
        s3[n] = s3[n - 1] + t3[n];
        s4[n] = s4[n - 1] + t4[n];
        ratio_dev[n] = (b[n] / b[n + 1] - 1.0).abs();
    }

    let growth_bins: Vec<(f64, f64)> = decade_bins(&b[..=m], max_n);
    let c1_growth = {
        let (xs, ys): (Vec<f64>, Vec<f64>) =
            growth_bins.iter().map(|(c, v)| (c.ln(), v.ln())).unzip();
        fit_line(&xs, &ys, None).map_or(0.0, |f| f.slope)
    };
    let v1 = if c1_growth > slope_tolerance {
        Verdict::Holds
    } else if c1_growth <= 1e-12 {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };

    let c2_decay = decay_exponent(&decade_bins(&ratio_dev, max_n));
    let v2 = if c2_decay > slope_tolerance {
        Verdict::Holds
    } else if c2_decay < slope_tolerance / 10.0 {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };

    let c3_decay = decay_exponent(&decade_bins(&t3, max_n));
    let c4_decay = decay_exponent(&decade_bins(&t4, max_n));
    let v3 = summability_verdict(c3_decay, &s3, max_n, slope_tolerance);
    let v4 = summability_verdict(c4_decay, &s4, max_n, slope_tolerance);

    let pts = sample_points(max_n);
    let sample = |s: &[f64]| {
        pts.iter()
            .map(|&n| PartialSum { n, sum: s[n as usize] })
            .collect::<Vec<_>>()
    };

    Ok(ConditionReport {
        max_n,
        c1_diverges: v1 == Verdict::Holds,
        c1_last_weight: b[m],
        c1_growth,
        c2_ratio_limit: b[m] / b[m + 1],
        c2_decay,
        c3_partial_sums: sample(&s3),
        c3_decay,
        c4_partial_sums: sample(&s4),
        c4_decay,
        verdicts: [v1, v2, v3, v4],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(WeightSequence::new(0.5, 1.0).is_err());
        assert!(WeightSequence::new(1.0, 1.0).is_err());
        assert!(WeightSequence::new(0.6, 0.0).is_err());
        assert!(WeightSequence::new(0.6, f64::NAN).is_err());
    }

    #[test]
    fn small_max_n_rejected() {
        let w = WeightSequence::new(0.6, 1.0).unwrap();
        assert_eq!(check_conditions(&w, 99, 0.1), Err(WeightError::MaxNTooSmall(99)));
    }
}
