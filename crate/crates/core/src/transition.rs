//! Power law of the density at the origin: prediction, fit and classification.

use std::fmt;

use thiserror::Error;

use crate::density::{sweep, DensityError, DensityEstimate, TruncationPolicy};
use crate::scalar::{fit_line, geometric_ladder};
use crate::weights::WeightSequence;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransitionError {
    #[error("alpha = {0} lies outside the open interval (1/2, 1)")]
    AlphaOutOfRange(f64),
    #[error("fit window [{0}, {1}] must satisfy 0 < x_lo < x_hi")]
    BadWindow(f64, f64),
    #[error("at least 10 grid points are required, got {0}")]
    TooFewPoints(usize),
    #[error("only {converged} of {requested} points converged; at least 10 are needed")]
    InsufficientData { converged: usize, requested: usize },
    #[error(transparent)]
    Density(#[from] DensityError),
}

fn check_alpha(alpha: f64) -> Result<(), TransitionError> {
    if alpha > 0.5 && alpha < 1.0 {
        Ok(())
    } else {
        Err(TransitionError::AlphaOutOfRange(alpha))
    }
}

/// `(3α - 2) / (1 - α)`.
pub fn predicted_exponent(alpha: f64) -> Result<f64, TransitionError> {
    check_alpha(alpha)?;
    Ok((3.0 * alpha - 2.0) / (1.0 - alpha))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionClass {
    Diverges,
    FiniteNonzero,
    Vanishes,
}

impl TransitionClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TransitionClass::Diverges => "diverges",
            TransitionClass::FiniteNonzero => "finite_nonzero",
            TransitionClass::Vanishes => "vanishes",
        }
    }

    /// Sign of the exponent this class implies.
    pub fn sign(self) -> i8 {
        match self {
            TransitionClass::Diverges => -1,
            TransitionClass::FiniteNonzero => 0,
            TransitionClass::Vanishes => 1,
        }
    }
}

impl fmt::Display for TransitionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Limit of the density at `x = 0`. `α` within `1e-12` of `2/3` counts as critical.
pub fn classify(alpha: f64) -> Result<TransitionClass, TransitionError> {
    check_alpha(alpha)?;
    let d = alpha - 2.0 / 3.0;
    Ok(if d.abs() <= 1e-12 {
        TransitionClass::FiniteNonzero
    } else if d < 0.0 {
        TransitionClass::Diverges
    } else {
        TransitionClass::Vanishes
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFit {
    pub alpha: f64,
    pub slope: f64,
    /// `ln f_0`.
    pub intercept: f64,
    pub residual_rms: f64,
    pub x_window: (f64, f64),
    pub points_used: usize,
    pub predicted: f64,
    pub estimates: Vec<DensityEstimate<f64>>,
}

impl ExponentFit {
    pub fn f0(&self) -> f64 {
        self.intercept.exp()
    }
}

/// Smallest relative uncertainty assigned to a point in the weighted fit.
pub const SIGMA_FLOOR: f64 = 1e-3;

const WINDOWS: [(f64, (f64, f64)); 5] = [
    (0.55, (1e-6, 1e-4)),
    (0.6, (1e-4, 1e-2)),
    (2.0 / 3.0, (1e-2, 1e-1)),
    (0.75, (5e-3, 5e-2)),
    (0.8, (5e-3, 5e-2)),
];

/// Tabulated fit window for `α`; untabulated values use the nearest entry.
pub fn default_window(alpha: f64) -> Result<(f64, f64), TransitionError> {
    check_alpha(alpha)?;
    let (_, w) = WINDOWS
        .iter()
        .min_by(|a, b| (a.0 - alpha).abs().total_cmp(&(b.0 - alpha).abs()))
        .expect("table is non-empty");
    Ok(*w)
}

/// Truncation used for exponent fits: a fixed two-million term run per point.
pub fn fit_policy() -> TruncationPolicy<f64> {
    TruncationPolicy { n_max: 2_000_000, n_min: 2_000_000, ..TruncationPolicy::default() }
}

/// Weighted least-squares line through `(ln x, ln f)` over converged points of a log grid.
pub fn fit_exponent(
    seq: &WeightSequence<f64>,
    policy: &TruncationPolicy<f64>,
    window: (f64, f64),
    points: usize,
) -> Result<ExponentFit, TransitionError> {
    let alpha = seq.alpha();
    let predicted = predicted_exponent(alpha)?;
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(TransitionError::BadWindow(lo, hi));
    }
    if points < 10 {
        return Err(TransitionError::TooFewPoints(points));
    }
    policy.validate()?;
    let grid = geometric_ladder(lo, hi, points);
    let estimates: Vec<DensityEstimate<f64>> = sweep(seq, &grid, policy)?;
    let good: Vec<&DensityEstimate<f64>> = estimates.iter().filter(|e| e.converged && e.f > 0.0).collect();
    if good.len() < 10 {
        return Err(TransitionError::InsufficientData { converged: good.len(), requested: points });
    }
    let lx: Vec<f64> = good.iter().map(|e| e.x.ln()).collect();
    let ly: Vec<f64> = good.iter().map(|e| e.f.ln()).collect();
    let w: Vec<f64> = good
        .iter()
        .map(|e| {
            let sigma = (e.spread / e.delta).max(SIGMA_FLOOR);
            1.0 / (sigma * sigma)
        })
        .collect();
    let line = fit_line(&lx, &ly, Some(&w)).ok_or(TransitionError::InsufficientData {
        converged: good.len(),
        requested: points,
    })?;
    Ok(ExponentFit {
        alpha,
        slope: line.slope,
        intercept: line.intercept,
        residual_rms: line.residual_rms,
        x_window: window,
        points_used: good.len(),
        predicted,
        estimates,
    })
}
