//! Eigen-structure of the two-step blocks, phase sums, the rotation/residual
//! factorization of block products, and tail sums of the oscillating part.

use num_complex::Complex;
use thiserror::Error;

use crate::continuum::{oscillatory_integral, ContinuumError, Kind, OscillatoryParams, Upper};
use crate::mat2::{vec_norm, Mat2};
use crate::recurrence::block_a;
use crate::scalar::{fit_line, KahanSum, Scalar};
use crate::weights::WeightSequence;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("block {k} has real eigenvalues; complex regime starts at k = {min_valid_k}")]
    RealRegime { k: u64, min_valid_k: u64 },
    #[error("spectral point must be nonzero")]
    ZeroPoint,
    #[error("need at least two samples with positive tail norm")]
    TooFewSamples,
    #[error(transparent)]
    Continuum(#[from] ContinuumError),
}

/// Eigenvalues of `A_k` in the complex (oscillating) regime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenData<T> {
    pub k: u64,
    pub omega: T,
    pub lambda_plus: Complex<T>,
    pub lambda_minus: Complex<T>,
    pub modulus: T,
    /// Argument of `lambda_plus`, in `(0, π)`.
    pub phase_plus: T,
    /// Argument of `lambda_minus`, in `(π, 2π)`.
    pub phase_minus: T,
    /// `π - phase_plus`, computed without cancellation.
    pub phase_defect: T,
}

struct BlockInvariants<T> {
    /// `x² / ((k+1) k)^α`.
    q: T,
    /// `1 - k^α / (k+1)^α`.
    eps: T,
}

fn block_invariants<T: Scalar>(alpha: T, k: u64, x: T) -> BlockInvariants<T> {
    let kf = T::idx(k);
    let q = x * x / ((kf + T::one()) * kf).powf(alpha);
    let eps = -(-alpha * (T::one() / kf).ln_1p()).exp_m1();
    BlockInvariants { q, eps }
}

/// `4 det A_k - ω_k²`, written as `4q - (ε + q)²` to avoid cancellation.
fn discriminant<T: Scalar>(b: &BlockInvariants<T>) -> T {
    let t = b.eps + b.q;
    T::lit(4.0) * b.q - t * t
}

fn is_complex<T: Scalar>(alpha: T, k: u64, x: T) -> bool {
    discriminant(&block_invariants(alpha, k, x)) > T::zero()
}

/// Smallest `k` from which every block has complex eigenvalues.
pub fn min_complex_index<T: Scalar>(seq: &WeightSequence<T>, x: T) -> Result<u64, AsymptoticsError> {
    if x == T::zero() {
        return Err(AsymptoticsError::ZeroPoint);
    }
    let alpha = seq.alpha();
    if is_complex(alpha, 1, x) {
        return Ok(1);
    }
    let mut hi = 2u64;
    while !is_complex(alpha, hi, x) {
        hi = hi.checked_mul(2).ok_or(AsymptoticsError::RealRegime { k: hi, min_valid_k: u64::MAX })?;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if is_complex(alpha, mid, x) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

pub fn eigen_a<T: Scalar>(seq: &WeightSequence<T>, k: u64, x: T) -> Result<EigenData<T>, AsymptoticsError> {
    if x == T::zero() {
        return Err(AsymptoticsError::ZeroPoint);
    }
    let b = block_invariants(seq.alpha(), k, x);
    let disc = discriminant(&b);
    if disc <= T::zero() {
        return Err(AsymptoticsError::RealRegime { k, min_valid_k: min_complex_index(seq, x)? });
    }
    let two = T::lit(2.0);
    let omega = b.q + b.eps - two;
    let re = (b.q + b.eps) / two - T::one();
    let im = disc.sqrt() / two;
    let lambda_plus = Complex::new(re, im);
    let phase_plus = im.atan2(re);
    Ok(EigenData {
        k,
        omega,
        lambda_plus,
        lambda_minus: lambda_plus.conj(),
        modulus: re.hypot(im),
        phase_plus,
        phase_minus: two * T::PI() - phase_plus,
        phase_defect: im.atan2(-re),
    })
}

/// Eigenvector `(1, k^α (λ + 1) / x)` of `A_k` for eigenvalue `λ`.
pub fn eigenvector<T: Scalar>(seq: &WeightSequence<T>, k: u64, x: T, lambda: Complex<T>) -> [Complex<T>; 2] {
    [Complex::new(T::one(), T::zero()), (lambda + T::one()) * (seq.pair(k) / x)]
}

/// `lim_k (Σ_{n≤k} n^{-α} - k^{1-α}/(1-α))`, i.e. the zeta value at `α`, by Euler–Maclaurin.
pub fn power_sum_offset<T: Scalar>(alpha: T) -> T {
    const M: u64 = 32;
    // B_{2j} / (2j)!
    const COEF: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let mut acc = KahanSum::new();
    for n in 1..M {
        acc.add(T::idx(n).powf(-alpha));
    }
    let m = T::idx(M);
    acc.add(m.powf(T::one() - alpha) / (alpha - T::one()));
    acc.add(m.powf(-alpha) / T::lit(2.0));
    let mut rising = alpha;
    for (j, c) in COEF.iter().enumerate() {
        let p = T::idx(2 * j as u64 + 1);
        acc.add(T::lit(*c) * rising * m.powf(-alpha - p));
        rising = rising * (alpha + p) * (alpha + p + T::one());
    }
    acc.value()
}

/// Constant `c` in `t_k = -x Σ_{n≤k} n^{-α} = -x k^{1-α}/(1-α) + x c + o(1)`.
pub fn rotation_phase_constant<T: Scalar>(alpha: T) -> T {
    -power_sum_offset(alpha)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSum<T> {
    /// First block of the complex regime.
    pub start: u64,
    pub k: u64,
    /// `Σ_{j=start}^{k-1} phase_plus(j)`.
    pub sum: T,
    /// `sum - πk + |x| k^{1-α}/(1-α)`.
    pub residual: T,
    /// Extrapolated limit of `-residual`.
    pub fitted_c: T,
    /// Spread of `-residual` across the fitting window.
    pub c_spread: T,
}

/// Euler-summed eigenphases, with the constant term fitted on `[k/2, k]`.
pub fn phase_sum<T: Scalar>(seq: &WeightSequence<T>, x: T, k: u64) -> Result<PhaseSum<T>, AsymptoticsError> {
    let start = min_complex_index(seq, x)?;
    if k < start {
        return Err(AsymptoticsError::RealRegime { k, min_valid_k: start });
    }
    let alpha = seq.alpha();
    let s = T::one() - alpha;
    let ax = x.abs();
    let pi = T::PI();
    const SAMPLES: u64 = 16;
    let lo = (k / 2).max(start);
    let marks: Vec<u64> = (0..SAMPLES).map(|i| lo + (k - lo) * i / (SAMPLES - 1)).collect();
    let mut next = 0usize;
    let mut defects = KahanSum::new();
    let mut us = Vec::new();
    let mut cs = Vec::new();
    let mut j = start;
    loop {
        while next < marks.len() && marks[next] == j {
            let kf = T::idx(j);
            let c = pi * T::idx(start) + defects.value() - ax * kf.powf(s) / s;
            us.push(kf.powf(-alpha).to_f64_lossy());
            cs.push(c.to_f64_lossy());
            next += 1;
        }
        if j >= k {
            break;
        }
        defects.add(eigen_a(seq, j, x)?.phase_defect);
        j += 1;
    }
    let d = defects.value();
    let sum = pi * T::idx(k - start) - d;
    let residual = sum - pi * T::idx(k) + ax * T::idx(k).powf(s) / s;
    let fitted = if us.len() >= 3 {
        fit_line(&us, &cs, None).map_or(-residual, |f| T::lit(f.intercept))
    } else {
        -residual
    };
    let lo_c = cs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi_c = cs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(PhaseSum {
        start,
        k,
        sum,
        residual,
        fitted_c: fitted,
        c_spread: T::lit((hi_c - lo_c).max(0.0)),
    })
}

/// `A_k ... A_1 = ((-1)^k / (k+1)^{α/2}) F_k G_k` with `F_k = exp(t_k S)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductFactorization<T> {
    pub alpha: T,
    pub k: u64,
    pub product: Mat2<T>,
    pub f: Mat2<T>,
    pub g: Mat2<T>,
    pub t_k: T,
}

impl<T: Scalar> ProductFactorization<T> {
    pub fn reconstruct(&self) -> Mat2<T> {
        let sign = if self.k % 2 == 1 { -T::one() } else { T::one() };
        (self.f * self.g).scale(sign / T::idx(self.k + 1).powf(self.alpha / T::lit(2.0)))
    }

    /// `‖G e_1‖`.
    pub fn first_column_norm(&self) -> T {
        vec_norm(self.g.col(0))
    }
}

/// Walks `k = 1, 2, ...` carrying the exact block product and the phase `t_k`.
pub struct ProductWalk<'a, T> {
    seq: &'a WeightSequence<T>,
    x: T,
    k: u64,
    product: Mat2<T>,
    t: KahanSum<T>,
}

impl<'a, T: Scalar> ProductWalk<'a, T> {
    pub fn new(seq: &'a WeightSequence<T>, x: T) -> Self {
        Self { seq, x, k: 0, product: Mat2::identity(), t: KahanSum::new() }
    }

    pub fn advance(&mut self) {
        self.k += 1;
        self.product = block_a(self.seq, self.k, self.x) * self.product;
        self.t.add(-self.x / self.seq.pair(self.k));
    }

    pub fn advance_to(&mut self, k: u64) {
        while self.k < k {
            self.advance();
        }
    }

    pub fn factorization(&self) -> ProductFactorization<T> {
        let k = self.k;
        let t_k = self.t.value();
        let f = Mat2::rotation(t_k);
        let sign = if k % 2 == 1 { -T::one() } else { T::one() };
        let scale = sign * T::idx(k + 1).powf(self.seq.alpha() / T::lit(2.0));
        ProductFactorization { alpha: self.seq.alpha(), k, product: self.product, f, g: f.transpose() * self.product.scale(scale), t_k }
    }
}

pub fn factorize_product<T: Scalar>(
    seq: &WeightSequence<T>,
    x: T,
    k: u64,
) -> Result<ProductFactorization<T>, AsymptoticsError> {
    if x == T::zero() {
        return Err(AsymptoticsError::ZeroPoint);
    }
    let mut w = ProductWalk::new(seq, x);
    w.advance_to(k.max(1));
    Ok(w.factorization())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CauchyReport {
    pub k: Vec<u64>,
    /// `‖G(2k) - G(k)‖`.
    pub gap: Vec<f64>,
    pub det_g: Vec<f64>,
    pub slope: f64,
}

/// Doubling-gap convergence check of `G(k)` on a geometric set of `k`.
pub fn cauchy_check<T: Scalar>(
    seq: &WeightSequence<T>,
    x: T,
    k_lo: u64,
    k_hi: u64,
    samples: usize,
) -> Result<CauchyReport, AsymptoticsError> {
    if x == T::zero() {
        return Err(AsymptoticsError::ZeroPoint);
    }
    let mut base: Vec<u64> = crate::scalar::geometric_ladder(k_lo as f64, k_hi as f64, samples)
        .into_iter()
        .map(|v| v.round() as u64)
        .collect();
    base.dedup();
    let mut stops: Vec<u64> = base.iter().flat_map(|&k| [k, 2 * k]).collect();
    stops.sort_unstable();
    stops.dedup();
    let mut walk = ProductWalk::new(seq, x);
    let mut at = std::collections::BTreeMap::new();
    for &k in &stops {
        walk.advance_to(k);
        at.insert(k, walk.factorization().g);
    }
    let gap: Vec<f64> = base.iter().map(|k| (at[&(2 * k)] - at[k]).norm().to_f64_lossy()).collect();
    let det_g: Vec<f64> = base.iter().map(|k| at[k].det().to_f64_lossy()).collect();
    let xs: Vec<f64> = base.iter().map(|&k| k as f64).collect();
    let slope = crate::scalar::log_log_slope(&xs, &gap).ok_or(AsymptoticsError::TooFewSamples)?;
    Ok(CauchyReport { k: base, gap, det_g, slope })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailReport {
    pub n: Vec<u64>,
    /// `‖Σ_{j≥n} H_j‖`.
    pub q_norm: Vec<f64>,
    /// Bound on the Euler–Maclaurin remainder beyond the direct sum.
    pub remainder_bound: f64,
    pub n_far: u64,
    pub slope: f64,
}

/// Tail sums of `H_j = (α / 2j) (cos θ_j P + sin θ_j Q)` with `θ_j = β j^s + γ`.
pub fn tail_check<T: Scalar>(seq: &WeightSequence<T>, x: T, samples: &[u64]) -> Result<TailReport, AsymptoticsError> {
    if x == T::zero() {
        return Err(AsymptoticsError::ZeroPoint);
    }
    let mut n: Vec<u64> = samples.iter().copied().filter(|&v| v >= 1).collect();
    n.sort_unstable();
    n.dedup();
    if n.len() < 2 {
        return Err(AsymptoticsError::TooFewSamples);
    }
    let params = OscillatoryParams::new(seq.alpha(), x)?;
    let alpha = seq.alpha();
    let n_far = n[n.len() - 1].saturating_mul(16);
    let m = T::idx(n_far + 1);

    // Beyond n_far: integral + half end term, remainder bounded by ∫|H'| / 2.
    let ci = oscillatory_integral(Kind::Cos, &params, m, Upper::Infinite)?;
    let si = oscillatory_integral(Kind::Sin, &params, m, Upper::Infinite)?;
    let h_at = |j: T| Mat2::reflection(params.phase(j)).scale(alpha / (T::lit(2.0) * j));
    let mut acc = [KahanSum::new(), KahanSum::new()];
    let end = h_at(m).scale(T::lit(0.5));
    acc[0].add(ci + end.a11);
    acc[1].add(si + end.a12);
    let s = params.s;
    let beta_abs = params.beta.abs().to_f64_lossy();
    let mf = m.to_f64_lossy();
    let a = alpha.to_f64_lossy();
    let remainder_bound = 0.25 * a * (beta_abs * s.to_f64_lossy() * mf.powf(-a) / a + 1.0 / mf);

    let mut q_norm = vec![0.0; n.len()];
    let mut idx = n.len();
    let mut j = n_far;
    while idx > 0 {
        let h = h_at(T::idx(j));
        acc[0].add(h.a11);
        acc[1].add(h.a12);
        if j == n[idx - 1] {
            idx -= 1;
            q_norm[idx] = acc[0].value().hypot(acc[1].value()).to_f64_lossy();
        }
        j -= 1;
    }
    let xs: Vec<f64> = n.iter().map(|&v| v as f64).collect();
    let slope = crate::scalar::log_log_slope(&xs, &q_norm).ok_or(AsymptoticsError::TooFewSamples)?;
    Ok(TailReport { n, q_norm, remainder_bound, n_far, slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_values() {
        // Independent high-precision references.
        assert!((power_sum_offset(0.6f64) - (-1.952_661_448_224_000_6)).abs() < 1e-12);
        assert!((power_sum_offset(0.5f64) - (-1.460_354_508_809_586_8)).abs() < 1e-12);
    }

    #[test]
    fn complex_regime_boundary() {
        let w = WeightSequence::new(0.6, 1.0).unwrap();
        let k0 = min_complex_index(&w, 0.01).unwrap();
        assert!(k0 > 1);
        assert!(eigen_a(&w, k0, 0.01).is_ok());
        match eigen_a(&w, k0 - 1, 0.01) {
            Err(AsymptoticsError::RealRegime { min_valid_k, .. }) => assert_eq!(min_valid_k, k0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
