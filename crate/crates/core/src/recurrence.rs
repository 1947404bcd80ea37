//! Three-term recurrence for the polynomials of the first kind, transfer
//! matrices, and the Wronskian-type quantity `Δ_n`.

use crate::mat2::Mat2;
use crate::scalar::Scalar;
use crate::weights::WeightRule;

/// Rolling state `(P_{n-1}(x), P_n(x))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolyState<T> {
    pub n: u64,
    pub p_prev: T,
    pub p_curr: T,
    pub x: T,
}

impl<T: Scalar> PolyState<T> {
    /// State at `n = 1`: `(P_0, P_1) = (1, x / b_0)`.
    pub fn start<W: WeightRule<T> + ?Sized>(rule: &W, x: T) -> Self {
        Self { n: 1, p_prev: T::one(), p_curr: x / rule.weight(0), x }
    }

    /// `P_{n+1} = (x P_n - b_{n-1} P_{n-1}) / b_n`.
    #[inline]
    pub fn step<W: WeightRule<T> + ?Sized>(&self, rule: &W) -> Self {
        let next = (self.x * self.p_curr - rule.weight(self.n - 1) * self.p_prev) / rule.weight(self.n);
        Self { n: self.n + 1, p_prev: self.p_curr, p_curr: next, x: self.x }
    }

    /// Advance until the state index equals `n`.
    pub fn advance_to<W: WeightRule<T> + ?Sized>(mut self, rule: &W, n: u64) -> Self {
        while self.n < n {
            self = self.step(rule);
        }
        self
    }
}

/// `P_n(x)` for a single `n`.
pub fn poly<T: Scalar, W: WeightRule<T> + ?Sized>(rule: &W, x: T, n: u64) -> T {
    if n == 0 {
        return T::one();
    }
    PolyState::start(rule, x).advance_to(rule, n).p_curr
}

/// `B_n = [[0, 1], [-b_{n-1}/b_n, x/b_n]]`, mapping `(P_{n-1}, P_n)` to `(P_n, P_{n+1})`.
pub fn transfer_b<T: Scalar, W: WeightRule<T> + ?Sized>(rule: &W, n: u64, x: T) -> Mat2<T> {
    assert!(n >= 1, "transfer matrix needs n >= 1");
    let bn = rule.weight(n);
    Mat2::new(T::zero(), T::one(), -rule.weight(n - 1) / bn, x / bn)
}

/// Two-step block `A_k = B_{2k+1} B_{2k}` in closed form.
pub fn block_a<T: Scalar, W: WeightRule<T> + ?Sized>(rule: &W, k: u64, x: T) -> Mat2<T> {
    assert!(k >= 1, "block needs k >= 1");
    let lo = rule.weight(2 * k - 1);
    let mid = rule.weight(2 * k);
    let hi = rule.weight(2 * k + 1);
    let r = lo / mid;
    Mat2::new(-r, x / mid, -(x / hi) * r, x * x / (hi * mid) - mid / hi)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaSample<T> {
    pub n: u64,
    pub delta: T,
}

/// Stream of `Δ_n = b_n P_n^2 - b_{n-1} P_{n-1} P_{n+1}` for `n = 1, 2, ...`.
pub struct DeltaStream<'a, T, W: ?Sized> {
    rule: &'a W,
    state: PolyState<T>,
}

impl<'a, T: Scalar, W: WeightRule<T> + ?Sized> DeltaStream<'a, T, W> {
    pub fn new(rule: &'a W, x: T) -> Self {
        Self { rule, state: PolyState::start(rule, x) }
    }
}

impl<T: Scalar, W: WeightRule<T> + ?Sized> Iterator for DeltaStream<'_, T, W> {
    type Item = DeltaSample<T>;

    fn next(&mut self) -> Option<Self::Item> {
        let s = self.state;
        let b_prev = self.rule.weight(s.n - 1);
        let bn = self.rule.weight(s.n);
        let next = (s.x * s.p_curr - b_prev * s.p_prev) / bn;
        let delta = bn * s.p_curr * s.p_curr - b_prev * s.p_prev * next;
        self.state = PolyState { n: s.n + 1, p_prev: s.p_curr, p_curr: next, x: s.x };
        Some(DeltaSample { n: s.n, delta })
    }
}

pub fn delta_n<T: Scalar, W: WeightRule<T> + ?Sized>(rule: &W, x: T, n: u64) -> DeltaSample<T> {
    assert!(n >= 1, "Δ_n needs n >= 1");
    let state = PolyState::start(rule, x).advance_to(rule, n);
    DeltaStream { rule, state }.next().expect("stream is infinite")
}
