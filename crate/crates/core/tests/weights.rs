use jacobi_spectral::weights::{check_conditions, ConstantWeights, PowerWeights, Verdict, WeightRule};
use jacobi_spectral::Weights;
use proptest::prelude::*;

const ALPHAS: [f64; 5] = [0.55, 0.6, 2.0 / 3.0, 0.75, 0.8];

#[test]
fn first_weight_is_b0() {
    let w = Weights::new(0.6, 1.0).unwrap();
    assert_eq!(w.weight(0), 1.0);
    let w = Weights::new(0.6, 2.5).unwrap();
    assert_eq!(w.weight(0), 2.5);
}

#[test]
fn first_pair_is_one() {
    for a in ALPHAS {
        let w = Weights::new(a, 1.0).unwrap();
        assert_eq!(w.weight(1), 1.0);
        assert_eq!(w.weight(2), 1.0);
    }
}

#[test]
fn third_weight_is_two_to_alpha() {
    let w = Weights::new(0.75, 1.0).unwrap();
    let expected = (0.75 * std::f64::consts::LN_2).exp();
    assert!((w.weight(3) - expected).abs() < 1e-15);
    assert_eq!(w.weight(3), w.weight(4));
    let w = Weights::new(0.5000001, 1.0).unwrap();
    assert!((w.weight(3) - std::f64::consts::SQRT_2).abs() < 1e-6);
}

#[test]
fn paired_sequence_verdicts() {
    for a in ALPHAS {
        let w = Weights::new(a, 1.0).unwrap();
        let r = check_conditions(&w, 1_000_000, 0.1).unwrap();
        assert_eq!(r.verdicts, [Verdict::Holds, Verdict::Holds, Verdict::Fails, Verdict::Holds], "alpha = {a}: {r:?}");
        assert!(r.c1_diverges);
    }
}

#[test]
fn constant_weights_fail_growth() {
    let r = check_conditions(&ConstantWeights(1.0f64), 100_000, 0.1).unwrap();
    assert_eq!(r.verdicts[0], Verdict::Fails);
    assert!(!r.c1_diverges);
}

#[test]
fn unpaired_power_weights_satisfy_all() {
    let r = check_conditions(&PowerWeights { alpha: 0.6f64, b0: 1.0 }, 1_000_000, 0.1).unwrap();
    assert_eq!(r.verdicts, [Verdict::Holds; 4], "{r:?}");
    assert!((r.c3_decay - 2.0).abs() < 0.1);
}

#[test]
fn partial_sums_are_nondecreasing() {
    let w = Weights::new(0.6, 1.0).unwrap();
    let r = check_conditions(&w, 1_000_000, 0.1).unwrap();
    for sums in [&r.c3_partial_sums, &r.c4_partial_sums] {
        assert!(sums.windows(2).all(|p| p[0].n < p[1].n && p[0].sum <= p[1].sum));
    }
}

#[test]
fn condition_three_partial_sums_keep_growing() {
    let w = Weights::new(0.6, 1.0).unwrap();
    let r = check_conditions(&w, 1_000_000, 0.1).unwrap();
    let at = |n: u64| r.c3_partial_sums.iter().rev().find(|p| p.n <= n).unwrap();
    let (a, b, c) = (at(10_000), at(100_000), at(1_000_000));
    let first = b.sum - a.sum;
    let second = c.sum - b.sum;
    assert!(first > 1.0 && second > 1.0, "{first} {second}");
    // Logarithmic growth: equal increments per decade.
    assert!((second / first - 1.0).abs() < 0.05);
}

#[test]
fn condition_three_summand_is_first_order_at_both_parities() {
    let a = 0.6;
    let w = Weights::new(a, 1.0).unwrap();
    let term = |n: u64| (w.weight(n - 1) / w.weight(n) - w.weight(n - 2) / w.weight(n - 1)).abs();
    for n in [100_000u64, 100_001, 1_000_000, 1_000_001] {
        let scaled = n as f64 * term(n);
        assert!((scaled - 2.0 * a).abs() < 1e-3, "n = {n}: {scaled}");
    }
}

proptest! {
    #[test]
    fn pairs_are_bit_equal(a in 0.5001f64..0.9999, b0 in 0.01f64..100.0, k in 1u64..10_000_000) {
        let w = Weights::new(a, b0).unwrap();
        prop_assert_eq!(w.weight(2 * k - 1).to_bits(), w.weight(2 * k).to_bits());
    }

    #[test]
    fn weights_positive_and_nondecreasing(a in 0.5001f64..0.9999, b0 in 0.01f64..100.0, n in 1u64..10_000_000) {
        let w = Weights::new(a, b0).unwrap();
        prop_assert!(w.weight(0) > 0.0);
        prop_assert!(w.weight(n) > 0.0);
        prop_assert!(w.weight(n) <= w.weight(n + 1));
    }
}
