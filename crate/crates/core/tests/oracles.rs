mod common;

use common::*;
use ivtest::inference::{variance_v1_without_cross_term, variance_v2_without_cross_term};
use ivtest::sim::sample_multinomial;
use ivtest::{consistency_bound, jeffreys, variance_v1, variance_v2, DistributionPair};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair(p: &[f64], q: &[f64]) -> DistributionPair {
    DistributionPair::from_probs(p.to_vec(), q.to_vec()).unwrap()
}

// Frozen values from a 50-digit evaluation of the same formulas.
#[test]
fn frozen_half_quarter_pair() {
    let dp = pair(&[0.5, 0.5], &[0.25, 0.75]);
    let cases = [
        ("J", jeffreys(&dp), 0.274_653_072_167_027_42),
        ("V1", variance_v1(&dp), 1.101_043_384_537_200_3),
        ("V2", variance_v2(&dp), 1.108_942_407_819_747_3),
        (
            "V1 no cross",
            variance_v1_without_cross_term(&dp),
            0.551_737_240_203_145_5,
        ),
        (
            "V2 no cross",
            variance_v2_without_cross_term(&dp),
            0.559_636_263_485_692_5,
        ),
        ("bound", consistency_bound(&dp), 26.0 / 3.0),
    ];
    for (name, got, want) in cases {
        assert!(rel_err(got, want) < 1e-14, "{name}: {got} vs {want}");
    }
}

#[test]
fn frozen_uniform_bound() {
    let dp = pair(&[0.5, 0.5], &[0.5, 0.5]);
    assert_eq!(consistency_bound(&dp), 8.0);
    assert_eq!(jeffreys(&dp), 0.0);
}

#[test]
fn naive_oracles_agree_on_random_pairs() {
    for (p, q) in random_pairs(7, 300) {
        let dp = pair(&p, &q);
        assert!(rel_err(jeffreys(&dp), naive_j(&p, &q)) < 1e-10);
        assert!(rel_err(variance_v1(&dp), naive_v1(&p, &q)) < 1e-10);
        assert!(rel_err(variance_v2(&dp), naive_v2(&p, &q)) < 1e-10);
        assert!(rel_err(consistency_bound(&dp), naive_bound(&p, &q)) < 1e-10);
        let nc = variance_v1_without_cross_term(&dp);
        assert!((nc - naive_v1_no_cross(&p, &q)).abs() < 1e-9 * naive_v1(&p, &q).max(1.0));
    }
}

#[test]
fn no_cross_term_form_is_delta_minus_twice_j() {
    for (p, q) in random_pairs(11, 200) {
        let dp = pair(&p, &q);
        let j = jeffreys(&dp);
        let scale = variance_v1(&dp).max(1.0);
        assert!(
            (variance_v1_without_cross_term(&dp) - (variance_v1(&dp) - 2.0 * j)).abs()
                < 1e-9 * scale
        );
        assert!(
            (variance_v2_without_cross_term(&dp) - (variance_v2(&dp) - 2.0 * j)).abs()
                < 1e-9 * scale
        );
    }
}

/// Monte Carlo check of the event-side variance: the sample variance of
/// `√n (J(p̂, q) − J(p, q))` approaches V1.
#[test]
fn event_side_variance_matches_monte_carlo() {
    let p = [0.1, 0.2, 0.3, 0.4];
    let q = [0.25, 0.25, 0.25, 0.25];
    let j0 = naive_j(&p, &q);
    let n = 200_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let draws: Vec<f64> = (0..4000)
        .map(|_| {
            let c = sample_multinomial(n, &p, &mut rng);
            let ph: Vec<f64> = c.iter().map(|&k| k as f64 / n as f64).collect();
            (n as f64).sqrt() * (naive_j(&ph, &q) - j0)
        })
        .collect();
    let (_, var) = mean_var(&draws);
    let v1 = naive_v1(&p, &q);
    assert!(rel_err(var, v1) < 0.05, "MC variance {var} vs V1 {v1}");
    let no_cross = naive_v1_no_cross(&p, &q);
    assert!(
        rel_err(var, no_cross) > 0.2,
        "MC variance {var} should not match {no_cross}"
    );
}

#[test]
fn frozen_entropy_value() {
    let ct = ivtest::BinnedContingency::from_counts(vec![1, 2], vec![3, 2]).unwrap();
    let h = ivtest::bin_entropy(&ct);
    assert!((h.per_bin[0] - 0.562_335_144_618_808_4).abs() < 1e-15);
    assert!((h.per_bin[1] - std::f64::consts::LN_2).abs() < 1e-15);
}
