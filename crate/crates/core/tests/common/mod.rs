//! Naive reference formulas and fixtures shared by the integration tests.
//!
//! Everything here is written the most literal way possible (plain loops,
//! `ln` of each argument, the full covariance double sum) so it is an
//! independent check on the library's compensated, centred implementations.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn naive_j(p: &[f64], q: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..p.len() {
        s += (p[j] - q[j]) * (p[j].ln() - q[j].ln());
    }
    s
}

/// Gradient of J(., q) with respect to the first argument.
fn gradient(p: &[f64], q: &[f64]) -> Vec<f64> {
    (0..p.len())
        .map(|j| 1.0 + (p[j] / q[j]).ln() - q[j] / p[j])
        .collect()
}

/// Delta-method variance `aᵀ (diag(p) − p pᵀ) a` as an explicit double sum.
pub fn naive_v1(p: &[f64], q: &[f64]) -> f64 {
    let a = gradient(p, q);
    let r = p.len();
    let mut s = 0.0;
    for j in 0..r {
        for k in 0..r {
            let cov = if j == k {
                p[j] * (1.0 - p[j])
            } else {
                -p[j] * p[k]
            };
            s += a[j] * a[k] * cov;
        }
    }
    s
}

pub fn naive_v2(p: &[f64], q: &[f64]) -> f64 {
    naive_v1(q, p)
}

/// Squared gradient expanded as `(1 + L)² + (q/p)²`, i.e. without the
/// cross term, with the matching off-diagonal sum.
pub fn naive_v1_no_cross(p: &[f64], q: &[f64]) -> f64 {
    let r = p.len();
    let mut s = 0.0;
    for j in 0..r {
        let u = 1.0 + (p[j] / q[j]).ln();
        s += p[j] * (1.0 - p[j]) * (u * u + (q[j] / p[j]).powi(2));
    }
    for i in 0..r {
        for j in 0..r {
            if i < j {
                let ui = 1.0 + (p[i] / q[i]).ln();
                let uj = 1.0 + (p[j] / q[j]).ln();
                s -= 2.0 * (p[i] * p[j] * ui * uj + q[i] * q[j]);
            }
        }
    }
    s
}

pub fn naive_bound(p: &[f64], q: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..p.len() {
        let l = (p[j] / q[j]).ln();
        s += (1.0 + l).abs() + (1.0 - l).abs() + (p[j] * p[j] + q[j] * q[j]) / (p[j] * q[j]);
    }
    s
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// Random strictly positive distribution with `r` cells. Cells are drawn
/// from a flat Dirichlet and floored at 1e-4 before renormalisation.
pub fn random_distribution(rng: &mut impl Rng, r: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..r)
        .map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-4)
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// `count` random `(p, q)` pairs with `r` uniform in `[2, 20]`.
pub fn random_pairs(seed: u64, count: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = rng.random_range(2..=20);
            (
                random_distribution(&mut rng, r),
                random_distribution(&mut rng, r),
            )
        })
        .collect()
}

/// Empirical CDF distance to the standard normal.
pub fn ks_distance_to_normal(sample: &mut [f64]) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sample.iter().enumerate() {
        let f = ivtest::normal::normal_cdf(x).value();
        d = d
            .max((f - i as f64 / n).abs())
            .max(((i + 1) as f64 / n - f).abs());
    }
    d
}

pub fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}
