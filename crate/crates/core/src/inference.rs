//! The J-divergence test: asymptotic variance of the Jeffreys estimator,
//! standard error, one-sided p-value and decision.
//!
//! Writing `φ(x, y) = (x − y) ln(x / y)`, the estimator linearises as
//! `Σ Δp_j ∂xφ + Σ Δq_j ∂yφ`. With `a_j = ∂xφ(p_j, q_j) = 1 + ln(p_j/q_j) − q_j/p_j`
//! and the multinomial covariance `diag(p) − p pᵀ`, the event-side variance is
//!
//! ```text
//! V1 = Σ p_j (1 − p_j) a_j² − 2 Σ_{i<j} p_i p_j a_i a_j = Σ p_j (a_j − ā)²
//! ```
//!
//! and `V2(p, q) = V1(q, p)`. Expanding `a_j²` without the cross term
//! `−2 (1 + ln p_j/q_j)(q_j/p_j)` gives a smaller quantity that equals
//! `V1 − 2 J(p, q)`; it is available as [`VarianceForm::NoCrossTerm`] but is
//! not the default because it understates the variance away from the null
//! and inflates the type-I error.

use serde::Serialize;

use crate::divergence::{
    jeffreys, resolve_empirical, BinnedContingency, DistributionPair, ZeroPolicy,
};
use crate::error::{Error, Result};
use crate::normal::{normal_upper_quantile, normal_upper_tail, LogProb};
use crate::numeric::{compensated_sum, log_ratio, CompensatedSum};

/// Which variance expression feeds the pooled variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceForm {
    /// Full delta-method variance of the linearised estimator.
    #[default]
    DeltaMethod,
    /// The expansion without the gradient cross term (`V1 − 2J`).
    NoCrossTerm,
}

impl VarianceForm {
    pub fn v1(self, dp: &DistributionPair) -> f64 {
        match self {
            VarianceForm::DeltaMethod => variance_v1(dp),
            VarianceForm::NoCrossTerm => variance_v1_without_cross_term(dp),
        }
    }

    pub fn v2(self, dp: &DistributionPair) -> f64 {
        match self {
            VarianceForm::DeltaMethod => variance_v2(dp),
            VarianceForm::NoCrossTerm => variance_v2_without_cross_term(dp),
        }
    }
}

// Σ x_j (a_j − ā)² with a_j = 1 + ln(x_j/y_j) − y_j/x_j.
fn delta_variance(x: &[f64], y: &[f64]) -> f64 {
    let grad: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(&xj, &yj)| 1.0 + log_ratio(xj, yj) - yj / xj)
        .collect();
    let mean = compensated_sum(x.iter().zip(&grad).map(|(&xj, &a)| xj * a));
    compensated_sum(x.iter().zip(&grad).map(|(&xj, &a)| {
        let d = a - mean;
        xj * d * d
    }))
}

/// Limiting variance of `√n · Σ Δp_j ∂xφ(p_j, q_j)` (event side).
pub fn variance_v1(dp: &DistributionPair) -> f64 {
    delta_variance(dp.p(), dp.q())
}

/// Limiting variance of `√m · Σ Δq_j ∂yφ(p_j, q_j)` (non-event side).
pub fn variance_v2(dp: &DistributionPair) -> f64 {
    delta_variance(dp.q(), dp.p())
}

// Σ x(1−x){(1+L)² + (y/x)²} − 2 Σ_{i<j} {x_i x_j (1+L_i)(1+L_j) + y_i y_j}
fn no_cross_term_variance(x: &[f64], y: &[f64]) -> f64 {
    let u: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| 1.0 + log_ratio(a, b))
        .collect();
    let mut acc = CompensatedSum::default();
    for j in 0..x.len() {
        let w = y[j] / x[j];
        acc.add(x[j] * (1.0 - x[j]) * (u[j] * u[j] + w * w));
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            acc.add(-2.0 * (x[i] * x[j] * u[i] * u[j] + y[i] * y[j]));
        }
    }
    acc.value()
}

/// Event-side variance with the squared gradient expanded without its cross
/// term. Equals `variance_v1(dp) − 2 · jeffreys(dp)`.
pub fn variance_v1_without_cross_term(dp: &DistributionPair) -> f64 {
    no_cross_term_variance(dp.p(), dp.q())
}

/// Non-event counterpart of [`variance_v1_without_cross_term`].
pub fn variance_v2_without_cross_term(dp: &DistributionPair) -> f64 {
    no_cross_term_variance(dp.q(), dp.p())
}

/// Almost-sure bound on `limsup |J(p̂, q̂) − J(p, q)| / C_{n,m}` where
/// `C_{n,m}` is the largest absolute per-bin deviation of either empirical
/// distribution:
/// `Σ |1 + ln(p_j/q_j)| + |1 + ln(q_j/p_j)| + (p_j² + q_j²)/(p_j q_j)`.
pub fn consistency_bound(dp: &DistributionPair) -> f64 {
    compensated_sum(dp.p().iter().zip(dp.q()).map(|(&p, &q)| {
        let l = log_ratio(p, q);
        (1.0 + l).abs() + (1.0 - l).abs() + (p * p + q * q) / (p * q)
    }))
}

/// Largest absolute per-bin deviation between two probability vectors.
pub fn max_abs_deviation(estimate: &[f64], truth: &[f64]) -> f64 {
    estimate
        .iter()
        .zip(truth)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// One-sided p-value `1 − Φ(J / SE)`.
pub fn upper_tail_p_value(j_estimate: f64, std_error: f64) -> LogProb {
    if std_error > 0.0 {
        normal_upper_tail(j_estimate / std_error)
    } else {
        LogProb::ONE
    }
}

/// Critical value of the rejection region `J > Q(1 − α)` when `J` is
/// approximately `N(0, SE²)` under the null.
pub fn critical_value(alpha: f64, std_error: f64) -> f64 {
    std_error * normal_upper_quantile(alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestConfig {
    pub alpha: f64,
    pub zero_policy: ZeroPolicy,
    pub variance: VarianceForm,
}

impl TestConfig {
    pub fn new(alpha: f64, zero_policy: ZeroPolicy) -> Self {
        Self {
            alpha,
            zero_policy,
            variance: VarianceForm::default(),
        }
    }
}

/// Outcome of the J-divergence test on one contingency table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub j_estimate: f64,
    pub v1: f64,
    pub v2: f64,
    /// Pooled variance `(m V1 + n V2) / (n + m)`.
    pub sigma_hat: f64,
    pub std_error: f64,
    pub z_score: f64,
    /// May underflow to 0; see `log_p_value`.
    pub p_value: f64,
    pub log_p_value: LogProb,
    pub alpha: f64,
    pub reject_h0: bool,
    pub n: u64,
    pub m: u64,
    /// Bins actually used (after any merge).
    pub r: usize,
    pub variance_form: VarianceForm,
    /// Bins that had a zero cell in the input table.
    pub zero_bins: Vec<String>,
    /// Zero policy that altered the table, if any.
    pub zero_policy_applied: Option<ZeroPolicy>,
}

impl TestResult {
    pub fn log10_p_value(&self) -> f64 {
        self.log_p_value.log10()
    }
}

/// Runs the J-divergence test with the delta-method variance.
pub fn run_test(ct: &BinnedContingency, alpha: f64, zero_policy: ZeroPolicy) -> Result<TestResult> {
    run_test_with(ct, &TestConfig::new(alpha, zero_policy))
}

pub fn run_test_with(ct: &BinnedContingency, cfg: &TestConfig) -> Result<TestResult> {
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1), got {}",
            cfg.alpha
        )));
    }
    let emp = resolve_empirical(ct, cfg.zero_policy)?;
    let dp = &emp.pair;
    let (n, m) = (ct.n(), ct.m());
    let (nf, mf) = (n as f64, m as f64);

    let j_estimate = jeffreys(dp);
    let v1 = cfg.variance.v1(dp);
    let v2 = cfg.variance.v2(dp);
    let sigma_hat = (mf * v1 + nf * v2) / (nf + mf);

    let (std_error, z_score, log_p) = if sigma_hat > 0.0 {
        let se = (sigma_hat * (nf + mf) / (nf * mf)).sqrt();
        let z = j_estimate / se;
        (se, z, normal_upper_tail(z))
    } else {
        // Only reachable when p̂ == q̂ (up to rounding): no evidence against H0.
        (0.0, 0.0, LogProb::ONE)
    };
    let p_value = log_p.value();

    Ok(TestResult {
        j_estimate,
        v1,
        v2,
        sigma_hat,
        std_error,
        z_score,
        p_value,
        log_p_value: log_p,
        alpha: cfg.alpha,
        reject_h0: sigma_hat > 0.0 && p_value < cfg.alpha,
        n,
        m,
        r: dp.len(),
        variance_form: cfg.variance,
        zero_bins: emp.zero_bins,
        zero_policy_applied: emp.applied,
    })
}
