//! Hypothesis testing for Information Value.
//!
//! The information value (IV) of a binned feature against a binary target is
//! the Jeffreys divergence between the feature's distribution among events
//! and among non-events. This crate turns that number into a test statistic:
//! it computes the estimator, its asymptotic variance and a one-sided
//! p-value, and ships a Monte Carlo engine that measures the test's power
//! against the fixed `IV > 0.1` rule.
//!
//! ```
//! use ivtest::{run_test, BinnedContingency, ZeroPolicy};
//!
//! let ct = BinnedContingency::from_counts(vec![30, 70], vec![50, 50]).unwrap();
//! let res = run_test(&ct, 1e-4, ZeroPolicy::Strict).unwrap();
//! assert!(res.j_estimate > 0.0);
//! println!("J = {:.6}, p = {:.3e}", res.j_estimate, res.p_value);
//! ```
//!
//! Modules:
//! - [`divergence`]: WoE, IV / Jeffreys divergence, empirical distributions.
//! - [`inference`]: variances, standard error, p-value, decision.
//! - [`normal`]: log-space normal tails.
//! - [`binning`]: raw columns to contingency tables.
//! - [`sim`]: multinomial power-function simulator.
//! - [`dataset`] and [`report`]: CSV ingestion and per-feature reports.
//! - [`output`]: JSON / CSV / table writers.

pub mod binning;
pub mod dataset;
pub mod divergence;
pub mod error;
pub mod inference;
pub mod normal;
mod numeric;
pub mod output;
pub mod report;
pub mod sim;

pub use binning::{
    bin_entropy, bin_feature, BinLayout, BinnedFeature, BinningSpec, Column, MissingPolicy,
    Strategy,
};
pub use dataset::{ingest_csv, ColumnKind, Dataset, FeatureColumn};
pub use divergence::{
    classify_iv_threshold, empirical_distributions, information_value, jeffreys, woe,
    BinnedContingency, DistributionPair, PredictivePower, ZeroPolicy,
};
pub use error::{Error, ErrorCategory, Result};
pub use inference::{
    consistency_bound, run_test, run_test_with, variance_v1, variance_v2, TestConfig, TestResult,
    VarianceForm,
};
pub use normal::{normal_upper_tail, LogProb};
pub use report::{report, FeatureReport, ReportOptions};
pub use sim::{
    power_curve, sweep, Criterion, Normalization, PowerCurve, SimConfig, SweepAxis, ThetaModel,
};

/// Environment variable that caps worker threads.
pub const THREADS_ENV: &str = "IVTEST_THREADS";

/// Sizes the global rayon pool from `IVTEST_THREADS`, if set. Call once,
/// before any parallel work; later calls are ignored.
pub fn configure_threads_from_env() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}
