//! Per-feature J-divergence test reports.

use rayon::prelude::*;
use serde::Serialize;

use crate::binning::{bin_feature, BinningSpec, Column, Strategy};
use crate::dataset::{Dataset, FeatureColumn};
use crate::divergence::ZeroPolicy;
use crate::error::{Error, Result};
use crate::inference::{run_test_with, TestConfig, TestResult, VarianceForm};

/// Cells below this count trigger a small-sample warning.
pub const SMALL_CELL: u64 = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportOptions {
    pub binning: BinningSpec,
    pub test: TestConfig,
}

impl ReportOptions {
    pub fn new(binning: BinningSpec, alpha: f64, zero_policy: ZeroPolicy) -> Self {
        Self {
            binning,
            test: TestConfig::new(alpha, zero_policy),
        }
    }

    pub fn with_variance(mut self, variance: VarianceForm) -> Self {
        self.test.variance = variance;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    #[serde(rename = "N")]
    pub total_rows: usize,
    pub n: u64,
    pub m: u64,
    pub imbalance_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub feature: String,
    pub j_estimate: f64,
    pub std_error: f64,
    /// Plain p-value; underflows to 0 below ~1e-308, in which case
    /// `p_mantissa · 10^p_exponent` still carries the magnitude.
    pub p_value: f64,
    pub log10_p: f64,
    pub p_mantissa: f64,
    pub p_exponent: i32,
    pub reject: bool,
    pub bins: usize,
    /// Bins that had an empty event or non-event cell before the zero policy.
    pub zero_bins: Vec<String>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub result: TestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub feature: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureReport {
    pub summary: DatasetSummary,
    pub rows: Vec<ReportRow>,
    pub diagnostics: Vec<Diagnostic>,
}

impl FeatureReport {
    /// True when at least one feature ended up in diagnostics.
    pub fn has_failures(&self) -> bool {
        !self.diagnostics.is_empty()
    }

    pub fn selected(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.reject)
    }
}

/// Bins and tests every feature. Features that fail are listed in
/// `diagnostics` instead of aborting the report.
pub fn report(ds: &Dataset, opts: &ReportOptions) -> Result<FeatureReport> {
    opts.binning.validate()?;
    if ds.features.is_empty() {
        return Err(Error::NoUsableFeatures);
    }
    let keep: Vec<bool> = ds.target.iter().map(Option::is_some).collect();
    let target: Vec<u8> = ds.target.iter().flatten().copied().collect();

    let outcomes: Vec<std::result::Result<ReportRow, Diagnostic>> = ds
        .features
        .par_iter()
        .map(|f| {
            test_feature(f, &keep, &target, opts).map_err(|e| Diagnostic {
                feature: f.name.clone(),
                error: e.to_string(),
            })
        })
        .collect();

    let mut rows = Vec::new();
    let mut diagnostics = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => rows.push(r),
            Err(d) => diagnostics.push(d),
        }
    }
    if rows.is_empty() && ds.features.iter().all(|f| f.unusable_reason().is_some()) {
        return Err(Error::NoUsableFeatures);
    }
    rows.sort_by(|a, b| {
        a.result
            .log_p_value
            .ln()
            .total_cmp(&b.result.log_p_value.ln())
            .then(b.j_estimate.total_cmp(&a.j_estimate))
            .then_with(|| a.feature.cmp(&b.feature))
    });
    diagnostics.sort_by(|a, b| a.feature.cmp(&b.feature));

    let (n, m) = (ds.events(), ds.non_events());
    Ok(FeatureReport {
        summary: DatasetSummary {
            total_rows: ds.rows(),
            n,
            m,
            imbalance_rate: n as f64 / (n + m) as f64,
        },
        rows,
        diagnostics,
    })
}

fn test_feature(
    f: &FeatureColumn,
    keep: &[bool],
    target: &[u8],
    opts: &ReportOptions,
) -> Result<ReportRow> {
    if let Some(reason) = f.unusable_reason() {
        return Err(Error::InvalidArgument(format!(
            "unusable feature: {reason}"
        )));
    }
    let values = f.data.select(keep);
    // Categorical columns are always binned by level.
    let spec = match (&values, &opts.binning.strategy) {
        (Column::Categorical(_), s) if *s != Strategy::Categorical => BinningSpec {
            strategy: Strategy::Categorical,
            ..opts.binning.clone()
        },
        _ => opts.binning.clone(),
    };
    let binned = bin_feature(&f.name, &values, target, &spec)?;
    let result = run_test_with(&binned.contingency, &opts.test)?;

    let mut warnings = Vec::new();
    if f.unparseable > 0 {
        warnings.push(format!(
            "{} unparseable cells treated as missing",
            f.unparseable
        ));
    }
    if binned.dropped_rows > 0 {
        warnings.push(format!(
            "{} rows with missing values dropped",
            binned.dropped_rows
        ));
    }
    if let Some(policy) = result.zero_policy_applied {
        warnings.push(format!(
            "empty cells in bins [{}]; applied {policy}",
            result.zero_bins.join(", ")
        ));
    }
    let ct = &binned.contingency;
    let small: Vec<&str> = (0..ct.len())
        .filter(|&j| {
            let (g, b) = (ct.events()[j], ct.non_events()[j]);
            (g > 0 && g < SMALL_CELL) || (b > 0 && b < SMALL_CELL)
        })
        .map(|j| ct.bins()[j].as_str())
        .collect();
    if !small.is_empty() {
        warnings.push(format!(
            "bins [{}] have fewer than {SMALL_CELL} events or non-events; normal approximation may be poor",
            small.join(", ")
        ));
    }

    let (p_mantissa, p_exponent) = result.log_p_value.mantissa_exponent();
    Ok(ReportRow {
        feature: f.name.clone(),
        j_estimate: result.j_estimate,
        std_error: result.std_error,
        p_value: result.p_value,
        log10_p: result.log10_p_value(),
        p_mantissa,
        p_exponent,
        reject: result.reject_h0,
        bins: result.r,
        zero_bins: result.zero_bins.clone(),
        warnings,
        result,
    })
}
