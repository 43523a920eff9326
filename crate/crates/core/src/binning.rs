//! Raw feature columns to [`BinnedContingency`] tables.
//!
//! Numeric bins are left-open, right-closed intervals `(c_{i}, c_{i+1}]`,
//! except the first, which is `[min, c_1]`. Quantile cut points are order
//! statistics (`x_(⌈kN/r⌉)`), so every quantile bin holds at least one row;
//! duplicated cut points from ties are merged and the realised bin count may
//! be smaller than requested.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::divergence::BinnedContingency;
use crate::error::{Error, Result};

pub const MIN_BINS: usize = 2;
pub const MAX_BINS: usize = 64;
pub const MISSING_LABEL: &str = "missing";

/// A raw feature column. `None` marks a missing cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Numeric(Vec<Option<f64>>),
    Categorical(Vec<Option<String>>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Numeric(v) => v.len(),
            Column::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_missing(&self, i: usize) -> bool {
        match self {
            Column::Numeric(v) => v[i].is_none(),
            Column::Categorical(v) => v[i].is_none(),
        }
    }

    /// Keeps only rows where `keep` is true.
    pub fn select(&self, keep: &[bool]) -> Column {
        fn pick<T: Clone>(v: &[T], keep: &[bool]) -> Vec<T> {
            v.iter()
                .zip(keep)
                .filter(|&(_, &k)| k)
                .map(|(x, _)| x.clone())
                .collect()
        }
        match self {
            Column::Numeric(v) => Column::Numeric(pick(v, keep)),
            Column::Categorical(v) => Column::Categorical(pick(v, keep)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Quantile,
    EqualWidth,
    Categorical,
    ExplicitEdges(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    /// Missing values get a bin of their own, appended last.
    #[default]
    OwnBin,
    Drop,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinningSpec {
    pub strategy: Strategy,
    pub bins: usize,
    pub missing: MissingPolicy,
}

impl Default for BinningSpec {
    fn default() -> Self {
        Self {
            strategy: Strategy::Quantile,
            bins: 10,
            missing: MissingPolicy::OwnBin,
        }
    }
}

impl BinningSpec {
    pub fn quantile(bins: usize) -> Self {
        Self {
            strategy: Strategy::Quantile,
            bins,
            ..Self::default()
        }
    }

    pub fn equal_width(bins: usize) -> Self {
        Self {
            strategy: Strategy::EqualWidth,
            bins,
            ..Self::default()
        }
    }

    pub fn categorical() -> Self {
        Self {
            strategy: Strategy::Categorical,
            ..Self::default()
        }
    }

    pub fn explicit(cuts: Vec<f64>) -> Self {
        let bins = cuts.len() + 1;
        Self {
            strategy: Strategy::ExplicitEdges(cuts),
            bins,
            ..Self::default()
        }
    }

    pub fn with_missing(mut self, missing: MissingPolicy) -> Self {
        self.missing = missing;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_BINS..=MAX_BINS).contains(&self.bins) {
            return Err(Error::InvalidArgument(format!(
                "bin count must be in [{MIN_BINS}, {MAX_BINS}], got {}",
                self.bins
            )));
        }
        if let Strategy::ExplicitEdges(cuts) = &self.strategy {
            if cuts.is_empty() {
                return Err(Error::InvalidArgument(
                    "explicit edges need at least one cut point".into(),
                ));
            }
            if cuts.iter().any(|c| !c.is_finite()) || cuts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(
                    "explicit edges must be finite and strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Realised bin boundaries.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BinLayout {
    Intervals { cuts: Vec<f64>, min: f64, max: f64 },
    Categories { levels: Vec<String> },
}

impl BinLayout {
    /// Number of value bins (excluding any missing bin).
    pub fn value_bins(&self) -> usize {
        match self {
            BinLayout::Intervals { cuts, .. } => cuts.len() + 1,
            BinLayout::Categories { levels } => levels.len(),
        }
    }

    pub fn assign_numeric(&self, x: f64) -> Option<usize> {
        match self {
            BinLayout::Intervals { cuts, .. } => Some(cuts.partition_point(|&c| c < x)),
            BinLayout::Categories { levels } => {
                let key = format_level(x);
                levels.binary_search(&key).ok()
            }
        }
    }

    pub fn assign_category(&self, s: &str) -> Option<usize> {
        match self {
            BinLayout::Intervals { .. } => None,
            BinLayout::Categories { levels } => levels.binary_search_by(|l| l.as_str().cmp(s)).ok(),
        }
    }

    fn labels(&self) -> Vec<String> {
        match self {
            BinLayout::Intervals { cuts, min, max } => {
                let mut out = Vec::with_capacity(cuts.len() + 1);
                let mut lo = *min;
                for (i, &c) in cuts.iter().enumerate() {
                    out.push(if i == 0 {
                        format!("[{lo}, {c}]")
                    } else {
                        format!("({lo}, {c}]")
                    });
                    lo = c;
                }
                out.push(if cuts.is_empty() {
                    format!("[{lo}, {max}]")
                } else {
                    format!("({lo}, {max}]")
                });
                out
            }
            BinLayout::Categories { levels } => levels.clone(),
        }
    }
}

fn format_level(x: f64) -> String {
    format!("{x}")
}

/// A feature after binning.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinnedFeature {
    pub name: String,
    pub spec: BinningSpec,
    pub layout: BinLayout,
    /// Whether the last bin holds missing values.
    pub missing_bin: bool,
    pub contingency: BinnedContingency,
    /// Mean of the raw values per bin; `None` for categorical and missing bins.
    pub bin_means: Vec<Option<f64>>,
    /// Rows left out under [`MissingPolicy::Drop`].
    pub dropped_rows: usize,
}

impl BinnedFeature {
    pub fn bins(&self) -> usize {
        self.contingency.len()
    }

    /// Re-applies the realised layout to a column.
    pub fn apply(&self, values: &Column, target: &[u8]) -> Result<BinnedContingency> {
        if values.len() != target.len() {
            return Err(Error::InvalidArgument(
                "feature and target lengths differ".into(),
            ));
        }
        check_target(target)?;
        let assigned = assign_rows(&self.layout, values, self.spec.missing)?;
        if !self.missing_bin
            && assigned
                .iter()
                .flatten()
                .any(|&j| j >= self.layout.value_bins())
        {
            return Err(Error::InvalidArgument(
                "missing values but the layout has no missing bin".into(),
            ));
        }
        let (events, non_events, _) = tally(
            &assigned,
            values,
            target,
            self.layout.value_bins(),
            self.missing_bin,
        );
        BinnedContingency::new(self.contingency.bins().to_vec(), events, non_events)
    }
}

fn check_target(target: &[u8]) -> Result<()> {
    if let Some(bad) = target.iter().find(|&&y| y > 1) {
        return Err(Error::InvalidArgument(format!(
            "target value {bad} is not 0 or 1"
        )));
    }
    Ok(())
}

/// Bins one feature column against a binary target.
pub fn bin_feature(
    name: &str,
    values: &Column,
    target: &[u8],
    spec: &BinningSpec,
) -> Result<BinnedFeature> {
    spec.validate()?;
    if values.len() != target.len() {
        return Err(Error::InvalidArgument(format!(
            "feature '{name}' has {} rows but target has {}",
            values.len(),
            target.len()
        )));
    }
    if values.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "feature '{name}' needs at least 2 rows"
        )));
    }
    check_target(target)?;
    if !target.contains(&0) || !target.contains(&1) {
        return Err(Error::DegenerateTarget(format!("feature '{name}'")));
    }
    let missing_count = (0..values.len()).filter(|&i| values.is_missing(i)).count();
    if missing_count > 0 && spec.missing == MissingPolicy::Error {
        return Err(Error::MissingValues(name.to_string()));
    }

    let mut layout = build_layout(values, spec)?;
    let missing_bin = missing_count > 0 && spec.missing == MissingPolicy::OwnBin;

    if let (BinLayout::Intervals { cuts, .. }, Column::Numeric(v)) = (&mut layout, values) {
        collapse_empty_intervals(cuts, v);
    }
    let assigned = assign_rows(&layout, values, spec.missing)?;

    let value_bins = layout.value_bins();
    let total_bins = value_bins + usize::from(missing_bin);
    if total_bins < MIN_BINS {
        return Err(Error::TooFewBins);
    }
    let (events, non_events, bin_means) = tally(&assigned, values, target, value_bins, missing_bin);
    let mut labels = layout.labels();
    if missing_bin {
        labels.push(MISSING_LABEL.to_string());
    }
    let contingency = BinnedContingency::new(labels, events, non_events).map_err(|_| {
        Error::DegenerateTarget(format!("feature '{name}' after dropping missing rows"))
    })?;

    let dropped_rows = if spec.missing == MissingPolicy::Drop {
        missing_count
    } else {
        0
    };
    Ok(BinnedFeature {
        name: name.to_string(),
        spec: spec.clone(),
        layout,
        missing_bin,
        contingency,
        bin_means,
        dropped_rows,
    })
}

/// Removes cut points bounding empty intervals until every interval has rows.
fn collapse_empty_intervals(cuts: &mut Vec<f64>, values: &[Option<f64>]) {
    loop {
        let mut totals = vec![0usize; cuts.len() + 1];
        for x in values.iter().flatten().filter(|x| x.is_finite()) {
            totals[cuts.partition_point(|&c| c < *x)] += 1;
        }
        let Some(empty) = totals.iter().position(|&t| t == 0) else {
            return;
        };
        if cuts.is_empty() {
            return;
        }
        cuts.remove(if empty < cuts.len() { empty } else { empty - 1 });
    }
}

fn present_numeric(values: &[Option<f64>]) -> Vec<f64> {
    values
        .iter()
        .flatten()
        .copied()
        .filter(|x| x.is_finite())
        .collect()
}

fn build_layout(values: &Column, spec: &BinningSpec) -> Result<BinLayout> {
    match (&spec.strategy, values) {
        (Strategy::Categorical, Column::Categorical(v)) => {
            let levels: std::collections::BTreeSet<String> = v.iter().flatten().cloned().collect();
            Ok(BinLayout::Categories {
                levels: levels.into_iter().collect(),
            })
        }
        (Strategy::Categorical, Column::Numeric(v)) => {
            let levels: std::collections::BTreeSet<String> =
                present_numeric(v).into_iter().map(format_level).collect();
            Ok(BinLayout::Categories {
                levels: levels.into_iter().collect(),
            })
        }
        (_, Column::Categorical(_)) => Err(Error::InvalidArgument(
            "numeric binning strategies need a numeric column".into(),
        )),
        (strategy, Column::Numeric(v)) => {
            let mut xs = present_numeric(v);
            if xs.is_empty() {
                return Err(Error::TooFewBins);
            }
            xs.sort_by(f64::total_cmp);
            let (min, max) = (xs[0], xs[xs.len() - 1]);
            let r = spec.bins;
            let mut cuts: Vec<f64> = match strategy {
                Strategy::Quantile => {
                    let n = xs.len();
                    (1..r).map(|k| xs[(k * n).div_ceil(r) - 1]).collect()
                }
                Strategy::EqualWidth => {
                    if min == max {
                        return Err(Error::TooFewBins);
                    }
                    let width = (max - min) / r as f64;
                    (1..r).map(|k| min + width * k as f64).collect()
                }
                Strategy::ExplicitEdges(cuts) => cuts.clone(),
                Strategy::Categorical => unreachable!(),
            };
            cuts.dedup();
            cuts.retain(|&c| c < max);
            Ok(BinLayout::Intervals { cuts, min, max })
        }
    }
}

/// Bin index per row; `None` for dropped rows, `Some(value_bins)` for the
/// missing bin.
fn assign_rows(
    layout: &BinLayout,
    values: &Column,
    missing: MissingPolicy,
) -> Result<Vec<Option<usize>>> {
    let missing_slot = layout.value_bins();
    let on_missing = || match missing {
        MissingPolicy::OwnBin => Ok(Some(missing_slot)),
        MissingPolicy::Drop => Ok(None),
        MissingPolicy::Error => Err(Error::MissingValues("column".into())),
    };
    let mut out = Vec::with_capacity(values.len());
    match values {
        Column::Numeric(v) => {
            for x in v {
                match x {
                    Some(x) if x.is_finite() => {
                        out.push(layout.assign_numeric(*x).map(Some).ok_or_else(|| {
                            Error::InvalidArgument(format!("value {x} does not fall in any bin"))
                        })?)
                    }
                    _ => out.push(on_missing()?),
                }
            }
        }
        Column::Categorical(v) => {
            for s in v {
                match s {
                    Some(s) => out.push(Some(layout.assign_category(s).ok_or_else(|| {
                        Error::InvalidArgument(format!("category '{s}' does not fall in any bin"))
                    })?)),
                    None => out.push(on_missing()?),
                }
            }
        }
    }
    Ok(out)
}

fn tally(
    assigned: &[Option<usize>],
    values: &Column,
    target: &[u8],
    value_bins: usize,
    missing_bin: bool,
) -> (Vec<u64>, Vec<u64>, Vec<Option<f64>>) {
    let total = value_bins + usize::from(missing_bin);
    let mut events = vec![0u64; total];
    let mut non_events = vec![0u64; total];
    let mut sums = vec![0.0f64; total];
    for (i, slot) in assigned.iter().enumerate() {
        let Some(j) = *slot else { continue };
        if target[i] == 1 {
            events[j] += 1;
        } else {
            non_events[j] += 1;
        }
        if let Column::Numeric(v) = values {
            if let Some(x) = v[i] {
                sums[j] += x;
            }
        }
    }
    let means = (0..total)
        .map(|j| {
            let count = events[j] + non_events[j];
            let numeric = matches!(values, Column::Numeric(_));
            (numeric && j < value_bins && count > 0).then(|| sums[j] / count as f64)
        })
        .collect();
    (events, non_events, means)
}

/// Per-bin binary Shannon entropy of the target, in nats.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinEntropy {
    pub per_bin: Vec<f64>,
    /// Bins with no rows at all; their entropy is reported as 0.
    pub empty_bins: Vec<usize>,
}

pub fn bin_entropy(ct: &BinnedContingency) -> BinEntropy {
    let mut empty_bins = Vec::new();
    let per_bin = ct
        .events()
        .iter()
        .zip(ct.non_events())
        .enumerate()
        .map(|(j, (&g, &b))| {
            let total = g + b;
            if total == 0 {
                empty_bins.push(j);
                return 0.0;
            }
            let t = g as f64 / total as f64;
            let h = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
            h(t) + h(1.0 - t)
        })
        .collect();
    BinEntropy {
        per_bin,
        empty_bins,
    }
}

/// Per-level category tallies, used by tests and the report diagnostics.
pub fn category_counts(values: &[Option<String>]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for v in values.iter().flatten() {
        *out.entry(v.clone()).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: usize) -> Column {
        Column::Numeric((1..=n).map(|i| Some(i as f64)).collect())
    }

    fn alternating(n: usize) -> Vec<u8> {
        (1..=n).map(|i| (i % 2 == 0) as u8).collect()
    }

    #[test]
    fn quantile_quartiles_on_ramp() {
        let f = bin_feature(
            "x",
            &ramp(100),
            &alternating(100),
            &BinningSpec::quantile(4),
        )
        .unwrap();
        let ct = &f.contingency;
        assert_eq!(ct.len(), 4);
        let totals: Vec<u64> = ct
            .events()
            .iter()
            .zip(ct.non_events())
            .map(|(g, b)| g + b)
            .collect();
        assert_eq!(totals, vec![25, 25, 25, 25]);
        assert_eq!(ct.events(), &[12, 13, 12, 13]);
        assert_eq!(ct.n(), 50);
        assert_eq!(
            f.layout,
            BinLayout::Intervals {
                cuts: vec![25.0, 50.0, 75.0],
                min: 1.0,
                max: 100.0
            }
        );
        assert_eq!(ct.bins()[0], "[1, 25]");
        assert_eq!(ct.bins()[3], "(75, 100]");
        assert_eq!(f.bin_means[0], Some(13.0));
    }

    #[test]
    fn constant_column_fails() {
        let col = Column::Numeric(vec![Some(3.0); 20]);
        let err = bin_feature("c", &col, &alternating(20), &BinningSpec::quantile(10)).unwrap_err();
        assert!(matches!(err, Error::TooFewBins));
        let err =
            bin_feature("c", &col, &alternating(20), &BinningSpec::equal_width(10)).unwrap_err();
        assert!(matches!(err, Error::TooFewBins));
    }

    #[test]
    fn categorical_matches_group_by() {
        let raw = ["A", "B", "C", "A", "C", "C", "B", "A", "A"];
        let target = vec![1, 0, 1, 1, 0, 0, 1, 0, 1];
        let col = Column::Categorical(raw.iter().map(|s| Some(s.to_string())).collect());
        let f = bin_feature("cat", &col, &target, &BinningSpec::categorical()).unwrap();
        assert_eq!(f.contingency.bins(), &["A", "B", "C"]);
        let expected =
            category_counts(&raw.iter().map(|s| Some(s.to_string())).collect::<Vec<_>>());
        for (j, label) in f.contingency.bins().iter().enumerate() {
            let total = f.contingency.events()[j] + f.contingency.non_events()[j];
            assert_eq!(total as usize, expected[label]);
        }
        assert_eq!(f.contingency.events(), &[3, 1, 1]);
    }

    #[test]
    fn degenerate_target() {
        let err = bin_feature("x", &ramp(10), &[1; 10], &BinningSpec::quantile(2)).unwrap_err();
        assert!(matches!(err, Error::DegenerateTarget(_)));
        assert!(bin_feature("x", &ramp(10), &[2; 10], &BinningSpec::quantile(2)).is_err());
    }

    #[test]
    fn missing_policies() {
        let mut v: Vec<Option<f64>> = (1..=10).map(|i| Some(i as f64)).collect();
        v[3] = None;
        v[7] = None;
        let col = Column::Numeric(v);
        let y = alternating(10);

        let own = bin_feature("x", &col, &y, &BinningSpec::quantile(2)).unwrap();
        assert!(own.missing_bin);
        assert_eq!(own.contingency.bins().last().unwrap(), MISSING_LABEL);
        assert_eq!(own.contingency.n() + own.contingency.m(), 10);

        let drop = bin_feature(
            "x",
            &col,
            &y,
            &BinningSpec::quantile(2).with_missing(MissingPolicy::Drop),
        )
        .unwrap();
        assert_eq!(drop.contingency.n() + drop.contingency.m(), 8);
        assert_eq!(drop.dropped_rows, 2);

        let err = bin_feature(
            "x",
            &col,
            &y,
            &BinningSpec::quantile(2).with_missing(MissingPolicy::Error),
        )
        .unwrap_err();
        assert!(matches!(err, Error::MissingValues(_)));
    }

    #[test]
    fn ties_collapse_quantile_edges() {
        let mut v: Vec<Option<f64>> = vec![Some(0.0); 80];
        v.extend((1..=20).map(|i| Some(i as f64)));
        let f = bin_feature(
            "z",
            &Column::Numeric(v),
            &alternating(100),
            &BinningSpec::quantile(10),
        )
        .unwrap();
        assert!(f.bins() < 10);
        assert_eq!(f.contingency.bins()[0], "[0, 0]");
        assert_eq!(
            f.contingency.events()[0] + f.contingency.non_events()[0],
            80
        );
    }

    #[test]
    fn equal_width_collapses_empty_bins() {
        let v: Vec<Option<f64>> = [0.0, 0.1, 0.2, 9.8, 9.9, 10.0]
            .iter()
            .map(|&x| Some(x))
            .collect();
        let f = bin_feature(
            "w",
            &Column::Numeric(v),
            &[0, 1, 0, 1, 0, 1],
            &BinningSpec::equal_width(5),
        )
        .unwrap();
        assert_eq!(f.bins(), 2);
        assert!(f
            .contingency
            .events()
            .iter()
            .zip(f.contingency.non_events())
            .all(|(g, b)| g + b > 0));
    }

    #[test]
    fn explicit_edges_and_validation() {
        let spec = BinningSpec::explicit(vec![30.0, 60.0]);
        let f = bin_feature("e", &ramp(100), &alternating(100), &spec).unwrap();
        let totals: Vec<u64> = f
            .contingency
            .events()
            .iter()
            .zip(f.contingency.non_events())
            .map(|(g, b)| g + b)
            .collect();
        assert_eq!(totals, vec![30, 30, 40]);
        assert!(BinningSpec::explicit(vec![2.0, 1.0]).validate().is_err());
        assert!(BinningSpec::quantile(1).validate().is_err());
        assert!(BinningSpec::quantile(65).validate().is_err());
    }

    #[test]
    fn reapplying_layout_reproduces_counts() {
        let col = ramp(57);
        let y = alternating(57);
        let f = bin_feature("x", &col, &y, &BinningSpec::quantile(7)).unwrap();
        assert_eq!(f.apply(&col, &y).unwrap(), f.contingency);
    }

    #[test]
    fn entropy_values() {
        let ct = BinnedContingency::from_counts(vec![5, 0, 1], vec![5, 4, 3]).unwrap();
        let h = bin_entropy(&ct);
        assert!((h.per_bin[0] - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(h.per_bin[1], 0.0);
        assert!((h.per_bin[2] - 0.562_335_144_618_808_4).abs() < 1e-15);
        assert!(h.empty_bins.is_empty());

        let ct = BinnedContingency::from_counts(vec![5, 0], vec![5, 0]).unwrap();
        assert_eq!(bin_entropy(&ct).empty_bins, vec![1]);
    }
}
