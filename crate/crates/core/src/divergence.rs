//! Weight of evidence, information value and the Jeffreys divergence over
//! finite discrete distributions.
//!
//! All sums run in bin order with compensated accumulation. Log ratios are
//! computed with [`log_ratio`](crate::numeric) so that swapping `p` and `q`
//! flips every term's sign exactly, which makes [`jeffreys`] bitwise
//! symmetric.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, log_ratio};

const SUM_TOLERANCE: f64 = 1e-9;

/// Per-bin event (target = 1) and non-event (target = 0) counts for one
/// feature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinnedContingency {
    bins: Vec<String>,
    events: Vec<u64>,
    non_events: Vec<u64>,
}

impl BinnedContingency {
    pub fn new(bins: Vec<String>, events: Vec<u64>, non_events: Vec<u64>) -> Result<Self> {
        if bins.len() != events.len() || bins.len() != non_events.len() {
            return Err(Error::InvalidContingency(format!(
                "length mismatch: {} bins, {} event counts, {} non-event counts",
                bins.len(),
                events.len(),
                non_events.len()
            )));
        }
        if bins.is_empty() {
            return Err(Error::InvalidContingency("no bins".into()));
        }
        let ct = Self {
            bins,
            events,
            non_events,
        };
        if ct.n() == 0 {
            return Err(Error::InvalidContingency("no events (n = 0)".into()));
        }
        if ct.m() == 0 {
            return Err(Error::InvalidContingency("no non-events (m = 0)".into()));
        }
        Ok(ct)
    }

    /// Builds a table with bins labelled `1..=r`.
    pub fn from_counts(events: Vec<u64>, non_events: Vec<u64>) -> Result<Self> {
        let bins = (1..=events.len()).map(|j| j.to_string()).collect();
        Self::new(bins, events, non_events)
    }

    pub fn bins(&self) -> &[String] {
        &self.bins
    }

    pub fn events(&self) -> &[u64] {
        &self.events
    }

    pub fn non_events(&self) -> &[u64] {
        &self.non_events
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Total event count.
    pub fn n(&self) -> u64 {
        self.events.iter().sum()
    }

    /// Total non-event count.
    pub fn m(&self) -> u64 {
        self.non_events.iter().sum()
    }

    /// Labels of bins where either count is zero.
    pub fn zero_cell_bins(&self) -> Vec<String> {
        self.zero_cell_indices()
            .into_iter()
            .map(|j| self.bins[j].clone())
            .collect()
    }

    fn zero_cell_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.events[j] == 0 || self.non_events[j] == 0)
            .collect()
    }

    /// Merges bin `from` into its neighbour `into`, keeping the lower index's
    /// position.
    fn merge(&mut self, from: usize, into: usize) {
        let (lo, hi) = if from < into {
            (from, into)
        } else {
            (into, from)
        };
        let label = format!("{}+{}", self.bins[lo], self.bins[hi]);
        self.events[lo] += self.events[hi];
        self.non_events[lo] += self.non_events[hi];
        self.bins[lo] = label;
        self.bins.remove(hi);
        self.events.remove(hi);
        self.non_events.remove(hi);
    }
}

/// Two strictly positive probability vectors on the same ordered bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionPair {
    bins: Vec<String>,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl DistributionPair {
    pub fn new(bins: Vec<String>, p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if p.len() != q.len() || bins.len() != p.len() {
            return Err(Error::InvalidDistribution(format!(
                "length mismatch: {} bins, len(p) = {}, len(q) = {}",
                bins.len(),
                p.len(),
                q.len()
            )));
        }
        if p.len() < 2 {
            return Err(Error::InvalidDistribution(format!(
                "need at least 2 bins, got {}",
                p.len()
            )));
        }
        for (j, label) in bins.iter().enumerate() {
            check_positive(label, "p", p[j])?;
            check_positive(label, "q", q[j])?;
        }
        for (name, v) in [("p", &p), ("q", &q)] {
            let s = compensated_sum(v.iter().copied());
            if (s - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::InvalidDistribution(format!(
                    "{name} sums to {s}, expected 1"
                )));
            }
        }
        Ok(Self { bins, p, q })
    }

    /// Builds a pair with bins labelled `1..=r`.
    pub fn from_probs(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let bins = (1..=p.len()).map(|j| j.to_string()).collect();
        Self::new(bins, p, q)
    }

    pub fn bins(&self) -> &[String] {
        &self.bins
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// The same pair with the roles of `p` and `q` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            bins: self.bins.clone(),
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }
}

fn check_positive(bin: &str, which: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            bin: bin.to_string(),
            reason: format!("{which} = {v} is not a positive finite probability"),
        })
    }
}

/// Weight of evidence `ln(p_j / q_j)` for a single bin.
pub fn woe(p_j: f64, q_j: f64) -> Result<f64> {
    check_positive("?", "p", p_j)?;
    check_positive("?", "q", q_j)?;
    Ok(log_ratio(p_j, q_j))
}

/// Per-bin weights of evidence of a pair.
pub fn woe_vector(dp: &DistributionPair) -> Vec<f64> {
    dp.p.iter()
        .zip(&dp.q)
        .map(|(&p, &q)| log_ratio(p, q))
        .collect()
}

/// Jeffreys divergence `Σ (p_j − q_j) ln(p_j / q_j)`.
///
/// Applied to empirical distributions this is the information value of the
/// binned feature.
pub fn jeffreys(dp: &DistributionPair) -> f64 {
    compensated_sum(
        dp.p.iter()
            .zip(&dp.q)
            .map(|(&p, &q)| (p - q) * log_ratio(p, q)),
    )
}

/// Alias of [`jeffreys`] under its credit-scoring name.
pub fn information_value(dp: &DistributionPair) -> f64 {
    jeffreys(dp)
}

/// What to do with bins that have zero events or zero non-events.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(tag = "kind", content = "pseudo_count", rename_all = "snake_case")]
pub enum ZeroPolicy {
    /// Reject the table.
    #[default]
    Strict,
    /// Add the pseudo-count to every cell, only when some cell is zero.
    Laplace(f64),
    /// Merge each offending bin into its neighbour with the smaller total
    /// count (left neighbour on ties).
    MergeAdjacent,
}

impl ZeroPolicy {
    pub const DEFAULT_PSEUDO_COUNT: f64 = 0.5;

    pub fn laplace() -> Self {
        ZeroPolicy::Laplace(Self::DEFAULT_PSEUDO_COUNT)
    }
}

impl fmt::Display for ZeroPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroPolicy::Strict => write!(f, "strict"),
            ZeroPolicy::Laplace(c) => write!(f, "laplace({c})"),
            ZeroPolicy::MergeAdjacent => write!(f, "merge"),
        }
    }
}

/// Empirical distributions together with a record of any zero-cell fix-up.
#[derive(Debug, Clone, PartialEq)]
pub struct Empirical {
    pub pair: DistributionPair,
    /// Labels of the bins that had a zero cell before the policy was applied.
    pub zero_bins: Vec<String>,
    /// The policy that actually changed the table, if any.
    pub applied: Option<ZeroPolicy>,
}

/// `p̂_j = g_j / n` and `q̂_j = b_j / m` after resolving empty cells.
pub fn empirical_distributions(
    ct: &BinnedContingency,
    zero_policy: ZeroPolicy,
) -> Result<DistributionPair> {
    resolve_empirical(ct, zero_policy).map(|e| e.pair)
}

/// Like [`empirical_distributions`], but also reports what the zero policy
/// did.
pub fn resolve_empirical(ct: &BinnedContingency, zero_policy: ZeroPolicy) -> Result<Empirical> {
    let zero_bins = ct.zero_cell_bins();
    if zero_bins.is_empty() {
        return Ok(Empirical {
            pair: ratios(ct, 0.0)?,
            zero_bins,
            applied: None,
        });
    }
    let pair = match zero_policy {
        ZeroPolicy::Strict => {
            return Err(Error::Positivity { bins: zero_bins });
        }
        ZeroPolicy::Laplace(c) => {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "Laplace pseudo-count must be positive, got {c}"
                )));
            }
            ratios(ct, c)?
        }
        ZeroPolicy::MergeAdjacent => {
            let merged = merge_empty_bins(ct)?;
            ratios(&merged, 0.0)?
        }
    };
    Ok(Empirical {
        pair,
        zero_bins,
        applied: Some(zero_policy),
    })
}

fn ratios(ct: &BinnedContingency, pseudo: f64) -> Result<DistributionPair> {
    let r = ct.len() as f64;
    let n = ct.n() as f64 + pseudo * r;
    let m = ct.m() as f64 + pseudo * r;
    let p = ct.events.iter().map(|&g| (g as f64 + pseudo) / n).collect();
    let q = ct
        .non_events
        .iter()
        .map(|&b| (b as f64 + pseudo) / m)
        .collect();
    DistributionPair::new(ct.bins.clone(), p, q)
}

fn merge_empty_bins(ct: &BinnedContingency) -> Result<BinnedContingency> {
    let mut work = ct.clone();
    while let Some(&j) = work.zero_cell_indices().first() {
        if work.len() < 2 {
            break;
        }
        let total = |k: usize| work.events[k] + work.non_events[k];
        let neighbour = match (j.checked_sub(1), (j + 1 < work.len()).then_some(j + 1)) {
            (Some(l), Some(r)) => {
                if total(r) < total(l) {
                    r
                } else {
                    l
                }
            }
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => break,
        };
        work.merge(j, neighbour);
    }
    if work.len() < 2 {
        return Err(Error::TooFewBins);
    }
    Ok(work)
}

/// Legacy predictive-power bands for information value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PredictivePower {
    NotUseful,
    Weak,
    Medium,
    Strong,
    Suspicious,
}

impl fmt::Display for PredictivePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PredictivePower::NotUseful => "Not useful for prediction",
            PredictivePower::Weak => "Weak",
            PredictivePower::Medium => "Medium",
            PredictivePower::Strong => "Strong",
            PredictivePower::Suspicious => "Suspicious Predictive Power",
        };
        f.write_str(s)
    }
}

/// Maps an IV onto the fixed-threshold bands. Boundary values belong to the
/// higher band.
pub fn classify_iv_threshold(iv: f64) -> Result<PredictivePower> {
    if !iv.is_finite() || iv < 0.0 {
        return Err(Error::Domain {
            bin: "-".into(),
            reason: format!("information value must be a finite non-negative number, got {iv}"),
        });
    }
    Ok(if iv < 0.02 {
        PredictivePower::NotUseful
    } else if iv < 0.1 {
        PredictivePower::Weak
    } else if iv < 0.3 {
        PredictivePower::Medium
    } else if iv < 0.5 {
        PredictivePower::Strong
    } else {
        PredictivePower::Suspicious
    })
}
