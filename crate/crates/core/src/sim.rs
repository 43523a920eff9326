//! Monte Carlo power functions for the J-divergence test and for the fixed
//! `IV > threshold` rule.
//!
//! Event and non-event counts are drawn from multinomials whose cell
//! probabilities follow the one-parameter family
//! `p_j ∝ θ^j (1 − θ)^{r − j}`, `j = 1..=r`. The event side is fixed at
//! `θ1`; the non-event side sweeps a grid of `θ`. At `θ == θ1` the rejection
//! rate estimates the type-I error.
//!
//! Every replicate draws from its own ChaCha stream, selected by
//! `(θ index, replicate index)` under the configured seed, so curves are
//! bit-identical regardless of thread count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::divergence::{jeffreys, resolve_empirical, BinnedContingency, ZeroPolicy};
use crate::error::{Error, Result};
use crate::inference::{run_test_with, TestConfig, VarianceForm};

/// Grid values are clamped into `[THETA_CLAMP, 1 − THETA_CLAMP]`.
pub const THETA_CLAMP: f64 = 1e-6;

/// Pseudo-count used when a simulated table has an empty cell.
pub const SMOOTHING: ZeroPolicy = ZeroPolicy::Laplace(0.5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// One normalising constant per distribution.
    #[default]
    PerDistribution,
    /// Binomial coefficients `C(r, j)` included, renormalised over `j = 1..=r`.
    Binomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaModel {
    bins: usize,
    theta: f64,
    normalization: Normalization,
}

impl ThetaModel {
    pub fn new(bins: usize, theta: f64, normalization: Normalization) -> Result<Self> {
        if bins < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 bins, got {bins}"
            )));
        }
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::Domain {
                bin: "-".into(),
                reason: format!("theta must lie strictly inside (0, 1), got {theta}"),
            });
        }
        Ok(Self {
            bins,
            theta,
            normalization,
        })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

fn ln_choose(n: usize, k: usize) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// Cell probabilities of the model, computed in log space and normalised.
pub fn theta_probabilities(model: &ThetaModel) -> Vec<f64> {
    let r = model.bins;
    let (lt, lc) = (model.theta.ln(), (-model.theta).ln_1p());
    let logw: Vec<f64> = (1..=r)
        .map(|j| {
            let base = j as f64 * lt + (r - j) as f64 * lc;
            match model.normalization {
                Normalization::PerDistribution => base,
                Normalization::Binomial => base + ln_choose(r, j),
            }
        })
        .collect();
    let top = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logw.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Multinomial draw by sequential conditional binomials.
pub fn sample_multinomial<R: Rng + ?Sized>(trials: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let mut out = vec![0u64; probs.len()];
    let mut left = trials;
    let mut mass = 1.0f64;
    for (j, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        if j + 1 == probs.len() {
            out[j] = left;
            break;
        }
        let cond = if mass > 0.0 {
            (p / mass).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let k = Binomial::new(left, cond)
            .expect("probability in [0, 1]")
            .sample(rng);
        out[j] = k;
        left -= k;
        mass -= p;
    }
    out
}

/// Event counts from `model1` and non-event counts from `model0`.
pub fn sample_contingency<R: Rng + ?Sized>(
    model1: &ThetaModel,
    model0: &ThetaModel,
    n: u64,
    m: u64,
    rng: &mut R,
) -> Result<BinnedContingency> {
    if model1.bins != model0.bins {
        return Err(Error::InvalidArgument(
            "models must share the bin count".into(),
        ));
    }
    let g = sample_multinomial(n, &theta_probabilities(model1), rng);
    let b = sample_multinomial(m, &theta_probabilities(model0), rng);
    BinnedContingency::from_counts(g, b)
}

/// Decision rule applied to each simulated table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "threshold", rename_all = "snake_case")]
pub enum Criterion {
    /// Reject when the J-divergence test rejects at the configured alpha.
    JDivergenceTest,
    /// Reject when the IV exceeds the threshold.
    FixedThreshold(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub bins: usize,
    pub theta1: f64,
    #[serde(skip)]
    pub theta_grid: Vec<f64>,
    pub n: u64,
    pub m: u64,
    pub alpha: f64,
    pub replicates: usize,
    pub seed: u64,
    pub criterion: Criterion,
    pub normalization: Normalization,
    pub variance: VarianceForm,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            bins: 10,
            theta1: 0.5,
            theta_grid: desk_grid(),
            n: 3000,
            m: 3000,
            alpha: 1e-4,
            replicates: 1000,
            seed: 42,
            criterion: Criterion::JDivergenceTest,
            normalization: Normalization::PerDistribution,
            variance: VarianceForm::DeltaMethod,
        }
    }
}

/// Interior grid `step, 2·step, …` strictly inside (0, 1), built as `k / K`
/// with `K = round(1 / step)` so that 0.5 is hit exactly for even `K`.
pub fn theta_grid(step: f64) -> Vec<f64> {
    assert!(step > 0.0 && step < 1.0, "grid step must be in (0, 1)");
    let k = (1.0 / step).round() as usize;
    (1..k).map(|i| i as f64 / k as f64).collect()
}

/// Step 0.02 over [0.02, 0.98].
pub fn desk_grid() -> Vec<f64> {
    theta_grid(0.02)
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.bins < 2 {
            return bad(format!("bins must be at least 2, got {}", self.bins));
        }
        if self.n == 0 || self.m == 0 {
            return bad("n and m must both be at least 1".into());
        }
        if self.replicates == 0 {
            return bad("replicates must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.theta1 > 0.0 && self.theta1 < 1.0) {
            return bad(format!("theta1 must lie in (0, 1), got {}", self.theta1));
        }
        if self.theta_grid.is_empty() || self.theta_grid.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return bad("theta grid must be non-empty with values in [0, 1]".into());
        }
        if let Criterion::FixedThreshold(t) = self.criterion {
            if !t.is_finite() {
                return bad("threshold must be finite".into());
            }
        }
        Ok(())
    }

    /// `n / (n + m)`.
    pub fn imbalance_rate(&self) -> f64 {
        imbalance_rate(self.n, self.m)
    }
}

pub fn imbalance_rate(n: u64, m: u64) -> f64 {
    n as f64 / (n + m) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerPoint {
    pub theta: f64,
    pub rate: f64,
    pub rejections: u64,
    /// Replicates whose table needed smoothing for an empty cell.
    pub smoothed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerCurve {
    pub config: SimConfig,
    pub points: Vec<PowerPoint>,
    pub imbalance_rate: f64,
}

impl PowerCurve {
    /// Point whose θ is closest to `theta`.
    pub fn at(&self, theta: f64) -> Option<&PowerPoint> {
        self.points
            .iter()
            .min_by(|a, b| (a.theta - theta).abs().total_cmp(&(b.theta - theta).abs()))
    }
}

/// Deterministic RNG for one replicate.
pub fn replicate_rng(seed: u64, theta_index: usize, replicate: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((theta_index as u64) << 32) | replicate as u64);
    rng
}

fn rejects(cfg: &SimConfig, ct: &BinnedContingency) -> Result<bool> {
    match cfg.criterion {
        Criterion::JDivergenceTest => {
            let tc = TestConfig {
                alpha: cfg.alpha,
                zero_policy: SMOOTHING,
                variance: cfg.variance,
            };
            Ok(run_test_with(ct, &tc)?.reject_h0)
        }
        Criterion::FixedThreshold(t) => {
            let emp = resolve_empirical(ct, SMOOTHING)?;
            Ok(jeffreys(&emp.pair) > t)
        }
    }
}

/// Rejection rate of the configured criterion at every grid point.
pub fn power_curve(cfg: &SimConfig) -> Result<PowerCurve> {
    cfg.validate()?;
    let p = theta_probabilities(&ThetaModel::new(cfg.bins, cfg.theta1, cfg.normalization)?);
    let points = cfg
        .theta_grid
        .par_iter()
        .enumerate()
        .map(|(ti, &raw)| {
            let theta = raw.clamp(THETA_CLAMP, 1.0 - THETA_CLAMP);
            let q = theta_probabilities(&ThetaModel::new(cfg.bins, theta, cfg.normalization)?);
            let (rejections, smoothed) = (0..cfg.replicates)
                .into_par_iter()
                .map(|k| -> Result<(u64, u64)> {
                    let mut rng = replicate_rng(cfg.seed, ti, k);
                    let g = sample_multinomial(cfg.n, &p, &mut rng);
                    let b = sample_multinomial(cfg.m, &q, &mut rng);
                    let ct = BinnedContingency::from_counts(g, b)?;
                    let smoothed = !ct.zero_cell_bins().is_empty();
                    Ok((u64::from(rejects(cfg, &ct)?), u64::from(smoothed)))
                })
                .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
            Ok(PowerPoint {
                theta,
                rate: rejections as f64 / cfg.replicates as f64,
                rejections,
                smoothed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerCurve {
        config: cfg.clone(),
        points,
        imbalance_rate: cfg.imbalance_rate(),
    })
}

/// Parameter varied across a family of curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    ImbalanceM(Vec<u64>),
    Alpha(Vec<f64>),
    Bins(Vec<usize>),
}

/// One curve per axis value, everything else taken from `template`.
pub fn sweep(template: &SimConfig, axis: &SweepAxis) -> Result<Vec<PowerCurve>> {
    let configs: Vec<SimConfig> = match axis {
        SweepAxis::ImbalanceM(ms) => ms
            .iter()
            .map(|&m| SimConfig {
                m,
                ..template.clone()
            })
            .collect(),
        SweepAxis::Alpha(alphas) => alphas
            .iter()
            .map(|&alpha| SimConfig {
                alpha,
                ..template.clone()
            })
            .collect(),
        SweepAxis::Bins(rs) => rs
            .iter()
            .map(|&bins| SimConfig {
                bins,
                ..template.clone()
            })
            .collect(),
    };
    if configs.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs at least one value".into(),
        ));
    }
    configs.iter().map(power_curve).collect()
}
