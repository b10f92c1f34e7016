//! Bootstrap replicates of sample means and mean differences, and the
//! percentile, normal and BCa intervals built from them.
//!
//! Quantiles use linear interpolation between order statistics at rank
//! `1 + (K - 1) q` (Hyndman-Fan type 7) in both the percentile and the BCa
//! path.

use alloc::vec::Vec;

use libm::{pow, sqrt};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Side};
use crate::rng::RngStream;
use crate::special::{normal_cdf, normal_quantile};
use crate::types::{sample_mean, AnalysisConfig, CiMethod, ConfidenceInterval};

/// Groups smaller than this are bootstrapped but logged as unreliable.
pub const SMALL_GROUP_WARNING: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReplicateKind {
    Mean,
    MeanDiff,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateSet {
    pub replicates: Vec<f64>,
    /// The statistic evaluated on the original sample(s).
    pub source_stat: f64,
    pub kind: ReplicateKind,
}

impl ReplicateSet {
    pub fn len(&self) -> usize {
        self.replicates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.replicates.is_empty()
    }

    fn sorted(&self) -> Vec<f64> {
        let mut sorted = self.replicates.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        sorted
    }
}

fn resample_mean(values: &[f64], rng: &mut ChaCha8Rng) -> f64 {
    let n = values.len();
    let mut sum = 0.0;
    for _ in 0..n {
        sum += values[rng.random_range(0..n)];
    }
    sum / n as f64
}

fn warn_if_small(n: usize) {
    if n < SMALL_GROUP_WARNING {
        log::warn!("bootstrapping a group of {n} observations; intervals may be unreliable");
    }
}

/// Writes replicates `first..first + out.len()` of the mean bootstrap.
///
/// Replicate `k` depends only on `(values, stream, k)`, so disjoint ranges can
/// be filled independently and in any order.
pub fn fill_mean_replicates(values: &[f64], stream: &RngStream, first: usize, out: &mut [f64]) {
    for (offset, slot) in out.iter_mut().enumerate() {
        let mut rng = stream.replicate_generator(first + offset);
        *slot = resample_mean(values, &mut rng);
    }
}

/// Writes replicates `first..first + out.len()` of the mean-difference
/// bootstrap (`mean(q*) - mean(p*)`, both groups resampled each round).
pub fn fill_mean_diff_replicates(
    values_p: &[f64],
    values_q: &[f64],
    stream: &RngStream,
    first: usize,
    out: &mut [f64],
) {
    for (offset, slot) in out.iter_mut().enumerate() {
        let mut rng = stream.replicate_generator(first + offset);
        let mean_p = resample_mean(values_p, &mut rng);
        let mean_q = resample_mean(values_q, &mut rng);
        *slot = mean_q - mean_p;
    }
}

fn check_reps(reps: usize) -> Result<()> {
    if reps == 0 {
        return Err(Error::InvalidConfig("reps must be at least 1"));
    }
    Ok(())
}

pub fn bootstrap_mean(values: &[f64], reps: usize, stream: &RngStream) -> Result<ReplicateSet> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    check_reps(reps)?;
    warn_if_small(values.len());
    let mut replicates = alloc::vec![0.0; reps];
    fill_mean_replicates(values, stream, 0, &mut replicates);
    Ok(ReplicateSet {
        replicates,
        source_stat: sample_mean(values),
        kind: ReplicateKind::Mean,
    })
}

pub fn bootstrap_mean_diff(
    values_p: &[f64],
    values_q: &[f64],
    reps: usize,
    stream: &RngStream,
) -> Result<ReplicateSet> {
    if values_p.is_empty() {
        return Err(Error::EmptySide(Side::Lower));
    }
    if values_q.is_empty() {
        return Err(Error::EmptySide(Side::Higher));
    }
    check_reps(reps)?;
    warn_if_small(values_p.len());
    warn_if_small(values_q.len());
    let mut replicates = alloc::vec![0.0; reps];
    fill_mean_diff_replicates(values_p, values_q, stream, 0, &mut replicates);
    Ok(ReplicateSet {
        replicates,
        source_stat: sample_mean(values_q) - sample_mean(values_p),
        kind: ReplicateKind::MeanDiff,
    })
}

/// Type-7 quantile of an ascending slice; `q` is clamped to `[0, 1]`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let q = q.clamp(0.0, 1.0);
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h as usize;
    if lo + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    let frac = h - lo as f64;
    let (a, b) = (sorted[lo], sorted[lo + 1]);
    if a == b {
        a
    } else {
        a + frac * (b - a)
    }
}

fn check_ci_inputs(reps: &ReplicateSet, alpha: f64) -> Result<()> {
    if reps.len() < 2 {
        return Err(Error::InsufficientReplicates(reps.len()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidConfig("alpha must lie in (0, 1)"));
    }
    Ok(())
}

fn percentile_from_sorted(sorted: &[f64], source_stat: f64, alpha: f64) -> ConfidenceInterval {
    ConfidenceInterval {
        lower: quantile_sorted(sorted, alpha / 2.0),
        upper: quantile_sorted(sorted, 1.0 - alpha / 2.0),
        level: 1.0 - alpha,
        method: CiMethod::Percentile,
        point_estimate: source_stat,
        fallback: false,
    }
}

pub fn percentile_ci(reps: &ReplicateSet, alpha: f64) -> Result<ConfidenceInterval> {
    check_ci_inputs(reps, alpha)?;
    Ok(percentile_from_sorted(
        &reps.sorted(),
        reps.source_stat,
        alpha,
    ))
}

/// `mean ± z_{1-alpha/2} * sd` over the replicates.
///
/// The replicates are already bootstrap means, so their standard deviation is
/// the standard error; it is not divided by `sqrt(K)` again.
pub fn normal_ci(reps: &ReplicateSet, alpha: f64) -> Result<ConfidenceInterval> {
    check_ci_inputs(reps, alpha)?;
    let k = reps.len() as f64;
    let center = sample_mean(&reps.replicates);
    let ss: f64 = reps
        .replicates
        .iter()
        .map(|r| (r - center) * (r - center))
        .sum();
    let half_width = normal_quantile(1.0 - alpha / 2.0) * sqrt(ss / (k - 1.0));
    Ok(ConfidenceInterval {
        lower: center - half_width,
        upper: center + half_width,
        level: 1.0 - alpha,
        method: CiMethod::Normal,
        point_estimate: reps.source_stat,
        fallback: false,
    })
}

/// Delete-one jackknife of a one-sample statistic.
///
/// Every delete-one sample is materialized and handed to `statistic`, so this
/// costs `n` full evaluations.
pub fn jackknife<F>(values: &[f64], statistic: F) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let n = values.len();
    let mut buf = Vec::with_capacity(n.saturating_sub(1));
    (0..n)
        .map(|i| {
            buf.clear();
            buf.extend_from_slice(&values[..i]);
            buf.extend_from_slice(&values[i + 1..]);
            statistic(&buf)
        })
        .collect()
}

/// Delete-one jackknife of a two-sample statistic, deleting each observation
/// of the pooled data in turn (all of `p` first, then all of `q`).
pub fn jackknife_two_sample<F>(values_p: &[f64], values_q: &[f64], statistic: F) -> Vec<f64>
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    let mut out = jackknife(values_p, |p| statistic(p, values_q));
    out.extend(jackknife(values_q, |q| statistic(values_p, q)));
    out
}

/// Bias-correction constant `z0 = Φ⁻¹(#{r < source} / K)`, with the
/// proportion clamped to `[1/(K+1), K/(K+1)]`.
pub fn bias_correction(reps: &ReplicateSet) -> f64 {
    let k = reps.len() as f64;
    let below = reps
        .replicates
        .iter()
        .filter(|&&r| r < reps.source_stat)
        .count() as f64;
    let prop = (below / k).clamp(1.0 / (k + 1.0), k / (k + 1.0));
    normal_quantile(prop)
}

/// Acceleration from jackknife values; `None` when they are all equal.
pub fn acceleration(jack: &[f64]) -> Option<f64> {
    if jack.is_empty() {
        return None;
    }
    let mean = sample_mean(jack);
    let (mut s2, mut s3) = (0.0, 0.0);
    for &t in jack {
        let d = mean - t;
        s2 += d * d;
        s3 += d * d * d;
    }
    if s2 == 0.0 {
        return None;
    }
    Some(s3 / (6.0 * pow(s2, 1.5)))
}

fn adjusted_level(z0: f64, a: f64, z: f64) -> f64 {
    let w = z0 + z;
    let denom = 1.0 - a * w;
    if denom <= 0.0 {
        return if w > 0.0 { 1.0 } else { 0.0 };
    }
    normal_cdf(z0 + w / denom)
}

/// The BCa quantile levels for the lower and upper endpoint.
pub fn bca_levels(z0: f64, a: f64, alpha: f64) -> (f64, f64) {
    if z0 == 0.0 && a == 0.0 {
        return (alpha / 2.0, 1.0 - alpha / 2.0);
    }
    let z_lo = normal_quantile(alpha / 2.0);
    let z_hi = normal_quantile(1.0 - alpha / 2.0);
    (adjusted_level(z0, a, z_lo), adjusted_level(z0, a, z_hi))
}

fn bca_from_jackknife(reps: &ReplicateSet, jack: &[f64], alpha: f64) -> ConfidenceInterval {
    let sorted = reps.sorted();
    let degenerate_reps = sorted[0] == sorted[sorted.len() - 1];
    let accel = acceleration(jack);
    match accel {
        Some(a) if !degenerate_reps => {
            let z0 = bias_correction(reps);
            let (lo, hi) = bca_levels(z0, a, alpha);
            ConfidenceInterval {
                lower: quantile_sorted(&sorted, lo),
                upper: quantile_sorted(&sorted, hi),
                level: 1.0 - alpha,
                method: CiMethod::Bca,
                point_estimate: reps.source_stat,
                fallback: false,
            }
        }
        _ => ConfidenceInterval {
            fallback: true,
            ..percentile_from_sorted(&sorted, reps.source_stat, alpha)
        },
    }
}

/// BCa interval for the mean of `original`.
///
/// Falls back to the percentile interval (with `fallback` set) when the
/// replicates or the jackknife means are all identical.
pub fn bca_ci(original: &[f64], reps: &ReplicateSet, alpha: f64) -> Result<ConfidenceInterval> {
    check_ci_inputs(reps, alpha)?;
    if original.len() < 2 {
        return Err(Error::InsufficientSample {
            needed: 2,
            got: original.len(),
        });
    }
    let jack = jackknife(original, sample_mean);
    Ok(bca_from_jackknife(reps, &jack, alpha))
}

/// BCa interval for `mean(q) - mean(p)`.
pub fn bca_ci_diff(
    values_p: &[f64],
    values_q: &[f64],
    reps: &ReplicateSet,
    alpha: f64,
) -> Result<ConfidenceInterval> {
    check_ci_inputs(reps, alpha)?;
    let n = values_p.len() + values_q.len();
    if values_p.is_empty() || values_q.is_empty() || n < 3 {
        return Err(Error::InsufficientSample { needed: 3, got: n });
    }
    let jack = jackknife_two_sample(values_p, values_q, |p, q| {
        if p.is_empty() || q.is_empty() {
            // Deleting a singleton group leaves the statistic undefined; use
            // the full-sample value so it contributes no spread.
            return sample_mean(values_q) - sample_mean(values_p);
        }
        sample_mean(q) - sample_mean(p)
    });
    Ok(bca_from_jackknife(reps, &jack, alpha))
}

/// Interval for a mean from already generated replicates.
pub fn interval_for_mean(
    values: &[f64],
    reps: &ReplicateSet,
    method: CiMethod,
    alpha: f64,
) -> Result<ConfidenceInterval> {
    match method {
        CiMethod::Percentile => percentile_ci(reps, alpha),
        CiMethod::Normal => normal_ci(reps, alpha),
        CiMethod::Bca if values.len() < 2 => Ok(ConfidenceInterval {
            fallback: true,
            ..percentile_ci(reps, alpha)?
        }),
        CiMethod::Bca => bca_ci(values, reps, alpha),
    }
}

/// Interval for `mean(q) - mean(p)` from already generated replicates.
pub fn interval_for_diff(
    values_p: &[f64],
    values_q: &[f64],
    reps: &ReplicateSet,
    method: CiMethod,
    alpha: f64,
) -> Result<ConfidenceInterval> {
    match method {
        CiMethod::Percentile => percentile_ci(reps, alpha),
        CiMethod::Normal => normal_ci(reps, alpha),
        CiMethod::Bca if values_p.len() + values_q.len() < 3 => Ok(ConfidenceInterval {
            fallback: true,
            ..percentile_ci(reps, alpha)?
        }),
        CiMethod::Bca => bca_ci_diff(values_p, values_q, reps, alpha),
    }
}

pub fn mean_ci(
    values: &[f64],
    cfg: &AnalysisConfig,
    stream: &RngStream,
) -> Result<(ReplicateSet, ConfidenceInterval)> {
    cfg.validate()?;
    let reps = bootstrap_mean(values, cfg.reps, stream)?;
    let ci = interval_for_mean(values, &reps, cfg.ci_method, cfg.alpha)?;
    Ok((reps, ci))
}

/// Bootstrap interval for `mean(q) - mean(p)`; `q` is the higher-sorted group.
pub fn mean_diff_ci(
    values_p: &[f64],
    values_q: &[f64],
    cfg: &AnalysisConfig,
    stream: &RngStream,
) -> Result<(ReplicateSet, ConfidenceInterval)> {
    cfg.validate()?;
    let reps = bootstrap_mean_diff(values_p, values_q, cfg.reps, stream)?;
    let ci = interval_for_diff(values_p, values_q, &reps, cfg.ci_method, cfg.alpha)?;
    Ok((reps, ci))
}
