//! One-sided two-sample tests and Benjamini-Yekutieli adjustment.
//!
//! Every test answers the same question: does `y` (the higher-sorted group)
//! tend to exceed `x`?

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use libm::sqrt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{normal_sf, student_t_sf};
use crate::types::sample_mean;

/// Mann-Whitney uses the exact null distribution up to this combined size
/// when there are no ties.
pub const EXACT_MAX_TOTAL: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMethod {
    MannWhitney,
    WelchT,
    PooledT,
}

impl TestMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            TestMethod::MannWhitney => "mann_whitney",
            TestMethod::WelchT => "welch_t",
            TestMethod::PooledT => "pooled_t",
        }
    }
}

impl fmt::Display for TestMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TestMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mann_whitney" => Ok(TestMethod::MannWhitney),
            "welch_t" => Ok(TestMethod::WelchT),
            "pooled_t" => Ok(TestMethod::PooledT),
            other => Err(Error::UnknownMethod(other.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairTestResult {
    /// `U` for Mann-Whitney (pairs where `y` beats `x`, ties counting half),
    /// the t statistic otherwise.
    pub statistic: f64,
    pub p_value: f64,
    pub method: TestMethod,
    /// Whether the exact null distribution was used (Mann-Whitney only).
    pub exact: bool,
}

/// Midranks (1-based) of the concatenation `x ++ y`, plus the tie groups'
/// `sum(t^3 - t)`.
fn midranks(x: &[f64], y: &[f64]) -> (Vec<f64>, f64) {
    let n = x.len() + y.len();
    let mut order: Vec<(f64, usize)> = x.iter().chain(y).copied().zip(0..n).collect();
    order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let mut ranks = vec![0.0; n];
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && order[j].0 == order[i].0 {
            j += 1;
        }
        // Positions i..j share the average of ranks i+1..=j.
        let rank = (i + j + 1) as f64 / 2.0;
        for &(_, idx) in &order[i..j] {
            ranks[idx] = rank;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    (ranks, tie_term)
}

/// Number of orderings of `m` x's and `n` y's for each value of U
/// (count of (x, y) pairs with y above x).
fn u_distribution(m: usize, n: usize) -> Vec<u64> {
    // counts[i][j] is the distribution for i x's and j y's.
    let max_u = m * n;
    let mut counts = vec![vec![Vec::<u64>::new(); n + 1]; m + 1];
    for i in 0..=m {
        for j in 0..=n {
            let mut dist = vec![0u64; i * j + 1];
            if i == 0 || j == 0 {
                dist[0] = 1;
            } else {
                // Largest element is a y (beats all i x's) or an x.
                for (u, c) in counts[i][j - 1].iter().enumerate() {
                    dist[u + i] += c;
                }
                for (u, c) in counts[i - 1][j].iter().enumerate() {
                    dist[u] += c;
                }
            }
            counts[i][j] = dist;
        }
    }
    let out = core::mem::take(&mut counts[m][n]);
    debug_assert_eq!(out.len(), max_u + 1);
    out
}

/// One-sided Mann-Whitney test that `y` tends to exceed `x`.
///
/// Exact when `|x| + |y| <= 12` and there are no ties; otherwise the normal
/// approximation with tie-corrected variance and a 0.5 continuity correction.
pub fn mann_whitney_one_sided(x: &[f64], y: &[f64]) -> Result<PairTestResult> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySample);
    }
    let (m, n) = (x.len(), y.len());
    let total = m + n;
    let (ranks, tie_term) = midranks(x, y);
    let rank_sum_y: f64 = ranks[m..].iter().sum();
    let u = rank_sum_y - (n * (n + 1)) as f64 / 2.0;

    if total <= EXACT_MAX_TOTAL && tie_term == 0.0 {
        let dist = u_distribution(m, n);
        let u_obs = u as usize;
        let at_least: u64 = dist[u_obs..].iter().sum();
        let all: u64 = dist.iter().sum();
        return Ok(PairTestResult {
            statistic: u,
            p_value: at_least as f64 / all as f64,
            method: TestMethod::MannWhitney,
            exact: true,
        });
    }

    let (mf, nf, tf) = (m as f64, n as f64, total as f64);
    let mean = mf * nf / 2.0;
    let var = mf * nf / 12.0 * ((tf + 1.0) - tie_term / (tf * (tf - 1.0)));
    let p_value = if var > 0.0 {
        normal_sf((u - mean - 0.5) / sqrt(var))
    } else {
        // Every observation tied: no evidence either way.
        1.0
    };
    Ok(PairTestResult {
        statistic: u,
        p_value,
        method: TestMethod::MannWhitney,
        exact: false,
    })
}

fn mean_and_var(v: &[f64]) -> (f64, f64) {
    let mean = sample_mean(v);
    let ss: f64 = v.iter().map(|a| (a - mean) * (a - mean)).sum();
    (mean, ss / (v.len() - 1) as f64)
}

fn check_t_sizes(x: &[f64], y: &[f64]) -> Result<()> {
    for v in [x, y] {
        if v.len() < 2 {
            return Err(Error::InsufficientSample {
                needed: 2,
                got: v.len(),
            });
        }
    }
    Ok(())
}

fn t_result(diff: f64, se: f64, df: f64, method: TestMethod) -> PairTestResult {
    if se == 0.0 {
        let p_value = if diff > 0.0 {
            0.0
        } else if diff < 0.0 {
            1.0
        } else {
            0.5
        };
        let statistic = if diff == 0.0 {
            0.0
        } else {
            diff * f64::INFINITY
        };
        return PairTestResult {
            statistic,
            p_value,
            method,
            exact: false,
        };
    }
    let t = diff / se;
    PairTestResult {
        statistic: t,
        p_value: student_t_sf(t, df),
        method,
        exact: false,
    }
}

/// One-sided Welch t-test that `mean(y) > mean(x)`.
pub fn welch_t_one_sided(x: &[f64], y: &[f64]) -> Result<PairTestResult> {
    check_t_sizes(x, y)?;
    let (mx, vx) = mean_and_var(x);
    let (my, vy) = mean_and_var(y);
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (sx, sy) = (vx / nx, vy / ny);
    let se2 = sx + sy;
    let df = se2 * se2 / (sx * sx / (nx - 1.0) + sy * sy / (ny - 1.0));
    Ok(t_result(my - mx, sqrt(se2), df, TestMethod::WelchT))
}

/// One-sided Student t-test with pooled variance, `df = |x| + |y| - 2`.
pub fn pooled_t_one_sided(x: &[f64], y: &[f64]) -> Result<PairTestResult> {
    check_t_sizes(x, y)?;
    let (mx, vx) = mean_and_var(x);
    let (my, vy) = mean_and_var(y);
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let df = nx + ny - 2.0;
    let pooled = ((nx - 1.0) * vx + (ny - 1.0) * vy) / df;
    let se = sqrt(pooled * (1.0 / nx + 1.0 / ny));
    Ok(t_result(my - mx, se, df, TestMethod::PooledT))
}

/// Benjamini-Yekutieli step-up adjustment; output is in input order.
pub fn adjust_benjamini_yekutieli(p_values: &[f64]) -> Result<Vec<f64>> {
    if let Some((index, &value)) = p_values
        .iter()
        .enumerate()
        .find(|(_, p)| !(0.0..=1.0).contains(*p))
    {
        return Err(Error::InvalidPValue { index, value });
    }
    let m = p_values.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let c: f64 = (1..=m).map(|j| 1.0 / j as f64).sum();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));

    let mut adjusted = vec![0.0; m];
    let mut running = 1.0f64;
    for rank in (1..=m).rev() {
        let idx = order[rank - 1];
        let q = c * m as f64 * p_values[idx] / rank as f64;
        running = running.min(q);
        adjusted[idx] = running;
    }
    Ok(adjusted)
}
