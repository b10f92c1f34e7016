//! Observations, grouped samples, analysis settings and interval records.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub category: String,
    pub value: f64,
}

impl Observation {
    pub fn new(category: impl Into<String>, value: f64) -> Self {
        Self {
            category: category.into(),
            value,
        }
    }
}

/// Raw `(category, value)` records in ingestion order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ObservationSet {
    pub records: Vec<Observation>,
}

impl ObservationSet {
    pub fn new(records: Vec<Observation>) -> Self {
        Self { records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Checks that the set is non-empty and every value is finite.
    pub fn validate(&self) -> Result<()> {
        if self.records.is_empty() {
            return Err(Error::EmptyDataset);
        }
        match self.records.iter().position(|r| !r.value.is_finite()) {
            Some(row) => Err(Error::InvalidValue { row }),
            None => Ok(()),
        }
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for ObservationSet {
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        Self {
            records: iter
                .into_iter()
                .map(|(c, v)| Observation::new(c, v))
                .collect(),
        }
    }
}

/// Values of one category together with their sample mean.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub label: String,
    pub values: Vec<f64>,
    pub mean: f64,
}

/// Per-category samples sorted by ascending sample mean, ties broken by label.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedData {
    groups: Vec<Group>,
}

impl GroupedData {
    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.groups.iter().map(|g| g.label.clone()).collect()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.groups.iter().position(|g| g.label == label)
    }

    pub fn total_count(&self) -> usize {
        self.groups.iter().map(|g| g.values.len()).sum()
    }
}

pub fn sample_mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Buckets observations by trimmed, case-sensitive category label and sorts
/// the buckets by sample mean.
pub fn group_by_category(obs: &ObservationSet) -> Result<GroupedData> {
    obs.validate()?;
    let mut buckets: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for record in &obs.records {
        buckets
            .entry(record.category.trim())
            .or_default()
            .push(record.value);
    }
    let mut groups: Vec<Group> = buckets
        .into_iter()
        .map(|(label, values)| Group {
            label: label.to_string(),
            mean: sample_mean(&values),
            values,
        })
        .collect();
    groups.sort_by(|a, b| {
        a.mean
            .partial_cmp(&b.mean)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.label.cmp(&b.label))
    });
    Ok(GroupedData { groups })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CiMethod {
    Percentile,
    Bca,
    Normal,
}

impl CiMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CiMethod::Percentile => "percentile",
            CiMethod::Bca => "bca",
            CiMethod::Normal => "normal",
        }
    }
}

impl fmt::Display for CiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CiMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "percentile" | "perc" => Ok(CiMethod::Percentile),
            "bca" => Ok(CiMethod::Bca),
            "normal" => Ok(CiMethod::Normal),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub alpha: f64,
    pub reps: usize,
    pub ci_method: CiMethod,
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            reps: 1000,
            ci_method: CiMethod::Percentile,
            seed: 0,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig("alpha must lie in (0, 1)"));
        }
        if self.reps == 0 {
            return Err(Error::InvalidConfig("reps must be at least 1"));
        }
        Ok(())
    }
}

/// A two-sided interval for a mean or a mean difference.
///
/// `fallback` is set when a BCa interval could not be formed (degenerate
/// replicates or jackknife values) and the percentile interval was returned
/// instead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: CiMethod,
    pub point_estimate: f64,
    #[serde(default)]
    pub fallback: bool,
}

impl ConfidenceInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}
