//! Nonparametric ordering inference for category/real-value data.
//!
//! Given `(category, value)` observations this crate decides which categories
//! dominate which, reports bootstrap confidence intervals for every category
//! mean and every pairwise mean difference, and packages the dominance
//! relation as a directed acyclic graph.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command-line
//! front end, wall-clock benchmarks and thread-parallel drivers live in the
//! `domorder` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dominance;
mod error;
pub mod hypothesis;
pub mod resampling;
pub mod rng;
pub mod simulation;
pub mod special;
pub mod types;

pub use dominance::{
    check_lower_bound_rule, dominated_set, infer_dominance, network_density, DominanceNetwork,
    DominanceResult, PairSummary,
};
pub use error::{Error, Result, Side};
pub use hypothesis::{
    adjust_benjamini_yekutieli, mann_whitney_one_sided, pooled_t_one_sided, welch_t_one_sided,
    PairTestResult, TestMethod,
};
pub use resampling::{
    bca_ci, bootstrap_mean, bootstrap_mean_diff, mean_ci, mean_diff_ci, normal_ci, percentile_ci,
    ReplicateKind, ReplicateSet,
};
pub use rng::RngStream;
pub use types::{
    group_by_category, AnalysisConfig, CiMethod, ConfidenceInterval, Group, GroupedData,
    Observation, ObservationSet,
};
