//! Synthetic noise-sensitivity study.
//!
//! Five categories C1..C5 are drawn from a three-component mixture (normal,
//! Cauchy, uniform noise). Only C5 is shifted upward, so the true network is
//! `C5 -> {C1, C2, C3, C4}`. Each decision method is scored against that
//! network by precision, recall and F1 over directed edges.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dominance::{check_lower_bound_rule, sorted_pairs, DominanceNetwork};
use crate::error::{Error, Result};
use crate::hypothesis::{
    adjust_benjamini_yekutieli, mann_whitney_one_sided, pooled_t_one_sided, welch_t_one_sided,
};
use crate::resampling::mean_diff_ci;
use crate::rng::RngStream;
use crate::types::{group_by_category, AnalysisConfig, CiMethod, GroupedData, ObservationSet};

/// Noise levels of the reference sensitivity grid.
pub const DEFAULT_P1_GRID: [f64; 9] = [0.01, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40];

const GENERATE_STREAMS: u64 = 0x67656e;
const ANALYZE_STREAMS: u64 = 0x616e61;

/// Parameters of the normal / Cauchy / uniform mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureParams {
    pub mu0: f64,
    pub sigma0: f64,
    pub x0: f64,
    pub gamma: f64,
    pub lower: f64,
    pub upper: f64,
    /// Weight of the uniform noise component, in `[0, 0.5]`.
    pub p1: f64,
}

impl MixtureParams {
    pub fn validate(&self) -> Result<()> {
        let all_finite = [
            self.mu0,
            self.sigma0,
            self.x0,
            self.gamma,
            self.lower,
            self.upper,
            self.p1,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidMixture("parameters must be finite"));
        }
        if self.sigma0 <= 0.0 {
            return Err(Error::InvalidMixture("sigma0 must be positive"));
        }
        if self.gamma <= 0.0 {
            return Err(Error::InvalidMixture("gamma must be positive"));
        }
        if self.lower >= self.upper {
            return Err(Error::InvalidMixture(
                "uniform bounds must satisfy lower < upper",
            ));
        }
        if !(0.0..=0.5).contains(&self.p1) {
            return Err(Error::InvalidMixture("p1 must lie in [0, 0.5]"));
        }
        Ok(())
    }

    pub fn with_p1(self, p1: f64) -> Self {
        Self { p1, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Normal,
    Cauchy,
    Uniform,
}

/// Draws `n` values and reports which component produced each one.
pub fn sample_mixture_tagged(
    params: &MixtureParams,
    n: usize,
    stream: &RngStream,
) -> Result<Vec<(f64, Component)>> {
    params.validate()?;
    if n == 0 {
        return Err(Error::InvalidMixture("sample size must be at least 1"));
    }
    let normal = Normal::new(params.mu0, params.sigma0)
        .map_err(|_| Error::InvalidMixture("sigma0 must be positive"))?;
    let mut rng = stream.generator();
    let cauchy_end = 1.0 - params.p1;
    Ok((0..n)
        .map(|_| {
            let u: f64 = rng.random();
            if u < 0.5 {
                (normal.sample(&mut rng), Component::Normal)
            } else if u < cauchy_end {
                let v: f64 = rng.random();
                (
                    params.x0 + params.gamma * libm::tan(PI * (v - 0.5)),
                    Component::Cauchy,
                )
            } else {
                let v: f64 = rng.random();
                (
                    params.lower + (params.upper - params.lower) * v,
                    Component::Uniform,
                )
            }
        })
        .collect())
}

pub fn sample_mixture(params: &MixtureParams, n: usize, stream: &RngStream) -> Result<Vec<f64>> {
    Ok(sample_mixture_tagged(params, n, stream)?
        .into_iter()
        .map(|(v, _)| v)
        .collect())
}

/// Five-category scenario: C1..C4 share `base`, C5 uses `dominant`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub base: MixtureParams,
    pub dominant: MixtureParams,
    pub n_per_category: usize,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        let base = MixtureParams {
            mu0: 80.0,
            sigma0: 16.0,
            x0: 85.0,
            gamma: 2.0,
            lower: -400.0,
            upper: 400.0,
            p1: 0.01,
        };
        Self {
            base,
            dominant: MixtureParams {
                mu0: 140.0,
                x0: 145.0,
                ..base
            },
            n_per_category: 100,
        }
    }
}

impl ScenarioSpec {
    pub const CATEGORIES: [&'static str; 5] = ["C1", "C2", "C3", "C4", "C5"];

    pub fn with_p1(self, p1: f64) -> Self {
        Self {
            base: self.base.with_p1(p1),
            dominant: self.dominant.with_p1(p1),
            ..self
        }
    }

    pub fn params(&self, category: usize) -> &MixtureParams {
        if category == 4 {
            &self.dominant
        } else {
            &self.base
        }
    }

    /// `C5 -> C1..C4`.
    pub fn truth_network(&self) -> DominanceNetwork {
        let nodes = Self::CATEGORIES.iter().map(|s| s.to_string()).collect();
        let mut net = DominanceNetwork::new(nodes, f64::NAN);
        for dominated in 0..4 {
            net.add_edge(4, dominated);
        }
        net
    }
}

pub fn generate_scenario(spec: &ScenarioSpec, stream: &RngStream) -> Result<ObservationSet> {
    if spec.n_per_category == 0 {
        return Err(Error::InvalidMixture("n_per_category must be at least 1"));
    }
    let mut obs = ObservationSet::default();
    for (i, label) in ScenarioSpec::CATEGORIES.iter().enumerate() {
        let draws = sample_mixture(
            spec.params(i),
            spec.n_per_category,
            &stream.derive(i as u64),
        )?;
        obs.records.extend(
            draws
                .into_iter()
                .map(|v| crate::types::Observation::new(*label, v)),
        );
    }
    Ok(obs)
}

/// Edge-level confusion counts and the derived scores.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Score {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// Scores predicted directed edges against the reference network. Empty
/// denominators score 0.
pub fn evaluate(predicted: &DominanceNetwork, truth: &DominanceNetwork) -> Result<Score> {
    let nodes = |n: &DominanceNetwork| n.nodes.iter().cloned().collect::<BTreeSet<_>>();
    if nodes(predicted) != nodes(truth) {
        return Err(Error::NodeSetMismatch);
    }
    let edges = |n: &DominanceNetwork| {
        n.labeled_edges()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect::<BTreeSet<_>>()
    };
    let (pred, real) = (edges(predicted), edges(truth));
    let tp = pred.intersection(&real).count();
    let fp = pred.len() - tp;
    let fn_ = real.len() - tp;
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    Ok(Score {
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_,
        precision,
        recall,
        f1: f1_score(precision, recall),
    })
}

/// How a method decides that the higher-sorted category dominates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionMethod {
    /// One-sided Mann-Whitney, Benjamini-Yekutieli adjusted over all pairs.
    MannWhitneyBy,
    /// One-sided Welch t-test, Benjamini-Yekutieli adjusted.
    WelchTBy,
    /// One-sided pooled-variance t-test, unadjusted.
    PooledT,
    /// BCa mean-difference interval with a positive lower bound.
    BcaLower,
    /// Percentile mean-difference interval with a positive lower bound.
    PercLower,
}

impl DecisionMethod {
    pub const ALL: [DecisionMethod; 5] = [
        DecisionMethod::MannWhitneyBy,
        DecisionMethod::WelchTBy,
        DecisionMethod::PooledT,
        DecisionMethod::BcaLower,
        DecisionMethod::PercLower,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DecisionMethod::MannWhitneyBy => "mann_whitney_by",
            DecisionMethod::WelchTBy => "welch_t_by",
            DecisionMethod::PooledT => "pooled_t",
            DecisionMethod::BcaLower => "bca_lower",
            DecisionMethod::PercLower => "perc_lower",
        }
    }
}

impl fmt::Display for DecisionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecisionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DecisionMethod::ALL
            .into_iter()
            .find(|m| m.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

pub fn parse_methods<S: AsRef<str>>(names: &[S]) -> Result<Vec<DecisionMethod>> {
    names.iter().map(|n| n.as_ref().parse()).collect()
}

fn adjusted_edges(
    data: &GroupedData,
    alpha: f64,
    adjust: bool,
    test: impl Fn(&[f64], &[f64]) -> Result<f64>,
) -> Result<DominanceNetwork> {
    let pairs = sorted_pairs(data.len());
    let groups = data.groups();
    let raw = pairs
        .iter()
        .map(|&(lo, hi)| test(&groups[lo].values, &groups[hi].values))
        .collect::<Result<Vec<_>>>()?;
    let decided = if adjust {
        adjust_benjamini_yekutieli(&raw)?
    } else {
        raw
    };
    let mut net = DominanceNetwork::new(data.labels(), alpha);
    for (&(lo, hi), p) in pairs.iter().zip(decided) {
        if p < alpha {
            net.add_edge(hi, lo);
        }
    }
    Ok(net)
}

/// Dominance network produced by one decision method.
pub fn decide_network(
    data: &GroupedData,
    method: DecisionMethod,
    cfg: &AnalysisConfig,
    stream: &RngStream,
) -> Result<DominanceNetwork> {
    cfg.validate()?;
    match method {
        DecisionMethod::MannWhitneyBy => adjusted_edges(data, cfg.alpha, true, |x, y| {
            Ok(mann_whitney_one_sided(x, y)?.p_value)
        }),
        DecisionMethod::WelchTBy => adjusted_edges(data, cfg.alpha, true, |x, y| {
            Ok(welch_t_one_sided(x, y)?.p_value)
        }),
        DecisionMethod::PooledT => adjusted_edges(data, cfg.alpha, false, |x, y| {
            Ok(pooled_t_one_sided(x, y)?.p_value)
        }),
        DecisionMethod::BcaLower | DecisionMethod::PercLower => {
            let ci_method = if method == DecisionMethod::BcaLower {
                CiMethod::Bca
            } else {
                CiMethod::Percentile
            };
            let cfg = AnalysisConfig { ci_method, ..*cfg };
            let groups = data.groups();
            let mut net = DominanceNetwork::new(data.labels(), cfg.alpha);
            for (k, (lo, hi)) in sorted_pairs(data.len()).into_iter().enumerate() {
                let (_, ci) = mean_diff_ci(
                    &groups[lo].values,
                    &groups[hi].values,
                    &cfg,
                    &stream.derive(k as u64),
                )?;
                if check_lower_bound_rule(&ci) {
                    net.add_edge(hi, lo);
                }
            }
            Ok(net)
        }
    }
}

/// Stream for dataset `dataset` at noise level number `level`.
pub fn dataset_stream(seed: u64, level: usize, dataset: usize) -> RngStream {
    RngStream::new(seed, 0)
        .derive(level as u64)
        .derive(dataset as u64)
}

/// Generates one dataset at noise level `p1` and scores every method on it.
/// Scores are returned in the order of `methods`.
pub fn score_dataset(
    spec: &ScenarioSpec,
    p1: f64,
    methods: &[DecisionMethod],
    cfg: &AnalysisConfig,
    stream: &RngStream,
) -> Result<Vec<Score>> {
    let spec = spec.with_p1(p1);
    let obs = generate_scenario(&spec, &stream.derive(GENERATE_STREAMS))?;
    let data = group_by_category(&obs)?;
    let truth = spec.truth_network();
    let analysis = stream.derive(ANALYZE_STREAMS);
    methods
        .iter()
        .map(|&m| evaluate(&decide_network(&data, m, cfg, &analysis)?, &truth))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelMetrics {
    pub method: DecisionMethod,
    pub p1: f64,
    pub datasets: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateMetrics {
    pub method: DecisionMethod,
    pub datasets: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub method: CiMethod,
    pub n: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub levels: Vec<LevelMetrics>,
    pub aggregate: Vec<AggregateMetrics>,
    pub timings: Vec<TimingRow>,
}

fn mean_of(scores: &[&Score], field: impl Fn(&Score) -> f64) -> f64 {
    if scores.is_empty() {
        return 0.0;
    }
    scores.iter().map(|s| field(s)).sum::<f64>() / scores.len() as f64
}

impl BenchmarkReport {
    /// Averages per-dataset scores. `scores[level][dataset][method]` must be
    /// aligned with `p1_grid` and `methods`.
    pub fn from_scores(
        methods: &[DecisionMethod],
        p1_grid: &[f64],
        scores: &[Vec<Vec<Score>>],
    ) -> Self {
        let mut report = BenchmarkReport::default();
        for (m, &method) in methods.iter().enumerate() {
            let mut all = Vec::new();
            for (level, &p1) in scores.iter().zip(p1_grid) {
                let here: Vec<&Score> = level.iter().map(|d| &d[m]).collect();
                report.levels.push(LevelMetrics {
                    method,
                    p1,
                    datasets: here.len(),
                    precision: mean_of(&here, |s| s.precision),
                    recall: mean_of(&here, |s| s.recall),
                    f1: mean_of(&here, |s| s.f1),
                });
                all.extend(here);
            }
            report.aggregate.push(AggregateMetrics {
                method,
                datasets: all.len(),
                precision: mean_of(&all, |s| s.precision),
                recall: mean_of(&all, |s| s.recall),
                f1: mean_of(&all, |s| s.f1),
            });
        }
        report
    }

    pub fn aggregate_for(&self, method: DecisionMethod) -> Option<&AggregateMetrics> {
        self.aggregate.iter().find(|a| a.method == method)
    }

    pub fn levels_for(&self, method: DecisionMethod) -> impl Iterator<Item = &LevelMetrics> + '_ {
        self.levels.iter().filter(move |l| l.method == method)
    }
}

pub(crate) fn check_grid(p1_grid: &[f64]) -> Result<()> {
    for &p1 in p1_grid {
        if !(0.0..=0.5).contains(&p1) {
            return Err(Error::InvalidMixture("p1 must lie in [0, 0.5]"));
        }
    }
    Ok(())
}

/// Validates benchmark inputs shared by the serial and parallel drivers.
pub fn check_benchmark_inputs(
    methods: &[DecisionMethod],
    p1_grid: &[f64],
    spec: &ScenarioSpec,
    cfg: &AnalysisConfig,
) -> Result<()> {
    if methods.is_empty() {
        return Err(Error::UnknownMethod(String::new()));
    }
    check_grid(p1_grid)?;
    spec.base.validate()?;
    spec.dominant.validate()?;
    cfg.validate()
}

/// Serial sensitivity benchmark: every method on `datasets_per_level`
/// datasets at each noise level.
pub fn run_benchmark(
    methods: &[DecisionMethod],
    p1_grid: &[f64],
    datasets_per_level: usize,
    spec: &ScenarioSpec,
    cfg: &AnalysisConfig,
) -> Result<BenchmarkReport> {
    check_benchmark_inputs(methods, p1_grid, spec, cfg)?;
    let scores = p1_grid
        .iter()
        .enumerate()
        .map(|(level, &p1)| {
            (0..datasets_per_level)
                .map(|d| score_dataset(spec, p1, methods, cfg, &dataset_stream(cfg.seed, level, d)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchmarkReport::from_scores(methods, p1_grid, &scores))
}

impl fmt::Display for BenchmarkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.aggregate {
            writeln!(
                f,
                "{:<16} P={:.3} R={:.3} F1={:.3} ({} datasets)",
                a.method, a.precision, a.recall, a.f1, a.datasets
            )?;
        }
        for t in &self.timings {
            writeln!(f, "{:<10} n={:<8} {:.3}s", t.method, t.n, t.seconds)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn edges(net: &mut DominanceNetwork, list: &[(&str, &str)]) {
        for (a, b) in list {
            net.add_edge_by_label(a, b).unwrap();
        }
    }

    fn empty_net() -> DominanceNetwork {
        let nodes = ScenarioSpec::CATEGORIES
            .iter()
            .map(|s| s.to_string())
            .collect();
        DominanceNetwork::new(nodes, 0.05)
    }

    #[test]
    fn evaluate_reference_cases() {
        let truth = ScenarioSpec::default().truth_network();
        let s = evaluate(&truth, &truth).unwrap();
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));

        let s = evaluate(&empty_net(), &truth).unwrap();
        assert_eq!((s.precision, s.recall, s.f1), (0.0, 0.0, 0.0));

        let mut pred = empty_net();
        edges(
            &mut pred,
            &[
                ("C5", "C1"),
                ("C5", "C2"),
                ("C5", "C3"),
                ("C5", "C4"),
                ("C4", "C3"),
            ],
        );
        let s = evaluate(&pred, &truth).unwrap();
        assert!((s.precision - 0.8).abs() < 1e-15);
        assert_eq!(s.recall, 1.0);
        assert!((s.f1 - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn evaluate_ignores_node_insertion_order() {
        let truth = ScenarioSpec::default().truth_network();
        let nodes = vec!["C3", "C5", "C1", "C4", "C2"]
            .into_iter()
            .map(String::from)
            .collect();
        let mut pred = DominanceNetwork::new(nodes, 0.05);
        edges(&mut pred, &[("C5", "C1"), ("C2", "C1")]);
        let s = evaluate(&pred, &truth).unwrap();
        assert_eq!(
            (s.true_positives, s.false_positives, s.false_negatives),
            (1, 1, 3)
        );

        let other = DominanceNetwork::new(vec!["C1".into(), "X".into()], 0.05);
        assert_eq!(evaluate(&other, &truth), Err(Error::NodeSetMismatch));
    }

    #[test]
    fn mixture_validation() {
        let p = ScenarioSpec::default().base;
        assert!(p.with_p1(0.6).validate().is_err());
        assert!(MixtureParams { sigma0: 0.0, ..p }.validate().is_err());
        assert!(MixtureParams {
            lower: 5.0,
            upper: 5.0,
            ..p
        }
        .validate()
        .is_err());
        assert!(sample_mixture(&p, 0, &RngStream::new(1, 1)).is_err());
    }

    #[test]
    fn collapsed_components_cluster_at_their_locations() {
        let p = MixtureParams {
            mu0: 10.0,
            sigma0: 1e-6,
            x0: 20.0,
            gamma: 1e-9,
            lower: -1.0,
            upper: 1.0,
            p1: 0.0,
        };
        let draws = sample_mixture_tagged(&p, 2000, &RngStream::new(3, 0)).unwrap();
        for (v, c) in draws {
            match c {
                Component::Normal => assert!((v - 10.0).abs() < 1e-4),
                Component::Cauchy => assert!((v - 20.0).abs() < 1e-3),
                Component::Uniform => panic!("p1 = 0 drew uniform noise"),
            }
        }
    }

    #[test]
    fn scenario_has_expected_shape_and_is_deterministic() {
        let spec = ScenarioSpec::default();
        let s = RngStream::new(9, 0);
        let obs = generate_scenario(&spec, &s).unwrap();
        assert_eq!(obs.len(), 500);
        let labels: BTreeSet<_> = obs.records.iter().map(|r| r.category.as_str()).collect();
        assert_eq!(labels.len(), 5);
        assert_eq!(obs, generate_scenario(&spec, &s).unwrap());
    }

    #[test]
    fn method_names_round_trip() {
        for m in DecisionMethod::ALL {
            assert_eq!(m.as_str().parse::<DecisionMethod>().unwrap(), m);
        }
        assert_eq!(
            parse_methods(&["mann_whitney_by", "nope"]),
            Err(Error::UnknownMethod("nope".into()))
        );
    }

    #[test]
    fn smoke_benchmark_shape() {
        let cfg = AnalysisConfig {
            reps: 200,
            seed: 5,
            ..Default::default()
        };
        let report = run_benchmark(
            &[DecisionMethod::MannWhitneyBy],
            &[0.01],
            5,
            &ScenarioSpec::default(),
            &cfg,
        )
        .unwrap();
        assert_eq!(report.levels.len(), 1);
        assert_eq!(report.levels[0].datasets, 5);
        assert_eq!(report.aggregate[0].datasets, 5);
        assert!((0.0..=1.0).contains(&report.aggregate[0].f1));
    }
}
