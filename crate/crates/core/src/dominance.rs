//! Dominance networks: which categories dominate which, and how strongly.
//!
//! Categories are sorted by sample mean and every pair is tested only in the
//! sorted direction ("is the higher-mean group greater?"), so every edge points
//! from a later to an earlier position and the network is acyclic by
//! construction.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::{adjust_benjamini_yekutieli, mann_whitney_one_sided};
use crate::resampling::{mean_ci, mean_diff_ci};
use crate::rng::RngStream;
use crate::types::{AnalysisConfig, ConfidenceInterval, GroupedData};

const MEAN_STREAMS: u64 = 0x6d65_616e;
const PAIR_STREAMS: u64 = 0x7061_6972;

/// A DAG over category labels; an edge `(i, j)` means node `i` dominates
/// node `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceNetwork {
    pub nodes: Vec<String>,
    edges: Vec<(usize, usize)>,
    pub alpha: f64,
}

impl DominanceNetwork {
    pub fn new(nodes: Vec<String>, alpha: f64) -> Self {
        Self {
            nodes,
            edges: Vec::new(),
            alpha,
        }
    }

    /// Adds `dominator -> dominated`. Self-loops and duplicates are ignored;
    /// returns whether the edge was inserted.
    pub fn add_edge(&mut self, dominator: usize, dominated: usize) -> bool {
        assert!(dominator < self.nodes.len() && dominated < self.nodes.len());
        if dominator == dominated || self.has_edge(dominator, dominated) {
            return false;
        }
        self.edges.push((dominator, dominated));
        true
    }

    /// Looks nodes up by label.
    pub fn add_edge_by_label(&mut self, dominator: &str, dominated: &str) -> Result<bool> {
        let from = self.index_of(dominator)?;
        let to = self.index_of(dominated)?;
        Ok(self.add_edge(from, to))
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, dominator: usize, dominated: usize) -> bool {
        self.edges.contains(&(dominator, dominated))
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n == label)
            .ok_or_else(|| Error::UnknownCategory(label.to_string()))
    }

    /// Edges as `(dominator, dominated)` label pairs.
    pub fn labeled_edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges
            .iter()
            .map(|&(i, j)| (self.nodes[i].as_str(), self.nodes[j].as_str()))
    }

    fn successors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == node).map(|e| e.1)
    }

    /// Kahn's algorithm; `None` if the edge set has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        for &(_, j) in &self.edges {
            indegree[j] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for j in self.successors(i) {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }
}

/// Per-pair report, oriented higher-sorted minus lower-sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSummary {
    /// Position of the lower-mean category in the sorted order.
    pub low: usize,
    /// Position of the higher-mean category.
    pub high: usize,
    pub diff_ci: ConfidenceInterval,
    pub p_raw: f64,
    pub p_adjusted: f64,
    pub dominates: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceResult {
    pub config: AnalysisConfig,
    /// Category labels ascending by sample mean.
    pub order: Vec<String>,
    pub sample_means: Vec<f64>,
    pub sample_sizes: Vec<usize>,
    /// Mean CI per category, aligned with `order`.
    pub mean_cis: Vec<ConfidenceInterval>,
    pub pairs: Vec<PairSummary>,
    pub network: DominanceNetwork,
    pub density: f64,
}

/// Raw (unadjusted) evidence for one sorted pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEvidence {
    pub low: usize,
    pub high: usize,
    pub diff_ci: ConfidenceInterval,
    pub p_raw: f64,
}

/// All sorted pairs `(low, high)` with `low < high`, in the order used for
/// stream derivation and reporting.
pub fn sorted_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|low| (low + 1..n).map(move |high| (low, high)))
        .collect()
}

pub fn mean_stream(cfg: &AnalysisConfig, index: usize) -> RngStream {
    RngStream::new(cfg.seed, 0)
        .derive(MEAN_STREAMS)
        .derive(index as u64)
}

pub fn pair_stream(cfg: &AnalysisConfig, pair_index: usize) -> RngStream {
    RngStream::new(cfg.seed, 0)
        .derive(PAIR_STREAMS)
        .derive(pair_index as u64)
}

/// Mean CI of the category at `index`.
pub fn category_mean_ci(
    data: &GroupedData,
    cfg: &AnalysisConfig,
    index: usize,
) -> Result<ConfidenceInterval> {
    let group = &data.groups()[index];
    Ok(mean_ci(&group.values, cfg, &mean_stream(cfg, index))?.1)
}

/// Mean-difference CI and Mann-Whitney p-value for pair number `pair_index`.
pub fn pair_evidence(
    data: &GroupedData,
    cfg: &AnalysisConfig,
    pair_index: usize,
    low: usize,
    high: usize,
) -> Result<PairEvidence> {
    let (p, q) = (&data.groups()[low].values, &data.groups()[high].values);
    let (_, diff_ci) = mean_diff_ci(p, q, cfg, &pair_stream(cfg, pair_index))?;
    let test = mann_whitney_one_sided(p, q)?;
    Ok(PairEvidence {
        low,
        high,
        diff_ci,
        p_raw: test.p_value,
    })
}

/// Joins per-category and per-pair results: adjusts all pair p-values as one
/// family and adds an edge wherever the adjusted value is below alpha.
pub fn assemble(
    data: &GroupedData,
    cfg: &AnalysisConfig,
    mean_cis: Vec<ConfidenceInterval>,
    evidence: Vec<PairEvidence>,
) -> Result<DominanceResult> {
    let raw: Vec<f64> = evidence.iter().map(|e| e.p_raw).collect();
    let adjusted = adjust_benjamini_yekutieli(&raw)?;
    let mut network = DominanceNetwork::new(data.labels(), cfg.alpha);
    let pairs: Vec<PairSummary> = evidence
        .into_iter()
        .zip(adjusted)
        .map(|(e, p_adjusted)| {
            let dominates = p_adjusted < cfg.alpha;
            if dominates {
                network.add_edge(e.high, e.low);
            }
            PairSummary {
                low: e.low,
                high: e.high,
                diff_ci: e.diff_ci,
                p_raw: e.p_raw,
                p_adjusted,
                dominates,
            }
        })
        .collect();
    let density = network_density(&network)?;
    Ok(DominanceResult {
        config: *cfg,
        order: data.labels(),
        sample_means: data.groups().iter().map(|g| g.mean).collect(),
        sample_sizes: data.groups().iter().map(|g| g.values.len()).collect(),
        mean_cis,
        pairs,
        network,
        density,
    })
}

/// Full analysis: mean CIs per category, mean-difference CIs and Mann-Whitney
/// tests for every sorted pair, Benjamini-Yekutieli adjustment, network and
/// density.
pub fn infer_dominance(data: &GroupedData, cfg: &AnalysisConfig) -> Result<DominanceResult> {
    cfg.validate()?;
    if data.len() < 2 {
        return Err(Error::NothingToOrder);
    }
    let mean_cis = (0..data.len())
        .map(|i| category_mean_ci(data, cfg, i))
        .collect::<Result<Vec<_>>>()?;
    let evidence = sorted_pairs(data.len())
        .into_iter()
        .enumerate()
        .map(|(k, (low, high))| pair_evidence(data, cfg, k, low, high))
        .collect::<Result<Vec<_>>>()?;
    assemble(data, cfg, mean_cis, evidence)
}

/// Decision rule for the bootstrap baselines: dominance iff the lower end of
/// the higher-minus-lower interval is strictly positive.
pub fn check_lower_bound_rule(diff_ci: &ConfidenceInterval) -> bool {
    diff_ci.lower > 0.0
}

/// Edges over `n(n-1)/2`, the most a mean-sorted dominance DAG can hold.
pub fn network_density(net: &DominanceNetwork) -> Result<f64> {
    let n = net.nodes.len();
    if n < 2 {
        return Err(Error::UndefinedDensity);
    }
    Ok(net.edge_count() as f64 / (n * (n - 1) / 2) as f64)
}

/// Every category reachable from `node` along dominance edges.
pub fn dominated_set(net: &DominanceNetwork, node: &str) -> Result<BTreeSet<String>> {
    let start = net.index_of(node)?;
    let mut seen = vec![false; net.nodes.len()];
    let mut stack = vec![start];
    let mut out = BTreeSet::new();
    while let Some(i) = stack.pop() {
        for j in net.successors(i) {
            if !seen[j] {
                seen[j] = true;
                out.insert(net.nodes[j].clone());
                stack.push(j);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{group_by_category, CiMethod, ObservationSet};

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn truth_network() -> DominanceNetwork {
        let mut net = DominanceNetwork::new(labels(&["C1", "C2", "C3", "C4", "C5"]), 0.05);
        for i in 0..4 {
            net.add_edge(4, i);
        }
        net
    }

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn lower_bound_rule_is_strict() {
        let ci = |lower, upper| ConfidenceInterval {
            lower,
            upper,
            level: 0.95,
            method: CiMethod::Percentile,
            point_estimate: 0.5 * (lower + upper),
            fallback: false,
        };
        assert!(check_lower_bound_rule(&ci(0.5, 2.0)));
        assert!(!check_lower_bound_rule(&ci(-0.1, 2.0)));
        assert!(!check_lower_bound_rule(&ci(0.0, 1.0)));
    }

    #[test]
    fn density_values() {
        let empty = DominanceNetwork::new(labels(&["C1", "C2", "C3", "C4", "C5"]), 0.05);
        assert_eq!(network_density(&empty).unwrap(), 0.0);
        assert_eq!(network_density(&truth_network()).unwrap(), 0.4);
        let mut chain = DominanceNetwork::new(labels(&["a", "b", "c"]), 0.05);
        chain.add_edge(2, 1);
        chain.add_edge(1, 0);
        chain.add_edge(2, 0);
        assert_eq!(network_density(&chain).unwrap(), 1.0);
        let single = DominanceNetwork::new(labels(&["a"]), 0.05);
        assert_eq!(network_density(&single), Err(Error::UndefinedDensity));
    }

    #[test]
    fn reachability() {
        let mut net = DominanceNetwork::new(labels(&["A", "B", "C", "D"]), 0.05);
        net.add_edge_by_label("A", "B").unwrap();
        net.add_edge_by_label("B", "C").unwrap();
        assert_eq!(dominated_set(&net, "A").unwrap(), set(&["B", "C"]));
        assert!(dominated_set(&net, "D").unwrap().is_empty());
        assert_eq!(
            dominated_set(&net, "Z"),
            Err(Error::UnknownCategory("Z".into()))
        );
        let truth = truth_network();
        assert_eq!(
            dominated_set(&truth, "C5").unwrap(),
            set(&["C1", "C2", "C3", "C4"])
        );
        assert!(dominated_set(&truth, "C1").unwrap().is_empty());
    }

    #[test]
    fn edges_are_deduplicated_and_cycles_detected() {
        let mut net = DominanceNetwork::new(labels(&["a", "b"]), 0.05);
        assert!(net.add_edge(1, 0));
        assert!(!net.add_edge(1, 0));
        assert!(!net.add_edge(1, 1));
        assert!(net.is_acyclic());
        net.add_edge(0, 1);
        assert!(!net.is_acyclic());
    }

    #[test]
    fn identical_groups_have_no_edges() {
        let values: Vec<f64> = (0..40).map(|i| ((i * 37) % 23) as f64).collect();
        let obs: ObservationSet = values
            .iter()
            .map(|&v| ("left", v))
            .chain(values.iter().map(|&v| ("right", v)))
            .collect();
        let data = group_by_category(&obs).unwrap();
        let cfg = AnalysisConfig {
            reps: 200,
            ..Default::default()
        };
        let res = infer_dominance(&data, &cfg).unwrap();
        assert_eq!(res.network.edge_count(), 0);
        assert_eq!(res.pairs.len(), 1);
        assert_eq!(res.density, 0.0);
    }

    #[test]
    fn single_category_has_nothing_to_order() {
        let obs: ObservationSet = [("a", 1.0), ("a", 2.0)].into_iter().collect();
        let data = group_by_category(&obs).unwrap();
        assert_eq!(
            infer_dominance(&data, &AnalysisConfig::default()),
            Err(Error::NothingToOrder)
        );
    }
}
