//! Thread-parallel drivers with output identical to the serial core.
//!
//! Work fans out over categories, pairs and chunks of replicates. Each
//! replicate reads its own window of the keystream, so results do not depend
//! on the thread count.

use domorder_core::dominance::{assemble, mean_stream, pair_stream, sorted_pairs, PairEvidence};
use domorder_core::resampling::{
    fill_mean_diff_replicates, fill_mean_replicates, interval_for_diff, interval_for_mean,
};
use domorder_core::simulation::{
    check_benchmark_inputs, dataset_stream, score_dataset, BenchmarkReport, DecisionMethod,
    ScenarioSpec,
};
use domorder_core::types::sample_mean;
use domorder_core::{
    mann_whitney_one_sided, AnalysisConfig, DominanceResult, Error, GroupedData, ReplicateKind,
    ReplicateSet, Result, RngStream, Side,
};
use rayon::prelude::*;

const CHUNK: usize = 128;

pub fn bootstrap_mean_par(values: &[f64], reps: usize, stream: &RngStream) -> Result<ReplicateSet> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if reps == 0 {
        return Err(Error::InvalidConfig("reps must be at least 1"));
    }
    let mut replicates = vec![0.0; reps];
    replicates
        .par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(c, out)| fill_mean_replicates(values, stream, c * CHUNK, out));
    Ok(ReplicateSet {
        replicates,
        source_stat: sample_mean(values),
        kind: ReplicateKind::Mean,
    })
}

pub fn bootstrap_mean_diff_par(
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
    if reps == 0 {
        return Err(Error::InvalidConfig("reps must be at least 1"));
    }
    let mut replicates = vec![0.0; reps];
    replicates
        .par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(c, out)| fill_mean_diff_replicates(values_p, values_q, stream, c * CHUNK, out));
    Ok(ReplicateSet {
        replicates,
        source_stat: sample_mean(values_q) - sample_mean(values_p),
        kind: ReplicateKind::MeanDiff,
    })
}

/// Parallel counterpart of [`domorder_core::infer_dominance`].
pub fn infer_dominance_par(data: &GroupedData, cfg: &AnalysisConfig) -> Result<DominanceResult> {
    cfg.validate()?;
    if data.len() < 2 {
        return Err(Error::NothingToOrder);
    }
    let groups = data.groups();
    let mean_cis = (0..data.len())
        .into_par_iter()
        .map(|i| {
            let values = &groups[i].values;
            let reps = bootstrap_mean_par(values, cfg.reps, &mean_stream(cfg, i))?;
            interval_for_mean(values, &reps, cfg.ci_method, cfg.alpha)
        })
        .collect::<Result<Vec<_>>>()?;
    let evidence = sorted_pairs(data.len())
        .into_par_iter()
        .enumerate()
        .map(|(k, (low, high))| {
            let (p, q) = (&groups[low].values, &groups[high].values);
            let reps = bootstrap_mean_diff_par(p, q, cfg.reps, &pair_stream(cfg, k))?;
            let diff_ci = interval_for_diff(p, q, &reps, cfg.ci_method, cfg.alpha)?;
            let p_raw = mann_whitney_one_sided(p, q)?.p_value;
            Ok(PairEvidence {
                low,
                high,
                diff_ci,
                p_raw,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(data, cfg, mean_cis, evidence)
}

/// Parallel counterpart of [`domorder_core::simulation::run_benchmark`];
/// datasets are scored concurrently.
pub fn run_benchmark_par(
    methods: &[DecisionMethod],
    p1_grid: &[f64],
    datasets_per_level: usize,
    spec: &ScenarioSpec,
    cfg: &AnalysisConfig,
) -> Result<BenchmarkReport> {
    check_benchmark_inputs(methods, p1_grid, spec, cfg)?;
    let tasks: Vec<(usize, usize)> = (0..p1_grid.len())
        .flat_map(|l| (0..datasets_per_level).map(move |d| (l, d)))
        .collect();
    let flat = tasks
        .par_iter()
        .map(|&(l, d)| {
            score_dataset(
                spec,
                p1_grid[l],
                methods,
                cfg,
                &dataset_stream(cfg.seed, l, d),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut flat = flat.into_iter();
    let scores: Vec<Vec<_>> = p1_grid
        .iter()
        .map(|_| flat.by_ref().take(datasets_per_level).collect())
        .collect();
    Ok(BenchmarkReport::from_scores(methods, p1_grid, &scores))
}
