//! Wall-clock comparison of percentile and BCa mean-difference intervals.

use std::time::Instant;

use domorder_core::resampling::mean_diff_ci;
use domorder_core::simulation::{sample_mixture, BenchmarkReport, ScenarioSpec, TimingRow};
use domorder_core::{AnalysisConfig, CiMethod, Result, RngStream};

/// Seconds taken by one `mean_diff_ci` call.
pub fn time_mean_diff_ci(
    values_p: &[f64],
    values_q: &[f64],
    cfg: &AnalysisConfig,
    stream: &RngStream,
) -> Result<f64> {
    let start = Instant::now();
    let _ = mean_diff_ci(values_p, values_q, cfg, stream)?;
    Ok(start.elapsed().as_secs_f64())
}

/// Times percentile and BCa on two simulated groups of `n` values each (the
/// C1 and C5 mixtures of the default scenario), for every `n` in `sizes`.
/// Both methods see the same data and the same replicate stream.
pub fn timing_benchmark(sizes: &[usize], reps: usize, seed: u64) -> Result<BenchmarkReport> {
    let spec = ScenarioSpec::default();
    let mut report = BenchmarkReport::default();
    for (i, &n) in sizes.iter().enumerate() {
        let root = RngStream::new(seed, 0).derive(i as u64);
        let p = sample_mixture(&spec.base, n, &root.derive(0))?;
        let q = sample_mixture(&spec.dominant, n, &root.derive(1))?;
        for method in [CiMethod::Percentile, CiMethod::Bca] {
            let cfg = AnalysisConfig {
                reps,
                ci_method: method,
                seed,
                ..Default::default()
            };
            let seconds = time_mean_diff_ci(&p, &q, &cfg, &root.derive(2))?;
            report.timings.push(TimingRow { method, n, seconds });
        }
    }
    Ok(report)
}
