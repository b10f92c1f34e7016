use domorder::parallel::{
    bootstrap_mean_diff_par, bootstrap_mean_par, infer_dominance_par, run_benchmark_par,
};
use domorder_core::simulation::{generate_scenario, run_benchmark, DecisionMethod, ScenarioSpec};
use domorder_core::{
    bootstrap_mean, bootstrap_mean_diff, group_by_category, infer_dominance, AnalysisConfig,
    CiMethod, RngStream,
};

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
}

#[test]
fn replicates_do_not_depend_on_thread_count() {
    let x: Vec<f64> = (0..97).map(|i| (i as f64 * 0.37).sin()).collect();
    let y: Vec<f64> = (0..61).map(|i| (i as f64 * 0.11).cos()).collect();
    let s = RngStream::new(21, 3);
    let serial = bootstrap_mean(&x, 1001, &s).unwrap();
    let serial_diff = bootstrap_mean_diff(&x, &y, 1001, &s).unwrap();
    for threads in [1, 2, 4] {
        pool(threads).install(|| {
            assert_eq!(bootstrap_mean_par(&x, 1001, &s).unwrap(), serial);
            assert_eq!(
                bootstrap_mean_diff_par(&x, &y, 1001, &s).unwrap(),
                serial_diff
            );
        });
    }
}

#[test]
fn parallel_analysis_matches_serial() {
    let obs = generate_scenario(
        &ScenarioSpec::default().with_p1(0.15),
        &RngStream::new(5, 0),
    )
    .unwrap();
    let data = group_by_category(&obs).unwrap();
    for method in [CiMethod::Percentile, CiMethod::Bca, CiMethod::Normal] {
        let cfg = AnalysisConfig {
            reps: 250,
            ci_method: method,
            seed: 5,
            ..Default::default()
        };
        let serial = infer_dominance(&data, &cfg).unwrap();
        assert_eq!(
            pool(4)
                .install(|| infer_dominance_par(&data, &cfg))
                .unwrap(),
            serial
        );
        assert_eq!(
            pool(1)
                .install(|| infer_dominance_par(&data, &cfg))
                .unwrap(),
            serial
        );
    }
}

#[test]
fn parallel_benchmark_matches_serial() {
    let spec = ScenarioSpec {
        n_per_category: 30,
        ..ScenarioSpec::default()
    };
    let cfg = AnalysisConfig {
        reps: 100,
        seed: 77,
        ..Default::default()
    };
    let grid = [0.05, 0.3];
    let serial = run_benchmark(&DecisionMethod::ALL, &grid, 3, &spec, &cfg).unwrap();
    let parallel = pool(4)
        .install(|| run_benchmark_par(&DecisionMethod::ALL, &grid, 3, &spec, &cfg))
        .unwrap();
    assert_eq!(parallel, serial);
    assert_eq!(parallel.levels.len(), 10);
}
