use domorder_core::simulation::{
    generate_scenario, sample_mixture_tagged, Component, MixtureParams, ScenarioSpec,
};
use domorder_core::{
    bootstrap_mean, group_by_category, infer_dominance, mean_ci, AnalysisConfig, CiMethod,
    ObservationSet, RngStream,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn normal_sample(seed: u64, n: usize, mu: f64, sd: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = Normal::new(mu, sd).unwrap();
    (0..n).map(|_| d.sample(&mut rng)).collect()
}

#[test]
fn percentile_coverage_is_near_nominal() {
    let cfg = AnalysisConfig {
        reps: 400,
        ..Default::default()
    };
    let runs = 300;
    let covered = (0..runs)
        .filter(|&s| {
            let x = normal_sample(s, 40, 3.0, 2.0);
            let (_, ci) = mean_ci(&x, &cfg, &RngStream::new(s, 1)).unwrap();
            ci.lower <= 3.0 && 3.0 <= ci.upper
        })
        .count();
    let rate = covered as f64 / runs as f64;
    assert!((0.89..=0.99).contains(&rate), "coverage {rate}");
}

#[test]
fn bootstrap_means_are_close_to_gaussian() {
    // Exponential data, n = 200: the bootstrap distribution of the mean
    // should have small skew and near-zero excess kurtosis.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let exp = rand_distr::Exp::new(1.0).unwrap();
    let x: Vec<f64> = (0..200).map(|_| exp.sample(&mut rng)).collect();
    let reps = bootstrap_mean(&x, 4000, &RngStream::new(4, 0))
        .unwrap()
        .replicates;
    let k = reps.len() as f64;
    let mean = reps.iter().sum::<f64>() / k;
    let m2 = reps.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / k;
    let m3 = reps.iter().map(|r| (r - mean).powi(3)).sum::<f64>() / k;
    let m4 = reps.iter().map(|r| (r - mean).powi(4)).sum::<f64>() / k;
    assert!((m3 / m2.powf(1.5)).abs() < 0.35);
    assert!((m4 / (m2 * m2) - 3.0).abs() < 0.5);
    let sample_mean = x.iter().sum::<f64>() / 200.0;
    assert!((mean - sample_mean).abs() < 0.02);
}

#[test]
fn mixture_component_frequencies() {
    let p = ScenarioSpec::default().base.with_p1(0.2);
    let draws = sample_mixture_tagged(&p, 100_000, &RngStream::new(8, 0)).unwrap();
    let freq = |c: Component| draws.iter().filter(|d| d.1 == c).count() as f64 / 1e5;
    assert!((freq(Component::Normal) - 0.5).abs() < 0.01);
    assert!((freq(Component::Cauchy) - 0.3).abs() < 0.01);
    assert!((freq(Component::Uniform) - 0.2).abs() < 0.01);
    let uniform: Vec<f64> = draws
        .iter()
        .filter(|d| d.1 == Component::Uniform)
        .map(|d| d.0)
        .collect();
    assert!(uniform.iter().all(|v| (-400.0..400.0).contains(v)));
    let umean = uniform.iter().sum::<f64>() / uniform.len() as f64;
    assert!(umean.abs() < 5.0);
}

#[test]
fn pure_normal_mixture_mean() {
    let p = MixtureParams {
        p1: 0.5,
        ..ScenarioSpec::default().base
    };
    let draws = sample_mixture_tagged(&p, 50_000, &RngStream::new(2, 0)).unwrap();
    let normals: Vec<f64> = draws
        .iter()
        .filter(|d| d.1 == Component::Normal)
        .map(|d| d.0)
        .collect();
    let mean = normals.iter().sum::<f64>() / normals.len() as f64;
    assert!((mean - 80.0).abs() < 0.5);
    assert!(draws.iter().all(|d| d.1 != Component::Cauchy));
}

#[test]
fn dominant_category_separates_from_the_rest() {
    let spec = ScenarioSpec::default();
    let cfg = AnalysisConfig {
        reps: 200,
        ..Default::default()
    };
    for seed in 0..10 {
        let obs = generate_scenario(&spec, &RngStream::new(seed, 0)).unwrap();
        let r = infer_dominance(&group_by_category(&obs).unwrap(), &cfg).unwrap();
        let c5 = r.network.index_of("C5").unwrap();
        for other in ["C1", "C2", "C3", "C4"] {
            assert!(r.network.has_edge(c5, r.network.index_of(other).unwrap()));
        }
    }
}

fn shifted(obs: &ObservationSet, shift: f64) -> ObservationSet {
    obs.records
        .iter()
        .map(|o| (o.category.clone(), o.value + shift))
        .collect()
}

#[test]
fn edges_and_tests_ignore_a_common_shift() {
    let obs =
        generate_scenario(&ScenarioSpec::default().with_p1(0.2), &RngStream::new(3, 0)).unwrap();
    let cfg = AnalysisConfig {
        reps: 300,
        ..Default::default()
    };
    let a = infer_dominance(&group_by_category(&obs).unwrap(), &cfg).unwrap();
    let b = infer_dominance(&group_by_category(&shifted(&obs, 1000.0)).unwrap(), &cfg).unwrap();
    assert_eq!(a.order, b.order);
    assert_eq!(a.network.edges(), b.network.edges());
    for (pa, pb) in a.pairs.iter().zip(&b.pairs) {
        assert_eq!(pa.p_raw, pb.p_raw);
        assert!((pa.diff_ci.lower - pb.diff_ci.lower).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn networks_are_strict_partial_order_candidates(
        seed in any::<u64>(),
        shifts in prop::collection::vec(0.0f64..3.0, 2..6),
        method in prop::sample::select(vec![CiMethod::Percentile, CiMethod::Bca, CiMethod::Normal]),
    ) {
        let obs: ObservationSet = shifts
            .iter()
            .enumerate()
            .flat_map(|(i, s)| {
                normal_sample(seed ^ i as u64, 30, *s, 1.0).into_iter().map(move |v| (format!("g{i}"), v))
            })
            .collect();
        let cfg = AnalysisConfig { reps: 100, ci_method: method, seed, ..Default::default() };
        let r = infer_dominance(&group_by_category(&obs).unwrap(), &cfg).unwrap();
        let net = &r.network;
        prop_assert!(net.is_acyclic());
        for &(a, b) in net.edges() {
            prop_assert!(a != b);
            prop_assert!(!net.has_edge(b, a));
            // Edges only run from a higher-sorted to a lower-sorted category.
            prop_assert!(a > b);
        }
        prop_assert!((0.0..=1.0).contains(&r.density));
    }
}
