//! Independent reference implementations checked against the library.

use domorder_core::resampling::{bca_ci, bootstrap_mean};
use domorder_core::{adjust_benjamini_yekutieli, mann_whitney_one_sided, CiMethod, RngStream};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

/// P(U >= u_obs) by listing every way to give `m` of the `m + n` ranks to x.
fn enumerated_p(x: &[f64], y: &[f64]) -> f64 {
    let (m, n) = (x.len(), y.len());
    let total = m + n;
    let mut pooled: Vec<(f64, bool)> = x
        .iter()
        .map(|&v| (v, false))
        .chain(y.iter().map(|&v| (v, true)))
        .collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));
    let u_of = |y_ranks: &[usize]| y_ranks.iter().sum::<usize>() - n * (n + 1) / 2;
    let observed: Vec<usize> = pooled
        .iter()
        .enumerate()
        .filter(|(_, p)| p.1)
        .map(|(i, _)| i + 1)
        .collect();
    let u_obs = u_of(&observed);
    let (mut hits, mut all) = (0u64, 0u64);
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let ranks: Vec<usize> = (0..total)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| i + 1)
            .collect();
        all += 1;
        if u_of(&ranks) >= u_obs {
            hits += 1;
        }
    }
    hits as f64 / all as f64
}

#[test]
fn mann_whitney_exact_matches_enumeration_for_every_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in 1..10 {
        for n in 1..=(10 - m) {
            for _ in 0..20 {
                let x: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
                let y: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.3).collect();
                let r = mann_whitney_one_sided(&x, &y).unwrap();
                assert!(r.exact);
                assert_eq!(r.p_value, enumerated_p(&x, &y), "m={m} n={n}");
            }
        }
    }
}

proptest! {
    #[test]
    fn mann_whitney_exact_property(
        x in prop::collection::vec(-1e3f64..1e3, 1..6),
        y in prop::collection::vec(-1e3f64..1e3, 1..6),
    ) {
        let mut all: Vec<f64> = x.iter().chain(&y).copied().collect();
        all.sort_by(f64::total_cmp);
        all.dedup();
        prop_assume!(all.len() == x.len() + y.len());
        let r = mann_whitney_one_sided(&x, &y).unwrap();
        prop_assert_eq!(r.p_value, enumerated_p(&x, &y));
    }
}

/// Step-up written from the largest p-value down, then capped at 1.
fn by_reference(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let c: f64 = (1..=m).map(|j| 1.0 / j as f64).sum();
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&a, &b| p[b].total_cmp(&p[a]));
    let mut out = vec![0.0; m];
    let mut best = f64::INFINITY;
    for (pos, &i) in idx.iter().enumerate() {
        let rank = m - pos;
        best = best.min(c * m as f64 / rank as f64 * p[i]);
        out[i] = best.min(1.0);
    }
    out
}

#[test]
fn by_matches_reference_step_up() {
    assert_eq!(
        by_reference(&[0.01, 0.02, 0.03]),
        adjust_benjamini_yekutieli(&[0.01, 0.02, 0.03]).unwrap()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let m = rng.random_range(1..40);
        let p: Vec<f64> = (0..m)
            .map(|_| {
                if rng.random_bool(0.3) {
                    rng.random::<f64>() * 1e-3
                } else {
                    rng.random()
                }
            })
            .collect();
        let ours = adjust_benjamini_yekutieli(&p).unwrap();
        for (a, b) in ours.iter().zip(by_reference(&p)) {
            assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
    }
}

fn type7(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// BCa for the mean, following the textbook recipe with closed-form
/// leave-one-out means.
fn bca_reference(x: &[f64], reps: &[f64], source: f64, alpha: f64) -> (f64, f64) {
    let std = Normal::new(0.0, 1.0).unwrap();
    let k = reps.len() as f64;
    let below = reps.iter().filter(|&&r| r < source).count() as f64;
    let z0 = std.inverse_cdf((below / k).clamp(1.0 / (k + 1.0), k / (k + 1.0)));
    let n = x.len() as f64;
    let sum: f64 = x.iter().sum();
    let loo: Vec<f64> = x.iter().map(|v| (sum - v) / (n - 1.0)).collect();
    let bar = loo.iter().sum::<f64>() / n;
    let num: f64 = loo.iter().map(|t| (bar - t).powi(3)).sum();
    let den: f64 = loo.iter().map(|t| (bar - t).powi(2)).sum();
    let a = num / (6.0 * den.powf(1.5));
    let level = |z: f64| std.cdf(z0 + (z0 + z) / (1.0 - a * (z0 + z)));
    let mut sorted = reps.to_vec();
    sorted.sort_by(f64::total_cmp);
    (
        type7(&sorted, level(std.inverse_cdf(alpha / 2.0))),
        type7(&sorted, level(std.inverse_cdf(1.0 - alpha / 2.0))),
    )
}

#[test]
fn bca_matches_textbook_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..50u64 {
        let n = rng.random_range(5..80);
        // Skewed samples so that both z0 and a are non-trivial.
        let x: Vec<f64> = (0..n)
            .map(|_| -(1.0 - rng.random::<f64>()).ln() * 3.0)
            .collect();
        let reps = bootstrap_mean(&x, 500, &RngStream::new(case, 0)).unwrap();
        let ci = bca_ci(&x, &reps, 0.1).unwrap();
        assert_eq!(ci.method, CiMethod::Bca);
        let (lo, hi) = bca_reference(&x, &reps.replicates, reps.source_stat, 0.1);
        assert!(
            (ci.lower - lo).abs() <= 1e-9 * lo.abs().max(1.0),
            "{} vs {lo}",
            ci.lower
        );
        assert!(
            (ci.upper - hi).abs() <= 1e-9 * hi.abs().max(1.0),
            "{} vs {hi}",
            ci.upper
        );
    }
}
