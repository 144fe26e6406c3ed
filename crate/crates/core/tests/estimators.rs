use ergm_core::mcmc::{
    default_proposal, enumerate_log_partition, er_log_partition, estimate_acceptance_ratio, estimate_importance,
    estimate_mcmle, AlphaKind, ChainConfig, EstimatorResult, Sampler,
};
use ergm_core::ModelSpec;

/// Mean and standard error of `exp(log_estimate − truth)` over replications.
fn mean_and_se(results: &[EstimatorResult], truth: f64) -> (f64, f64) {
    let xs: Vec<f64> = results.iter().map(|r| (r.log_estimate - truth).exp()).collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn importance_sampling_is_unbiased() {
    let model = ModelSpec::edge_triangle(0.2, 0.1);
    let truth = enumerate_log_partition(&model, 4).unwrap();
    let p = default_proposal(&model);
    let runs: Vec<_> = (0..200).map(|s| estimate_importance(&model, 4, p, 500, s).unwrap()).collect();
    let (mean, se) = mean_and_se(&runs, truth);
    assert!((mean - 1.0).abs() < 3.0 * se, "{mean} ± {se}");
}

#[test]
fn mcmle_is_unbiased() {
    let model = ModelSpec::erdos_renyi(1.0);
    let model0 = ModelSpec::erdos_renyi(0.5);
    let truth = er_log_partition(1.0, 4) - er_log_partition(0.5, 4);
    let runs: Vec<_> = (0..200)
        .map(|s| estimate_mcmle(&model, &model0, 1000, Sampler::Metropolis, &ChainConfig::new(4, 0, s)).unwrap())
        .collect();
    let (mean, se) = mean_and_se(&runs, truth);
    assert!((mean - 1.0).abs() < 3.0 * se, "{mean} ± {se}");
}

#[test]
fn glauber_mcmle_is_unbiased() {
    let model = ModelSpec::edge_triangle(0.1, 0.3);
    let model0 = ModelSpec::edge_triangle(0.0, 0.2);
    let truth = enumerate_log_partition(&model, 4).unwrap() - enumerate_log_partition(&model0, 4).unwrap();
    let runs: Vec<_> = (0..200)
        .map(|s| estimate_mcmle(&model, &model0, 1000, Sampler::Glauber, &ChainConfig::new(4, 0, s)).unwrap())
        .collect();
    let (mean, se) = mean_and_se(&runs, truth);
    assert!((mean - 1.0).abs() < 3.0 * se, "{mean} ± {se}");
}

#[test]
fn acceptance_ratio_is_nearly_unbiased() {
    let model = ModelSpec::erdos_renyi(1.0);
    let model0 = ModelSpec::erdos_renyi(0.0);
    let truth = er_log_partition(1.0, 4) - er_log_partition(0.0, 4);
    for alpha in [AlphaKind::Constant, AlphaKind::GeometricMean] {
        let runs: Vec<_> = (0..200)
            .map(|s| {
                estimate_acceptance_ratio(&model, &model0, alpha, 2000, 2000, Sampler::Metropolis, &ChainConfig::new(4, 0, s))
                    .unwrap()
            })
            .collect();
        let (mean, se) = mean_and_se(&runs, truth);
        assert!((mean - 1.0).abs() < 3.0 * se, "{alpha:?}: {mean} ± {se}");
    }
}

#[test]
fn acceptance_ratio_matches_closed_form() {
    let model = ModelSpec::erdos_renyi(1.0);
    let model0 = ModelSpec::erdos_renyi(0.0);
    // z(1)/z(0) = ((1 + e)/2)^6
    let truth = 6.0 * ((1.0 + std::f64::consts::E) / 2.0).ln();
    for alpha in [AlphaKind::Constant, AlphaKind::GeometricMean] {
        let r = estimate_acceptance_ratio(&model, &model0, alpha, 100_000, 100_000, Sampler::Metropolis, &ChainConfig::new(4, 0, 5))
            .unwrap();
        assert!(((r.log_estimate - truth).exp() - 1.0).abs() < 0.02, "{alpha:?}: {}", r.log_estimate);
    }
}

#[test]
fn geometric_alpha_reduces_variance() {
    let model = ModelSpec::erdos_renyi(1.0);
    let model0 = ModelSpec::erdos_renyi(0.0);
    let spread = |alpha: AlphaKind| {
        let xs: Vec<f64> = (0..100)
            .map(|s| {
                let r = estimate_acceptance_ratio(&model, &model0, alpha, 500, 500, Sampler::Metropolis, &ChainConfig::new(4, 0, s))
                    .unwrap();
                r.log_estimate.exp()
            })
            .collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
    };
    let constant = spread(AlphaKind::Constant);
    let geometric = spread(AlphaKind::GeometricMean);
    assert!(geometric < constant, "geometric {geometric} vs constant {constant}");
}

#[test]
fn thread_count_does_not_change_results() {
    let model = ModelSpec::edge_triangle(-0.45, 0.2);
    let p = default_proposal(&model);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| estimate_importance(&model, 5, p, 30_000, 77).unwrap())
    };
    assert_eq!(run(1), run(4));
}
