use loadshare_core::*;

/// Sample mean and its standard error.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn first_spacing_mean_is_one_over_k_theta() {
    let spec = ModelSpec::kim_kvam(4).unwrap();
    let p = Params::new(2.0, vec![1.5, 0.7, 3.0]).unwrap();
    let mut rng = RngState::new(2024);
    let draws: Vec<f64> = (0..100_000)
        .map(|_| sample_system(&spec, &p, &mut rng).unwrap()[0])
        .collect();
    let (mean, se) = mean_se(&draws);
    assert!((mean - 0.125).abs() <= 3.0 * se, "{mean} ± {se}");
}

#[test]
fn first_column_sum_matches_exponential_total() {
    let spec = ModelSpec::kim_kvam(3).unwrap();
    let p = Params::new(1.0, vec![1.0, 1.0]).unwrap();
    let n = 10_000;
    let data = sample_dataset(&spec, &p, n, &mut RngState::new(5)).unwrap();
    let total: f64 = (0..n).map(|i| data.get(i, 0)).sum();
    // sum of n Exp(3) draws: mean n/3, sd sqrt(n)/3
    let expected = n as f64 / 3.0;
    let se = (n as f64).sqrt() / 3.0;
    assert!((total - expected).abs() <= 3.0 * se, "{total}");
}

#[test]
fn every_stage_spacing_has_the_right_mean() {
    // constant-hazard stage: E[T] = 1/r; linear-hazard stage: E[T] = sqrt(π/(2r))
    let spec = ModelSpec::ssk(5, 2).unwrap();
    let p = Params::new(0.8, vec![1.3, 0.6, 2.2, 4.0]).unwrap();
    let mut rng = RngState::new(77);
    let rows: Vec<Vec<f64>> = (0..100_000)
        .map(|_| sample_system(&spec, &p, &mut rng).unwrap())
        .collect();
    for stage in 0..5 {
        let rate = (5 - stage) as f64 * p.multiplier(stage) * p.theta();
        let expected = if spec.is_linear_stage(stage) {
            (std::f64::consts::PI / (2.0 * rate)).sqrt()
        } else {
            1.0 / rate
        };
        let col: Vec<f64> = rows.iter().map(|r| r[stage]).collect();
        let (mean, se) = mean_se(&col);
        assert!(
            (mean - expected).abs() <= 3.0 * se,
            "stage {stage}: {mean} vs {expected}"
        );
    }
}

#[test]
fn linear_stage_exposure_is_exponential() {
    let spec = ModelSpec::ssk(4, 2).unwrap();
    let p = Params::new(1.7, vec![0.4, 2.5, 0.9]).unwrap();
    let mut rng = RngState::new(99);
    let rows: Vec<Vec<f64>> = (0..100_000)
        .map(|_| sample_system(&spec, &p, &mut rng).unwrap())
        .collect();
    for stage in 2..4 {
        let m = (4 - stage) as f64;
        let y: Vec<f64> = rows.iter().map(|r| 0.5 * m * r[stage] * r[stage]).collect();
        let (mean, se) = mean_se(&y);
        let expected = 1.0 / (p.multiplier(stage) * p.theta());
        assert!(
            (mean - expected).abs() <= 3.0 * se,
            "stage {stage}: {mean} vs {expected}"
        );
        // exponential: sd equals mean
        let sd = se * (y.len() as f64).sqrt();
        assert!((sd / mean - 1.0).abs() < 0.02);
    }
}

#[test]
fn simulated_spacings_are_positive() {
    let spec = ModelSpec::ssk(6, 3).unwrap();
    let p = Params::new(10.0, vec![10.0; 5]).unwrap();
    let data = sample_dataset(&spec, &p, 20_000, &mut RngState::new(1)).unwrap();
    assert!(data.as_matrix().as_slice().iter().all(|&t| t > 0.0));
}

#[test]
fn bias_and_mse_shrink_with_sample_size() {
    for spec in [
        ModelSpec::kim_kvam(3).unwrap(),
        ModelSpec::ssk(3, 2).unwrap(),
    ] {
        let truth = Params::new(1.2, vec![0.8, 2.0]).unwrap();
        let studies: Vec<McSummary> = [5, 20, 80]
            .iter()
            .map(|&n| mc_study(&spec, &truth, n, 10_000, 13).unwrap())
            .collect();
        for w in studies.windows(2) {
            let (small, large) = (&w[0], &w[1]);
            for q in 0..3 {
                let noise = 3.0 * (small.std_error[q].powi(2) + large.std_error[q].powi(2)).sqrt();
                assert!(large.bias[q].abs() <= small.bias[q].abs() + noise);
                assert!(large.mse[q] < small.mse[q]);
            }
        }
        for s in &studies {
            for q in 0..3 {
                assert!(s.mse[q] >= s.bias[q] * s.bias[q] - 1e-12);
            }
        }
    }
}

#[test]
fn mean_inflation_matches_gamma_identity_small_scale() {
    // n/(n-1)·truth, at a smaller replicate count than the acceptance run
    let spec = ModelSpec::kim_kvam(3).unwrap();
    let truth = Params::new(1.0, vec![1.0, 1.0]).unwrap();
    let s = mc_study(&spec, &truth, 10, 20_000, 3).unwrap();
    for (q, reference) in s.reference_mean().iter().enumerate() {
        assert!((s.mean_estimates[q] - reference).abs() <= 3.0 * s.std_error[q]);
    }
}
