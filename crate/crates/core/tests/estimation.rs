mod common;

use common::tanh_sinh;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use telehazard::datasets;
use telehazard::estimation::{
    confidence_band, defensibility_test, hazard_estimate, kde_cdf, kde_density, kernel_l2_constant, normal_quantile,
    BandConfig, KernelSpec, Sample,
};
use telehazard::presets;

const K: KernelSpec = KernelSpec::EPANECHNIKOV;

/// Φ(z) − 1/2 by composite Simpson on the normal density.
fn phi_minus_half(z: f64) -> f64 {
    let n = 20_000;
    let h = z / n as f64;
    let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut sum = pdf(0.0) + pdf(z);
    for i in 1..n {
        sum += pdf(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

/// Upper-α critical point by bisection on the Simpson oracle.
fn quantile_oracle(alpha: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 10.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if 0.5 - phi_minus_half(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn normal_quantile_against_oracle() {
    for alpha in [0.001, 0.01, 0.025, 0.05, 0.1, 0.158_655, 0.25, 0.4] {
        let got = normal_quantile(alpha).unwrap();
        let want = quantile_oracle(alpha);
        assert!((got - want).abs() < 1e-9, "alpha={alpha}: {got} vs {want}");
    }
    assert!((normal_quantile(0.025).unwrap() - 1.959_964).abs() < 1e-6);
    assert!((normal_quantile(0.158_655).unwrap() - 1.0).abs() < 1e-5);
    assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
}

#[test]
fn kernel_constants() {
    let r = K.support_radius();
    assert_eq!(r, 5f64.sqrt());
    assert_eq!(K.density(0.0), 3.0 / (4.0 * 5f64.sqrt()));
    assert_eq!(K.density(r), 0.0);
    assert_eq!(K.density(-r), 0.0);
    assert_eq!(K.density(r + 1e-9), 0.0);
    let l2 = tanh_sinh(|u| K.density(u).powi(2), -r, r, 1e-14);
    assert!((kernel_l2_constant(&K) - l2).abs() < 1e-12);
    assert!((l2 - 0.268_328_157_299_974_8).abs() < 1e-12);
    let mass = tanh_sinh(|u| K.density(u), -r, r, 1e-14);
    assert!((mass - 1.0).abs() < 1e-13);
    assert_eq!(K.cdf(-r), 0.0);
    assert_eq!(K.cdf(r), 1.0);
    assert_eq!(K.cdf(0.0), 0.5);
}

#[test]
fn melanoma_density_shape() {
    let s = datasets::builtin("melanoma_46").unwrap().sample;
    let data = s.values();
    let grid: Vec<f64> = (0..=2600).map(|k| k as f64 * 0.1).collect();
    let f: Vec<f64> = grid.iter().map(|&t| kde_density(data, &K, 6.0, t).unwrap()).collect();
    let (peak, _) = f.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    assert!((20.0..=60.0).contains(&grid[peak]), "peak at {}", grid[peak]);
    assert!(kde_density(data, &K, 6.0, 230.0).unwrap() > 0.0);
    assert_eq!(
        kde_density(data, &K, 6.0, 234.0 + 6.0 * 5f64.sqrt() + 1e-6).unwrap(),
        0.0
    );
}

#[test]
fn density_integrates_to_one_and_cdf_is_its_integral() {
    for (name, h) in [("melanoma_46", 6.0), ("service_86", 75.0)] {
        let s = datasets::builtin(name).unwrap().sample;
        let data = s.values();
        let reach = h * K.support_radius();
        let lo = data[0] - reach;
        let hi = data[data.len() - 1] + reach;
        // Integrate knot to knot: the estimate is piecewise polynomial.
        let mut knots: Vec<f64> = data.iter().flat_map(|&x| [x - reach, x + reach]).collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let mut acc = 0.0;
        let mut prev_cdf = 0.0;
        for w in knots.windows(2) {
            acc += tanh_sinh(|t| kde_density(data, &K, h, t).unwrap(), w[0], w[1], 1e-14);
            let cdf = kde_cdf(data, &K, h, w[1]).unwrap();
            assert!((cdf - acc).abs() < 1e-9, "{name} at {}: {cdf} vs {acc}", w[1]);
            assert!(cdf >= prev_cdf);
            prev_cdf = cdf;
        }
        assert!((acc - 1.0).abs() < 1e-8);
        assert_eq!(kde_cdf(data, &K, h, lo).unwrap(), 0.0);
        assert_eq!(kde_cdf(data, &K, h, hi).unwrap(), 1.0);
    }
}

#[test]
fn exponential_sample_recovers_constant_hazard() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let exp = Exp::new(0.0125).unwrap();
    let values: Vec<f64> = (0..500).map(|_| exp.sample(&mut rng)).collect();
    let s = Sample::new(values).unwrap();
    let data = s.values();
    let n = data.len();
    // Central part of the sample: between the 20% and 60% order statistics.
    let (lo, hi) = (data[n / 5], data[3 * n / 5]);
    for k in 0..=50 {
        let t = lo + (hi - lo) * k as f64 / 50.0;
        let r = hazard_estimate(data, &K, 15.0, t).unwrap();
        assert!((r / 0.0125 - 1.0).abs() < 0.3, "t={t}: {r}");
    }
}

#[test]
fn band_contains_estimate_and_is_symmetric() {
    let s = datasets::builtin("melanoma_46").unwrap().sample;
    let cfg = BandConfig::uniform(&s, 6.0, 0.025).unwrap();
    let band = confidence_band(&s, &K, &cfg).unwrap();
    assert_eq!(band.points.len() + band.unusable.len(), 512);
    for p in &band.points {
        assert!(p.lower < p.r_hat && p.r_hat < p.upper);
        assert!(((p.upper - p.r_hat) - (p.r_hat - p.lower)).abs() < 1e-15);
    }
}

#[test]
fn band_contains_case_study_baselines() {
    for id in ["app1", "app2"] {
        let app = presets::application(id).unwrap();
        let s = datasets::builtin(app.dataset).unwrap().sample;
        let cfg = BandConfig::uniform(&s, app.bandwidth, app.alpha).unwrap();
        let band = confidence_band(&s, &K, &cfg).unwrap();
        for p in &band.points {
            let r = app.baseline.hazard_at(p.t).unwrap();
            assert!(p.lower <= r && r <= p.upper, "{id} at {}", p.t);
        }
    }
}

#[test]
fn half_width_shrinks_with_replication() {
    let base = datasets::builtin("melanoma_46").unwrap().sample;
    let copies = |k: usize| Sample::new(base.values().iter().copied().cycle().take(k * base.len()).collect()).unwrap();
    let grid = vec![30.0, 50.0, 80.0];
    let widths = |s: &Sample| {
        let cfg = BandConfig::new(s, 6.0, 0.025, grid.clone()).unwrap();
        confidence_band(s, &K, &cfg)
            .unwrap()
            .points
            .iter()
            .map(|p| p.half_width)
            .collect::<Vec<_>>()
    };
    let (w1, w4) = (widths(&copies(1)), widths(&copies(4)));
    for (a, b) in w1.iter().zip(&w4) {
        assert!((b / a - 0.5).abs() < 1e-12);
    }
}

#[test]
fn defensibility_golden_cases() {
    let app = presets::application("app1").unwrap();
    let s = datasets::builtin(app.dataset).unwrap().sample;
    let cfg = BandConfig::uniform(&s, app.bandwidth, app.alpha).unwrap();
    let ok = defensibility_test(&s, &K, &cfg, &app.baseline, 0.0004).unwrap();
    assert!(ok.holds && ok.max_admissible_c >= 0.0004);
    let bad = defensibility_test(&s, &K, &cfg, &app.baseline, 0.01).unwrap();
    assert!(!bad.holds);

    let app = presets::application("app2").unwrap();
    let s = datasets::builtin(app.dataset).unwrap().sample;
    let cfg = BandConfig::uniform(&s, app.bandwidth, app.alpha).unwrap();
    let ok = defensibility_test(&s, &K, &cfg, &app.baseline, 0.00025).unwrap();
    assert!(ok.holds && ok.max_admissible_c >= 0.00025);
}

#[test]
fn defensibility_is_monotone_in_c_with_sharp_threshold() {
    for id in ["app1", "app2"] {
        let app = presets::application(id).unwrap();
        let s = datasets::builtin(app.dataset).unwrap().sample;
        let cfg = BandConfig::uniform(&s, app.bandwidth, app.alpha).unwrap();
        let run = |c: f64| defensibility_test(&s, &K, &cfg, &app.baseline, c).unwrap();
        let cmax = run(app.c).max_admissible_c;
        assert!(cmax > 0.0);
        assert!(run(cmax * (1.0 - 1e-6)).holds);
        assert!(!run(cmax * (1.0 + 1e-6)).holds);
        let mut seen_fail = false;
        for k in 1..=40 {
            let holds = run(cmax * 2.0 * k as f64 / 40.0).holds;
            assert!(!(seen_fail && holds), "{id}: holds again after failing");
            seen_fail |= !holds;
        }
    }
}
