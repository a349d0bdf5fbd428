//! Monte Carlo checks against closed-form moments and probabilities.

use owc_dmt::capacity::{BoundConstants, CapacityBoundKind};
use owc_dmt::channel::{
    sample_stream, ChannelConfig, ChannelMatrix, ChannelSampler, DistanceGrid, FadingModel, StreamFamily,
    TurbulenceSampler,
};
use owc_dmt::coding::{generate_codebook, pairwise_union_bound, simulate_conditional_error};
use owc_dmt::outage::{below_ordering_threshold, db_to_linear, estimate_outage, estimate_outage_sweep};
use owc_dmt::power::{g_of_mu, solve_mu, trunc_exp_entropy, trunc_exp_mean, InputLaw, Mu};

const N: usize = 1_000_000;

/// Sample mean and standard error.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

fn turbulence_draws(model: FadingModel, seed: u64) -> Vec<f64> {
    let s = TurbulenceSampler::new(&model).unwrap();
    let mut rng = sample_stream(seed, 0);
    (0..N).map(|_| s.sample(&mut rng)).collect()
}

#[test]
fn turbulence_means_within_four_se() {
    let cases = [
        (FadingModel::NegExp, 1.0),
        (FadingModel::GammaGamma { rho1: 3.0, rho2: 3.0 }, 1.0),
        (FadingModel::GammaGamma { rho1: 4.2, rho2: 1.4 }, 1.0),
        (FadingModel::LogNormal { mu_l: -0.1, sigma_l: 0.4 }, (-0.1f64 + 0.08).exp()),
    ];
    for (i, (model, expect)) in cases.into_iter().enumerate() {
        let (m, se) = mean_se(&turbulence_draws(model, 100 + i as u64));
        assert!((m - expect).abs() < 4.0 * se, "{model:?}: mean {m}, expected {expect}, se {se}");
        assert!((model.mean() - expect).abs() < 1e-15);
    }
}

#[test]
fn channel_entry_means_follow_distance_gain() {
    let nu = 0.1;
    let d = vec![1.0, 2.0, 3.0, 4.0];
    let cfg = ChannelConfig::new(2, 2, FadingModel::NegExp)
        .with_geometry(nu, DistanceGrid::from_rows(2, 2, d.clone()).unwrap());
    let sampler = ChannelSampler::new(&cfg).unwrap();
    let mut rng = sample_stream(7, 0);
    let mut cols: Vec<Vec<f64>> = (0..4).map(|_| Vec::with_capacity(N)).collect();
    for _ in 0..N {
        let h = sampler.sample(&mut rng);
        for i in 0..2 {
            for j in 0..2 {
                cols[i * 2 + j].push(h.entries[(i, j)]);
            }
        }
    }
    for (k, xs) in cols.iter().enumerate() {
        let (m, se) = mean_se(xs);
        let expect = (-nu * d[k]).exp();
        assert!((m - expect).abs() < 3.0 * se, "entry {k}: {m} vs {expect}");
    }
}

#[test]
fn truncated_exponential_sample_moments() {
    let law = InputLaw { amp: 2.0, ..solve_mu(1.0, 4).unwrap() };
    let mut rng = sample_stream(11, 0);
    let xs: Vec<f64> = (0..N).map(|_| owc_dmt::power::sample_input(&law, &mut rng)).collect();
    assert!(xs.iter().all(|&x| (0.0..=2.0).contains(&x)));
    let (m, se) = mean_se(&xs);
    assert!((m - 2.0 * 0.25).abs() < 3.0 * se, "mean {m}");
    assert!((trunc_exp_mean(&law) - 0.5).abs() < 1e-12);

    // Variance against A^2 g, with the standard error of the sample variance.
    let n = xs.len() as f64;
    let c2: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    let (var, var_se) = mean_se(&c2);
    let expect = 4.0 * g_of_mu(law.mu.value());
    assert!((var - expect).abs() < 4.0 * var_se, "variance {var} vs {expect}, n = {n}");
}

/// Composite Simpson rule on `[a, b]` with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn entropy_and_variance_match_quadrature() {
    for (alpha, n_t) in [(1.0, 4), (0.8, 2), (0.1, 1)] {
        let law = solve_mu(alpha, n_t).unwrap();
        let Mu::Finite(mu) = law.mu else { panic!() };
        let norm = mu / (-(-mu).exp_m1());
        let f = |x: f64| norm * (-mu * x).exp();
        let h = simpson(|x| -f(x) * f(x).ln(), 0.0, 1.0, 200_000);
        assert!((h - trunc_exp_entropy(&law)).abs() < 1e-8, "entropy {h} vs {}", trunc_exp_entropy(&law));
        let mean = simpson(|x| x * f(x), 0.0, 1.0, 200_000);
        let var = simpson(|x| (x - mean).powi(2) * f(x), 0.0, 1.0, 200_000);
        assert!((var - g_of_mu(mu)).abs() < 1e-10, "variance {var} vs {}", g_of_mu(mu));
    }
}

#[test]
fn siso_outage_matches_exponential_cdf() {
    // Lower-bound outage iff h^2 < (osnr^(2r) - 1) / (L_l osnr^2); h ~ Exp(1).
    let cfg = ChannelConfig::new(1, 1, FadingModel::NegExp).with_power(1.0, 0.5);
    let k = BoundConstants::new(&cfg).unwrap();
    assert!((k.l_l - 0.234_199_326_097_276_64).abs() < 1e-15);
    let osnr = db_to_linear(40.0);
    let r = 0.5;
    let t = ((osnr.powf(2.0 * r) - 1.0) / (k.l_l * osnr * osnr)).sqrt();
    let p = -(-t).exp_m1();
    assert!((p - 0.020_450_614_289_176_431).abs() < 1e-12);
    let e = estimate_outage(&cfg, r, osnr, N as u64, 2024, CapacityBoundKind::Lower).unwrap();
    assert!((e.p_hat - p).abs() <= e.half_width, "p_hat {} vs {p} (ci {})", e.p_hat, e.half_width);
}

#[test]
fn estimator_is_unbiased_across_seeds() {
    let cfg = ChannelConfig::new(2, 1, FadingModel::NegExp).with_power(1.0, 1.0);
    let osnr = db_to_linear(20.0);
    let n = 20_000u64;
    let ps: Vec<f64> = (0..30)
        .map(|s| estimate_outage(&cfg, 0.5, osnr, n, 500 + s, CapacityBoundKind::Lower).unwrap().p_hat)
        .collect();
    let mean = ps.iter().sum::<f64>() / 30.0;
    let reference = estimate_outage(&cfg, 0.5, osnr, N as u64, 99, CapacityBoundKind::Lower).unwrap();
    let se_mean = (mean * (1.0 - mean) / (30 * n) as f64).sqrt();
    let se = (se_mean.powi(2) + reference.std_error().powi(2)).sqrt();
    assert!((mean - reference.p_hat).abs() < 4.0 * se, "{mean} vs {}", reference.p_hat);
}

#[test]
fn lower_bound_outage_dominates_upper_bound_outage() {
    let cfg = ChannelConfig::new(3, 2, FadingModel::NegExp).with_power(1.0, 1.0);
    let k = BoundConstants::new(&cfg).unwrap();
    let osnrs: Vec<f64> = [10.0, 15.0, 20.0].iter().map(|&d| db_to_linear(d)).collect();
    for &r in &[0.5, 1.0, 1.5] {
        assert!(osnrs.iter().all(|&o| !below_ordering_threshold(&k, r, o)));
        let lo = estimate_outage_sweep(&cfg, r, &osnrs, 50_000, 8, CapacityBoundKind::Lower).unwrap();
        let up = estimate_outage_sweep(&cfg, r, &osnrs, 50_000, 8, CapacityBoundKind::Upper).unwrap();
        for (a, b) in lo.iter().zip(&up) {
            assert!(a.n_hits >= b.n_hits, "r = {r}: lower {} < upper {}", a.n_hits, b.n_hits);
        }
        // Coupled draws make the hit counts nonincreasing in osnr.
        assert!(lo.windows(2).all(|w| w[0].n_hits >= w[1].n_hits));
    }
}

#[test]
fn outage_is_independent_of_worker_count() {
    let cfg = ChannelConfig::new(3, 2, FadingModel::GammaGamma { rho1: 4.2, rho2: 1.4 });
    let run = || estimate_outage(&cfg, 1.0, 30.0, 40_000, 3, CapacityBoundKind::Upper).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
    assert_eq!(one, four);
}

#[test]
fn codebook_entry_mean() {
    let cfg = ChannelConfig::new(2, 1, FadingModel::NegExp).with_power(1.0, 0.5);
    let law = InputLaw::for_config(&cfg).unwrap();
    let book = generate_codebook(&cfg, 0.6, 1e4, 2, &law, &mut sample_stream(3, 0)).unwrap();
    assert_eq!(book.len(), 63_096);
    let (m, se) = mean_se(&book.entries);
    assert!((m - 0.25).abs() < 3.0 * se, "{m}");
}

#[test]
fn coded_error_below_union_bound_and_decreasing() {
    let cfg = ChannelConfig::new(2, 1, FadingModel::NegExp).with_power(1.0, 1.0);
    let law = InputLaw::for_config(&cfg).unwrap();
    let sampler = ChannelSampler::new(&cfg).unwrap();
    let fam = StreamFamily::new(77);
    for draw in 0..3 {
        let h: ChannelMatrix = sampler.sample_indexed(&fam, 77, draw);
        let mut prev = f64::INFINITY;
        for db in [10.0, 15.0, 20.0] {
            let osnr = db_to_linear(db);
            let e = simulate_conditional_error(&h, &cfg, 0.5, osnr, 2, 2000, 5).unwrap();
            let b = pairwise_union_bound(&h, osnr, 2, 0.5, &law).unwrap();
            assert!(e.p_hat <= b.min(1.0) + 3.0 * e.half_width, "draw {draw}, {db} dB: {} vs {b}", e.p_hat);
            assert!(e.p_hat <= prev + 3.0 * e.half_width);
            prev = e.p_hat;
        }
    }
}
