//! Draw turbulence coefficients for each fading law and compare sample
//! moments with the closed forms.

use owc_dmt::channel::{sample_stream, FadingModel, TurbulenceSampler};

fn main() -> owc_dmt::Result<()> {
    let n = 200_000;
    let models = [
        FadingModel::NegExp,
        FadingModel::GammaGamma { rho1: 4.2, rho2: 1.4 },
        FadingModel::LogNormal { mu_l: -0.1, sigma_l: 0.4 },
    ];
    println!("{:<45} {:>10} {:>10} {:>10} {:>10}", "model", "mean", "sample", "var", "sample");
    for (i, m) in models.iter().enumerate() {
        let s = TurbulenceSampler::new(m)?;
        let mut rng = sample_stream(11, i as u64);
        let xs: Vec<f64> = (0..n).map(|_| s.sample(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        println!("{:<45} {:>10.4} {:>10.4} {:>10.4} {:>10.4}", format!("{m:?}"), m.mean(), mean, m.variance(), var);
    }
    Ok(())
}
