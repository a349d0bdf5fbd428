//! Solve for the truncated-exponential input law across average-to-peak ratios
//! and print the constants that enter the capacity bounds.

use owc_dmt::power::{g_of_mu, phi, solve_mu, t_of_mu, trunc_exp_entropy, Mu};

fn main() -> owc_dmt::Result<()> {
    let n_t = 2;
    println!("{:>8} {:>12} {:>10} {:>10} {:>10} {:>10}", "alpha", "mu", "residual", "T", "g", "h (nats)");
    for alpha in [0.02, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0] {
        let law = solve_mu(alpha, n_t)?;
        let mu = law.mu.value();
        let residual = match law.mu {
            Mu::Finite(m) => (phi(m) - alpha / n_t as f64).abs(),
            Mu::UniformLimit => 0.0,
        };
        println!(
            "{alpha:>8} {mu:>12.6} {residual:>10.1e} {:>10.6} {:>10.6} {:>10.6}",
            t_of_mu(mu),
            g_of_mu(mu),
            trunc_exp_entropy(&law)
        );
    }
    Ok(())
}
