//! Evaluate the capacity lower and upper bounds on one channel draw across OSNR.

use owc_dmt::capacity::{capacity_lb, capacity_ub, BoundConstants};
use owc_dmt::channel::{sample_channel, sample_stream, ChannelConfig, FadingModel};
use owc_dmt::power::InputLaw;

fn main() -> owc_dmt::Result<()> {
    let cfg = ChannelConfig::new(3, 2, FadingModel::GammaGamma { rho1: 4.2, rho2: 1.4 }).with_power(1.0, 0.4);
    let law = InputLaw::for_config(&cfg)?;
    let k = BoundConstants::new(&cfg)?;
    println!("mu = {:.6}, L_l = {:.6}, L_u = {:.6}", law.mu.value(), k.l_l, k.l_u);
    println!("ordering threshold x >= {:.4}, asymptotic gap {:.6} nats", k.ordering_threshold(), k.asymptotic_gap());

    let h = sample_channel(&cfg, &mut sample_stream(3, 0))?;
    println!("H = {}", h.entries);
    println!("{:>10} {:>12} {:>12} {:>12}", "osnr", "lower", "upper", "gap");
    for e in 0..=6 {
        let osnr = 10f64.powi(e);
        let (lb, ub) = (capacity_lb(&h, osnr, &cfg)?, capacity_ub(&h, osnr, &cfg)?);
        println!("{osnr:>10.0e} {lb:>12.5} {ub:>12.5} {:>12.6}", ub - lb);
    }
    Ok(())
}
