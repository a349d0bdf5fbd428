//! Estimate outage probabilities over an OSNR sweep and fit the diversity slope.

use std::time::Instant;

use owc_dmt::capacity::CapacityBoundKind;
use owc_dmt::channel::{BlockLen, ChannelConfig, FadingModel};
use owc_dmt::dmt::dmt_negexp;
use owc_dmt::outage::sweep_and_fit;

fn main() -> owc_dmt::Result<()> {
    let cfg = ChannelConfig::new(2, 1, FadingModel::NegExp).with_power(1.0, 1.0);
    let r = 0.5;
    let dbs = [30.0, 40.0, 50.0, 60.0];
    let start = Instant::now();
    let (estimates, fit) = sweep_and_fit(&cfg, r, &dbs, 2_000_000, 7, CapacityBoundKind::Lower)?;
    println!("{:>6} {:>12} {:>12} {:>8}", "dB", "p_hat", "ci", "hits");
    for (db, e) in dbs.iter().zip(&estimates) {
        println!("{db:>6} {:>12.4e} {:>12.2e} {:>8}", e.p_hat, e.half_width, e.n_hits);
    }
    let d = dmt_negexp(2, 1, BlockLen::Infinite, r)?.d_upper;
    println!("fitted slope {:.3} +- {:.3} (analytic {d}), {:.1?}", fit.d_hat, fit.stderr, start.elapsed());
    Ok(())
}
