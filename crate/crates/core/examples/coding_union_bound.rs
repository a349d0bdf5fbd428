//! Simulate ML decoding of random truncated-exponential codebooks on fixed
//! channel draws and compare with the pairwise union bound.

use owc_dmt::channel::{ChannelConfig, ChannelSampler, FadingModel, StreamFamily};
use owc_dmt::coding::{codebook_size, pairwise_union_bound, simulate_conditional_error};
use owc_dmt::outage::db_to_linear;
use owc_dmt::power::InputLaw;

fn main() -> owc_dmt::Result<()> {
    let cfg = ChannelConfig::new(2, 1, FadingModel::NegExp).with_power(1.0, 1.0);
    let law = InputLaw::for_config(&cfg)?;
    let sampler = ChannelSampler::new(&cfg)?;
    let streams = StreamFamily::new(42);
    let (r, l) = (0.5, 2);
    println!("{:>4} {:>5} {:>7} {:>10} {:>10} {:>10}", "draw", "dB", "M", "p_hat", "ci", "bound");
    for draw in 0..4 {
        let h = sampler.sample_indexed(&streams, 42, draw);
        for db in [10.0, 20.0, 30.0] {
            let osnr = db_to_linear(db);
            let e = simulate_conditional_error(&h, &cfg, r, osnr, l, 2000, draw)?;
            let b = pairwise_union_bound(&h, osnr, l, r, &law)?;
            println!(
                "{draw:>4} {db:>5} {:>7.0} {:>10.4} {:>10.4} {:>10.3e}",
                codebook_size(osnr, l, r).round(),
                e.p_hat,
                e.half_width,
                b
            );
        }
    }
    Ok(())
}
