//! Receive-antenna count that maximizes the negative exponential DMT for a
//! given transmit array and rate.

use owc_dmt::dmt::{argmax_receive_antennas, optimal_receive_antennas};

fn main() -> owc_dmt::Result<()> {
    print!("{:>4} |", "n_t");
    for r in 0..=6 {
        print!(" r={r:<3}");
    }
    println!();
    for n_t in (2..=20).step_by(2) {
        print!("{n_t:>4} |");
        for r in 0..=6 {
            if r > n_t {
                print!(" {:<5}", "-");
                continue;
            }
            let n = optimal_receive_antennas(n_t, r as f64)?;
            assert_eq!(n, argmax_receive_antennas(n_t, r as f64));
            print!(" {n:<5}");
        }
        println!();
    }
    Ok(())
}
