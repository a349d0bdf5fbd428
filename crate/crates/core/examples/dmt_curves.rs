//! Tabulate DMT bounds for the three fading laws next to the RF reference curves.

use owc_dmt::channel::BlockLen;
use owc_dmt::dmt::{dmt_gammagamma, dmt_lognormal, dmt_negexp, dmt_reference, r_grid, ReferenceScheme};

fn main() -> owc_dmt::Result<()> {
    let (n_t, n_r) = (4, 2);
    for l in [BlockLen::Finite(2), BlockLen::Infinite] {
        println!("{n_t}x{n_r}, l = {l}");
        println!("{:>5} {:>15} {:>15} {:>15} {:>9} {:>9}", "r", "negexp", "gg rho=2.5", "ln osnr=1e4", "zt", "jb");
        for r in r_grid(0.0, 0.25, n_r as f64)? {
            let ne = dmt_negexp(n_t, n_r, l, r)?;
            let gg = dmt_gammagamma(n_t, n_r, l, r, 2.5)?;
            let ln = dmt_lognormal(n_t, n_r, l, r, 1.0, 0.0, 1e4)?;
            let zt = dmt_reference(ReferenceScheme::ZhengTse, n_t, n_r, l, r)?;
            let jb = dmt_reference(ReferenceScheme::JaiswalBhatnagar, n_t, n_r, l, r)?;
            let band = |lo: f64, hi: f64| if lo == hi { format!("{hi:.3}") } else { format!("[{lo:.2}, {hi:.2}]") };
            println!(
                "{r:>5.2} {:>15} {:>15} {:>15} {:>9.3} {:>9.3}",
                band(ne.d_lower, ne.d_upper),
                band(gg.d_lower, gg.d_upper),
                band(ln.d_lower, ln.d_upper),
                zt.d_upper,
                jb.d_upper
            );
        }
        println!();
    }
    Ok(())
}
