//! Compare analytic exponent infimums with the exhaustive grid minimum.
//!
//! Runs the default audit (n_t up to 4, three channel kinds, grid step 0.05)
//! and prints the worst deviation per kind and objective, then the coding
//! minimizers of a 16x4 link across block lengths.

use std::time::Instant;

use owc_dmt::audit::{run_audit, staircase, AuditSpec};
use owc_dmt::exponent::ChannelKind;

fn main() -> owc_dmt::Result<()> {
    let start = Instant::now();
    let report = run_audit(&AuditSpec::default())?;
    println!(
        "{:<7} {:<7} {:<7} {:>6} {:>12} {:>10} {:>5}",
        "kind", "obj", "domain", "cases", "max_delta", "max_ratio", "fail"
    );
    for row in &report.rows {
        println!(
            "{:<7} {:<7} {:<7} {:>6} {:>12.3e} {:>10.4} {:>5}",
            row.kind, row.objective, row.domain, row.cases, row.max_delta, row.max_ratio, row.violations
        );
    }
    println!("{} cases in {:.1?}, passed = {}", report.total_cases(), start.elapsed(), report.passed());

    println!("\n16x4 negative exponential, r = 0:");
    let ls: Vec<u32> = (1..=20).collect();
    for (l, value, a) in staircase(ChannelKind::NegExp, 16, 4, 0.0, &ls)? {
        println!("  l = {l:>2}  d_te = {value:>5}  a* = {a:?}");
    }
    Ok(())
}
