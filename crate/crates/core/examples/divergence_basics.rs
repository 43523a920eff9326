//! WoE, information value and the legacy predictive-power bands for a small
//! hand-made table.

use ivtest::divergence::{empirical_distributions, woe_vector};
use ivtest::{classify_iv_threshold, information_value, BinnedContingency, ZeroPolicy};

fn main() -> ivtest::Result<()> {
    let ct = BinnedContingency::new(
        vec!["low".into(), "mid".into(), "high".into()],
        vec![40, 35, 25],
        vec![200, 350, 450],
    )?;
    let dp = empirical_distributions(&ct, ZeroPolicy::Strict)?;

    println!("{:<6} {:>8} {:>8} {:>9}", "bin", "p", "q", "WoE");
    for ((bin, (p, q)), w) in dp
        .bins()
        .iter()
        .zip(dp.p().iter().zip(dp.q()))
        .zip(woe_vector(&dp))
    {
        println!("{bin:<6} {p:>8.4} {q:>8.4} {w:>9.4}");
    }
    let iv = information_value(&dp);
    println!("IV = {iv:.6} -> {}", classify_iv_threshold(iv)?);
    println!(
        "IV with the labels swapped = {:.6}",
        information_value(&dp.swapped())
    );
    Ok(())
}
