//! Power of the J-test against the fixed `IV > 0.1` rule on the desk grid,
//! printed as two columns per θ.

use ivtest::sim::desk_grid;
use ivtest::{power_curve, Criterion, SimConfig};

fn main() -> ivtest::Result<()> {
    let base = SimConfig {
        n: 300,
        m: 50_000,
        alpha: 1e-3,
        replicates: 500,
        theta_grid: desk_grid(),
        ..SimConfig::default()
    };
    let jtest = power_curve(&base)?;
    let threshold = power_curve(&SimConfig {
        criterion: Criterion::FixedThreshold(0.1),
        ..base.clone()
    })?;
    println!("imbalance rate {:.5}", jtest.imbalance_rate);
    println!("{:>6} {:>8} {:>8}", "theta", "J-test", "IV>0.1");
    for (a, b) in jtest.points.iter().zip(&threshold.points) {
        println!("{:>6.2} {:>8.3} {:>8.3}", a.theta, a.rate, b.rate);
    }
    Ok(())
}
