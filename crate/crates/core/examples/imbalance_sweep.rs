use ivtest::output::curves_csv;
use ivtest::{sweep, Criterion, SimConfig, SweepAxis};

/// Rejection rate at θ = θ1 (the null) as the non-event count shrinks.
fn main() -> ivtest::Result<()> {
    let axis = SweepAxis::ImbalanceM(vec![5000, 1000, 300, 100]);
    let base = SimConfig {
        n: 3000,
        alpha: 1e-3,
        replicates: 1000,
        theta_grid: vec![0.5],
        ..SimConfig::default()
    };
    let jt = sweep(&base, &axis)?;
    let thr = sweep(
        &SimConfig {
            criterion: Criterion::FixedThreshold(0.1),
            ..base
        },
        &axis,
    )?;
    println!(
        "{:>6} {:>10} {:>8} {:>8}",
        "m", "imbalance", "J-test", "IV>0.1"
    );
    for (a, b) in jt.iter().zip(&thr) {
        println!(
            "{:>6} {:>10.4} {:>8.3} {:>8.3}",
            a.config.m, a.imbalance_rate, a.points[0].rate, b.points[0].rate
        );
    }
    println!();
    print!("{}", curves_csv(&jt));
    Ok(())
}
