use ivtest::inference::critical_value;
use ivtest::{run_test_with, BinnedContingency, TestConfig, VarianceForm, ZeroPolicy};

fn main() -> ivtest::Result<()> {
    let ct =
        BinnedContingency::from_counts(vec![52, 61, 70, 82, 95], vec![1040, 1010, 990, 975, 985])?;
    for variance in [VarianceForm::DeltaMethod, VarianceForm::NoCrossTerm] {
        let cfg = TestConfig {
            variance,
            ..TestConfig::new(1e-4, ZeroPolicy::Strict)
        };
        let r = run_test_with(&ct, &cfg)?;
        println!("{variance:?}");
        println!(
            "  J = {:.6}  V1 = {:.4}  V2 = {:.4}  SE = {:.6}",
            r.j_estimate, r.v1, r.v2, r.std_error
        );
        println!(
            "  z = {:.3}  p = {:.3e}  critical J = {:.6}  reject H0: {}",
            r.z_score,
            r.p_value,
            critical_value(cfg.alpha, r.std_error),
            r.reject_h0
        );
    }

    // An empty cell is an error under the strict policy; smoothing recovers it.
    let sparse = BinnedContingency::from_counts(vec![0, 12, 30], vec![40, 50, 60])?;
    match ivtest::run_test(&sparse, 1e-4, ZeroPolicy::Strict) {
        Ok(_) => unreachable!(),
        Err(e) => println!("strict: {e}"),
    }
    let r = ivtest::run_test(&sparse, 1e-4, ZeroPolicy::laplace())?;
    println!(
        "laplace: J = {:.4}, p = {:.3e}, smoothed bins {:?}",
        r.j_estimate, r.p_value, r.zero_bins
    );
    Ok(())
}
