//! p-values far below the smallest positive `f64`.
//!
//! `1 − Φ(z)` for large z is kept as a logarithm, so a J estimate that is
//! thirty standard errors from zero still gets a usable p-value.

use ivtest::inference::upper_tail_p_value;
use ivtest::normal::normal_upper_quantile;
use ivtest::normal_upper_tail;

fn main() {
    for (j, se) in [(0.099_010, 0.003_176), (0.085_637, 0.002_939), (0.9, 0.018)] {
        let lp = upper_tail_p_value(j, se);
        let (mant, exp) = lp.mantissa_exponent();
        println!(
            "J = {j:.6}, SE = {se:.6}: z = {:.3}, p = {mant:.3}e{exp} (as f64: {:e})",
            j / se,
            lp.value()
        );
    }
    for z in [5.0, 10.0, 20.0, 40.0] {
        println!("ln Q({z}) = {:.12}", normal_upper_tail(z).ln());
    }
    for alpha in [1e-2, 1e-4, 1e-10] {
        println!("z(1 - {alpha:e}) = {:.10}", normal_upper_quantile(alpha));
    }
}
