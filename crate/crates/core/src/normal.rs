//! Standard normal tail probabilities in log space.
//!
//! P-values of strongly predictive features routinely fall far below the
//! smallest positive `f64` (1 − Φ(40) ≈ 3.7e−350), so tails are carried as a
//! natural logarithm in [`LogProb`] and only exponentiated on request.

use std::f64::consts::{LN_10, PI, SQRT_2};

use libm::erfc;
use serde::Serialize;

/// Above this point the tail is evaluated from the Mills-ratio continued
/// fraction instead of `erfc`.
const CONTINUED_FRACTION_FROM: f64 = 5.0;

/// A probability stored as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct LogProb(f64);

impl LogProb {
    pub const ONE: LogProb = LogProb(0.0);

    pub fn from_ln(ln: f64) -> Self {
        LogProb(ln.min(0.0))
    }

    pub fn from_prob(p: f64) -> Self {
        LogProb(p.ln().min(0.0))
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn log10(self) -> f64 {
        self.0 / LN_10
    }

    /// The probability as an `f64`; underflows to 0 below ~1e−308.
    pub fn value(self) -> f64 {
        self.0.exp()
    }

    /// Decimal `(mantissa, exponent)` with `1 <= mantissa < 10`.
    pub fn mantissa_exponent(self) -> (f64, i32) {
        let l = self.log10();
        let mut e = l.floor();
        let mut mant = 10f64.powf(l - e);
        // powf can land on 10.0 when l - e is within an ulp of 1
        if mant >= 10.0 {
            mant /= 10.0;
            e += 1.0;
        }
        (mant, e as i32)
    }
}

/// `1 − Φ(z)`.
pub fn normal_upper_tail(z: f64) -> LogProb {
    LogProb(ln_upper_tail(z))
}

/// `Φ(z)`.
pub fn normal_cdf(z: f64) -> LogProb {
    LogProb(ln_upper_tail(-z))
}

fn ln_upper_tail(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z < 0.0 {
        // Q(z) = 1 − Q(−z); Q(−z) is small here so ln_1p keeps precision.
        let lower = 0.5 * erfc(-z / SQRT_2);
        return (-lower).ln_1p();
    }
    if z < CONTINUED_FRACTION_FROM {
        return (0.5 * erfc(z / SQRT_2)).ln();
    }
    if z == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    -0.5 * z * z - 0.5 * (2.0 * PI).ln() + mills_ratio(z).ln()
}

/// `Q(z) / φ(z)` via the continued fraction
/// `1 / (z + 1/(z + 2/(z + 3/(z + …))))`, evaluated with Lentz's method.
fn mills_ratio(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for k in 1..1000 {
        let a = k as f64;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}

/// Upper quantile `z` with `1 − Φ(z) = alpha`.
pub fn normal_upper_quantile(alpha: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must be in (0, 1)");
    let target = alpha.ln();
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    let mut z = 0.0;
    for _ in 0..200 {
        let f = ln_upper_tail(z) - target;
        if f > 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        // d/dz ln Q = −φ(z) / Q(z)
        let ln_pdf = -0.5 * z * z - 0.5 * (2.0 * PI).ln();
        let slope = -(ln_pdf - ln_upper_tail(z)).exp();
        let mut next = z - f / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - z).abs() <= 1e-15 * z.abs().max(1.0) {
            return next;
        }
        z = next;
    }
    z
}
