//! Small numeric helpers shared by the divergence and inference code.

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = CompensatedSum::default();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

/// `ln(x / y)` for positive `x`, `y`, computed so that
/// `log_ratio(x, y) == -log_ratio(y, x)` holds bit for bit.
pub(crate) fn log_ratio(x: f64, y: f64) -> f64 {
    if x >= y {
        ((x - y) / y).ln_1p()
    } else {
        -((y - x) / x).ln_1p()
    }
}
