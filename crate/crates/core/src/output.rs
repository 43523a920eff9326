//! Writers for reports and power curves.
//!
//! JSON is the canonical format. Field order follows the struct definitions
//! and every real is written in scientific notation with 17 significant
//! digits, so identical inputs give byte-identical files.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::report::FeatureReport;
use crate::sim::PowerCurve;

/// Pretty JSON formatter that prints `f64` as `{:.16e}`.
struct FixedPrecision<'a>(PrettyFormatter<'a>);

impl Formatter for FixedPrecision<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serialises any value with the fixed-precision pretty formatter.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, FixedPrecision(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("serialising to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn report_json(report: &FeatureReport) -> String {
    to_json(report)
}

/// One CSV row per tested feature; warnings joined by `; `.
pub fn report_csv(report: &FeatureReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "feature",
        "j_estimate",
        "std_error",
        "p_value",
        "log10_p",
        "p_mantissa",
        "p_exponent",
        "reject",
        "bins",
        "zero_bins",
        "warnings",
    ])
    .expect("in-memory write");
    for r in &report.rows {
        w.write_record([
            r.feature.clone(),
            format!("{:.16e}", r.j_estimate),
            format!("{:.16e}", r.std_error),
            format!("{:.16e}", r.p_value),
            format!("{:.16e}", r.log10_p),
            format!("{:.16e}", r.p_mantissa),
            r.p_exponent.to_string(),
            r.reject.to_string(),
            r.bins.to_string(),
            r.zero_bins.join("; "),
            r.warnings.join("; "),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv emits UTF-8")
}

// `9.9996e-5` must print as `1.000e-4`, not `10.000e-5`.
fn sci3(mantissa: f64, exponent: i32) -> String {
    let rounded = (mantissa * 1000.0).round() / 1000.0;
    if rounded >= 10.0 {
        format!("{:.3}e{}", rounded / 10.0, exponent + 1)
    } else {
        format!("{rounded:.3}e{exponent}")
    }
}

/// Terminal table with the usual `Predictor | J - Estimate | Std - Error |
/// p - value` columns.
pub fn report_table(report: &FeatureReport) -> String {
    let s = &report.summary;
    let mut out = format!(
        "N = {}, n = {}, m = {}, imbalance rate = {:.5}\n\n",
        s.total_rows, s.n, s.m, s.imbalance_rate
    );
    let header = [
        "Predictor",
        "J - Estimate",
        "Std - Error",
        "p - value",
        "Reject H0",
        "Bins",
    ];
    let body: Vec<[String; 6]> = report
        .rows
        .iter()
        .map(|r| {
            [
                r.feature.clone(),
                format!("{:.6}", r.j_estimate),
                format!("{:.6}", r.std_error),
                sci3(r.p_mantissa, r.p_exponent),
                if r.reject { "yes".into() } else { "no".into() },
                r.bins.to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("| {} |\n", parts.join(" | "))
    };
    out.push_str(&line(&header.map(String::from)));
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&format!("|-{}-|\n", rule.join("-|-")));
    for row in &body {
        out.push_str(&line(row));
    }
    for r in report.rows.iter().filter(|r| !r.warnings.is_empty()) {
        for w in &r.warnings {
            out.push_str(&format!("warning [{}]: {w}\n", r.feature));
        }
    }
    for d in &report.diagnostics {
        out.push_str(&format!("failed [{}]: {}\n", d.feature, d.error));
    }
    out
}

pub fn curves_json(curves: &[PowerCurve]) -> String {
    to_json(curves)
}

/// Long-format CSV: one row per (curve, θ).
pub fn curves_csv(curves: &[PowerCurve]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "curve",
        "n",
        "m",
        "alpha",
        "bins",
        "imbalance_rate",
        "theta",
        "rate",
        "rejections",
        "smoothed",
    ])
    .expect("in-memory write");
    for (i, c) in curves.iter().enumerate() {
        for p in &c.points {
            w.write_record([
                i.to_string(),
                c.config.n.to_string(),
                c.config.m.to_string(),
                format!("{:.16e}", c.config.alpha),
                c.config.bins.to_string(),
                format!("{:.16e}", c.imbalance_rate),
                format!("{:.16e}", p.theta),
                format!("{:.16e}", p.rate),
                p.rejections.to_string(),
                p.smoothed.to_string(),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv emits UTF-8")
}
