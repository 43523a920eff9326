//! Screens every column of a CSV file and prints the report as a table and
//! as JSON. Usage: `cargo run --example feature_report [path] [target]`;
//! without arguments it uses the bundled fixture.

use std::collections::HashMap;

use ivtest::output::{report_json, report_table};
use ivtest::{ingest_csv, report, BinningSpec, ReportOptions, ZeroPolicy};

fn main() -> ivtest::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/applicants.csv").to_string()
    });
    let target = args.next().unwrap_or_else(|| "default".into());

    let ds = ingest_csv(&path, &target, None, &HashMap::new())?;
    let opts = ReportOptions::new(BinningSpec::quantile(10), 1e-4, ZeroPolicy::laplace());
    let rep = report(&ds, &opts)?;
    print!("{}", report_table(&rep));
    println!();
    let selected: Vec<&str> = rep.selected().map(|r| r.feature.as_str()).collect();
    println!("selected at alpha = 1e-4: {selected:?}");
    println!();
    print!("{}", report_json(&rep));
    Ok(())
}
