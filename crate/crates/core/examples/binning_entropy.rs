//! Quantile, equal-width and categorical binning of the same data, with the
//! per-bin label entropy (nats) as a diagnostic for uninformative bins.

use ivtest::{bin_entropy, bin_feature, BinLayout, BinningSpec, Column};

fn main() -> ivtest::Result<()> {
    // A skewed score plus a few missing values; events cluster at high scores.
    let n = 600;
    let scores: Vec<Option<f64>> = (0..n)
        .map(|i| {
            if i % 50 == 7 {
                None
            } else {
                Some(((i * 37) % n) as f64 / n as f64).map(|u| u * u * 100.0)
            }
        })
        .collect();
    let target: Vec<u8> = scores
        .iter()
        .enumerate()
        .map(|(i, s)| u8::from(s.map_or(i % 3 == 0, |v| v > 60.0 || i % 9 == 0)))
        .collect();
    let column = Column::Numeric(scores);

    for spec in [BinningSpec::quantile(5), BinningSpec::equal_width(5)] {
        let bf = bin_feature("score", &column, &target, &spec)?;
        println!(
            "{:?}: {} bins, missing bin: {}",
            spec.strategy,
            bf.bins(),
            bf.missing_bin
        );
        if let BinLayout::Intervals { cuts, .. } = &bf.layout {
            println!("  cuts {cuts:?}");
        }
        let h = bin_entropy(&bf.contingency);
        let ct = &bf.contingency;
        for j in 0..ct.len() {
            println!(
                "  {:<22} events {:>3}  non-events {:>3}  entropy {:.4}",
                ct.bins()[j],
                ct.events()[j],
                ct.non_events()[j],
                h.per_bin[j]
            );
        }
    }

    let grades = Column::Categorical(
        ["A", "B", "B", "C", "A", "C", "C", "B"]
            .iter()
            .map(|s| Some(s.to_string()))
            .collect(),
    );
    let bf = bin_feature(
        "grade",
        &grades,
        &[1, 0, 1, 0, 1, 0, 0, 1],
        &BinningSpec::categorical(),
    )?;
    println!(
        "categorical: {:?} -> {:?} / {:?}",
        bf.contingency.bins(),
        bf.contingency.events(),
        bf.contingency.non_events()
    );
    Ok(())
}
