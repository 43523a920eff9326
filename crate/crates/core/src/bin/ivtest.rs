use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ivtest::output::{curves_csv, curves_json, report_csv, report_json, report_table};
use ivtest::sim::{theta_grid, SweepAxis};
use ivtest::{
    classify_iv_threshold, configure_threads_from_env, ingest_csv, power_curve, report, sweep,
    BinningSpec, ColumnKind, Criterion, Normalization, ReportOptions, SimConfig, Strategy,
    VarianceForm, ZeroPolicy,
};

const EXIT_INPUT: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ivtest",
    version,
    about = "J-divergence hypothesis test for Information Value"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test every feature of a CSV file against a binary target.
    Test(TestArgs),
    /// Simulate power functions of the J-test or of the fixed IV threshold.
    Power(PowerArgs),
    /// Look up the legacy predictive-power band of an IV value.
    Thresholds {
        #[arg(long, allow_negative_numbers = true)]
        iv: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Quantile,
    Width,
    Categorical,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZeroPolicyArg {
    Strict,
    Laplace,
    Merge,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum VarianceArg {
    DeltaMethod,
    NoCrossTerm,
}

impl From<VarianceArg> for VarianceForm {
    fn from(v: VarianceArg) -> Self {
        match v {
            VarianceArg::DeltaMethod => VarianceForm::DeltaMethod,
            VarianceArg::NoCrossTerm => VarianceForm::NoCrossTerm,
        }
    }
}

#[derive(clap::Args)]
struct TestArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    target: String,
    /// Comma-separated feature columns; defaults to all but the target.
    #[arg(long, value_delimiter = ',')]
    features: Option<Vec<String>>,
    /// Comma-separated columns to treat as categorical.
    #[arg(long, value_delimiter = ',')]
    categorical: Vec<String>,
    #[arg(long, default_value_t = 10)]
    bins: usize,
    #[arg(long, value_enum, default_value = "quantile")]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 1e-4)]
    alpha: f64,
    #[arg(long = "zero-policy", value_enum, default_value = "strict")]
    zero_policy: ZeroPolicyArg,
    #[arg(long, value_enum, default_value = "delta-method")]
    variance: VarianceArg,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Jtest,
    Threshold,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    Imbalance,
    Alpha,
    Bins,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizationArg {
    PerDistribution,
    Binomial,
}

#[derive(clap::Args)]
struct PowerArgs {
    #[arg(long, default_value_t = 10)]
    r: usize,
    #[arg(long, default_value_t = 0.5)]
    theta1: f64,
    #[arg(long, default_value_t = 3000)]
    n: u64,
    #[arg(long, default_value_t = 3000)]
    m: u64,
    #[arg(long, default_value_t = 1e-4)]
    alpha: f64,
    #[arg(long, default_value_t = 1000)]
    replicates: usize,
    #[arg(long = "grid-step", default_value_t = 0.02)]
    grid_step: f64,
    #[arg(long, value_enum, default_value = "jtest")]
    criterion: CriterionArg,
    /// IV cut-off for the threshold criterion.
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    #[arg(long, value_enum)]
    sweep: Option<SweepArg>,
    /// Comma-separated sweep values.
    #[arg(long, value_delimiter = ',', requires = "sweep")]
    values: Vec<String>,
    #[arg(long, value_enum, default_value = "per-distribution")]
    normalization: NormalizationArg,
    #[arg(long, value_enum, default_value = "delta-method")]
    variance: VarianceArg,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// `json` or `csv`.
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), String> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_test_command(args: TestArgs) -> Result<u8, String> {
    let hints: HashMap<String, ColumnKind> = args
        .categorical
        .iter()
        .map(|c| (c.clone(), ColumnKind::Categorical))
        .collect();
    let ds = ingest_csv(&args.input, &args.target, args.features.as_deref(), &hints)
        .map_err(|e| e.to_string())?;
    let strategy = match args.strategy {
        StrategyArg::Quantile => Strategy::Quantile,
        StrategyArg::Width => Strategy::EqualWidth,
        StrategyArg::Categorical => Strategy::Categorical,
    };
    let zero_policy = match args.zero_policy {
        ZeroPolicyArg::Strict => ZeroPolicy::Strict,
        ZeroPolicyArg::Laplace => ZeroPolicy::laplace(),
        ZeroPolicyArg::Merge => ZeroPolicy::MergeAdjacent,
    };
    let spec = BinningSpec {
        strategy,
        bins: args.bins,
        ..BinningSpec::default()
    };
    let opts =
        ReportOptions::new(spec, args.alpha, zero_policy).with_variance(args.variance.into());
    let rep = report(&ds, &opts).map_err(|e| e.to_string())?;
    let text = match args.format {
        FormatArg::Table => report_table(&rep),
        FormatArg::Json => report_json(&rep),
        FormatArg::Csv => report_csv(&rep),
    };
    emit(&text, args.output.as_ref())?;
    Ok(if rep.has_failures() { EXIT_PARTIAL } else { 0 })
}

fn parse_values<T: std::str::FromStr>(values: &[String]) -> Result<Vec<T>, String> {
    values
        .iter()
        .map(|v| {
            v.trim()
                .parse::<T>()
                .map_err(|_| format!("bad sweep value '{v}'"))
        })
        .collect()
}

fn run_power_command(args: PowerArgs) -> Result<u8, String> {
    if !(args.grid_step > 0.0 && args.grid_step < 1.0) {
        return Err(format!(
            "--grid-step must be in (0, 1), got {}",
            args.grid_step
        ));
    }
    let cfg = SimConfig {
        bins: args.r,
        theta1: args.theta1,
        theta_grid: theta_grid(args.grid_step),
        n: args.n,
        m: args.m,
        alpha: args.alpha,
        replicates: args.replicates,
        seed: args.seed,
        criterion: match args.criterion {
            CriterionArg::Jtest => Criterion::JDivergenceTest,
            CriterionArg::Threshold => Criterion::FixedThreshold(args.threshold),
        },
        normalization: match args.normalization {
            NormalizationArg::PerDistribution => Normalization::PerDistribution,
            NormalizationArg::Binomial => Normalization::Binomial,
        },
        variance: args.variance.into(),
    };
    let curves = match args.sweep {
        None => vec![power_curve(&cfg).map_err(|e| e.to_string())?],
        Some(axis) => {
            if args.values.is_empty() {
                return Err("--sweep needs --values".into());
            }
            let axis = match axis {
                SweepArg::Imbalance => SweepAxis::ImbalanceM(parse_values(&args.values)?),
                SweepArg::Alpha => SweepAxis::Alpha(parse_values(&args.values)?),
                SweepArg::Bins => SweepAxis::Bins(parse_values(&args.values)?),
            };
            sweep(&cfg, &axis).map_err(|e| e.to_string())?
        }
    };
    let text = match args.format {
        FormatArg::Csv => curves_csv(&curves),
        _ => curves_json(&curves),
    };
    emit(&text, args.output.as_ref())?;
    Ok(0)
}

fn main() -> ExitCode {
    configure_threads_from_env();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Test(args) => run_test_command(args),
        Command::Power(args) => run_power_command(args),
        Command::Thresholds { iv } => classify_iv_threshold(iv)
            .map(|label| {
                println!("{label}");
                0
            })
            .map_err(|e| e.to_string()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
