//! Command-line front door for assignment and validation.
//!
//! Exit codes: 0 on success, 1 when a validation verdict fails (so CI
//! can gate on it), 2 on usage or configuration errors.

use bucketeer::harness::{
    run_independence, run_latency_bench, run_repro, run_srm_check, run_uniformity, AlgoVariant,
    Condition, CorpusSpec, ReproSpec, EXPERIMENT_A, EXPERIMENT_B, REPRO_ID_PATTERN,
};
use bucketeer::stats::DEFAULT_ALPHA;
use bucketeer::{assign, BucketSpec, ExperimentConfig};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

/// Overrides the corpus seed for every harness subcommand when set.
const SEED_ENV: &str = "BUCKETEER_SEED";

#[derive(Parser)]
#[command(
    name = "bucketeer",
    version,
    about = "Deterministic experiment bucketing and validation"
)]
struct Cli {
    /// Pretty-print JSON output for humans; default is one compact line.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assign one user in one experiment.
    Assign(AssignArgs),
    /// Test uniformity of bucket residues under an exposure condition.
    Uniformity(UniformityArgs),
    /// Test independence of assignments between two experiments.
    Independence(IndependenceArgs),
    /// Check observed bucket sizes against the configured split.
    Srm(SrmArgs),
    /// Measure assignment latency per variant.
    Bench(BenchArgs),
    /// Run the full reproduction suite and write its artifacts.
    Repro(ReproArgs),
}

#[derive(Args)]
struct AssignArgs {
    #[arg(long)]
    experiment: String,
    #[arg(long)]
    user: String,
    /// Variant 1-4: original, new+fnv, new+md5, new+spooky.
    #[arg(long)]
    algo: AlgoVariant,
    /// Exposure rate percent, 0-100.
    #[arg(long)]
    exposure: u32,
    /// Buckets as "name:pct,name:pct", percentages summing to 100.
    #[arg(long)]
    buckets: String,
    /// Salt for the original algorithm; defaults to the experiment id.
    #[arg(long)]
    salt: Option<String>,
    /// Print the full trace instead of just the verdict.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus size.
    #[arg(long, default_value_t = 1_000_000)]
    users: u64,
    /// User-id template; {index} is required for more than one user.
    #[arg(long, default_value = "user_{index}")]
    pattern: String,
    /// Corpus seed (BUCKETEER_SEED overrides).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl CorpusArgs {
    fn spec(&self) -> Result<CorpusSpec, CliError> {
        let seed = match std::env::var(SEED_ENV) {
            Ok(raw) => raw
                .parse::<u64>()
                .map_err(|_| CliError::usage(format!("{SEED_ENV} must be a u64, got {raw:?}")))?,
            Err(_) => self.seed,
        };
        Ok(CorpusSpec::new(self.users, self.pattern.clone(), seed))
    }
}

#[derive(Args)]
struct UniformityArgs {
    #[arg(long)]
    algo: AlgoVariant,
    /// Exposure rate percent, 0-100.
    #[arg(long)]
    exposure: u32,
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Condition on the exposure residue: lt (r_e < y) or eq (r_e == y).
    #[arg(long, default_value = "lt")]
    condition: String,
    /// Condition threshold; defaults to the exposure rate.
    #[arg(long)]
    y: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write plot CSVs into this directory.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Args)]
struct IndependenceArgs {
    #[arg(long)]
    algo: AlgoVariant,
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Two experiment ids, comma-separated.
    #[arg(long, default_value_t = format!("{EXPERIMENT_A},{EXPERIMENT_B}"))]
    experiments: String,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Args)]
struct SrmArgs {
    #[arg(long)]
    algo: AlgoVariant,
    #[arg(long)]
    exposure: u32,
    /// Buckets as "name:pct,name:pct".
    #[arg(long, default_value = "control:50,treatment:50")]
    buckets: String,
    #[arg(long, default_value = EXPERIMENT_A)]
    experiment: String,
    #[arg(long)]
    salt: Option<String>,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated variants to time, e.g. "1,2,3,4".
    #[arg(long, default_value = "1,2,3,4")]
    algos: String,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, default_value_t = 5)]
    iterations: u32,
}

#[derive(Args)]
struct ReproArgs {
    /// Output directory for the artifact set.
    #[arg(long)]
    out: PathBuf,
    /// Corpus size.
    #[arg(long, default_value_t = 1_000_000)]
    users: u64,
    /// User-id template; defaults to the reproduction recipe's
    /// structured ids.
    #[arg(long, default_value = REPRO_ID_PATTERN)]
    pattern: String,
    /// Corpus seed (BUCKETEER_SEED overrides).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
}

/// Failures carrying their target exit code.
struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 2,
        }
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(err: E) -> Self {
        CliError::usage(err.to_string())
    }
}

fn parse_buckets(raw: &str) -> Result<Vec<BucketSpec>, CliError> {
    let mut buckets = Vec::new();
    for part in raw.split(',') {
        let (name, pct) = part
            .split_once(':')
            .ok_or_else(|| CliError::usage(format!("bucket {part:?} is not name:pct")))?;
        if name.is_empty() {
            return Err(CliError::usage(format!(
                "bucket {part:?} has an empty name"
            )));
        }
        let pct: u32 = pct
            .parse()
            .map_err(|_| CliError::usage(format!("bucket {part:?} has a non-integer percent")))?;
        buckets.push(BucketSpec::new(name, pct));
    }
    Ok(buckets)
}

fn emit<T: Serialize>(value: &T, pretty: bool, out: Option<&PathBuf>) -> Result<(), CliError> {
    let mut json = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    json.push('\n');
    match out {
        Some(path) => fs::write(path, json)?,
        None => print!("{json}"),
    }
    Ok(())
}

fn run_assign(args: &AssignArgs, pretty: bool) -> Result<u8, CliError> {
    let salt = args.salt.clone().unwrap_or_else(|| args.experiment.clone());
    let config = ExperimentConfig::new(
        args.experiment.clone(),
        salt,
        args.exposure,
        parse_buckets(&args.buckets)?,
    )?;
    let trace = assign(&config, &args.user, args.algo.algorithm())?;
    if args.trace {
        emit(&trace, pretty, None)?;
    } else {
        emit(&trace.assignment, pretty, None)?;
    }
    Ok(0)
}

fn parse_condition(raw: &str) -> Result<Condition, CliError> {
    match raw {
        "lt" => Ok(Condition::LessThan),
        "eq" => Ok(Condition::EqualTo),
        other => Err(CliError::usage(format!(
            "condition must be lt or eq, got {other:?}"
        ))),
    }
}

fn run_uniformity_cmd(args: &UniformityArgs, pretty: bool) -> Result<u8, CliError> {
    let corpus = args.corpus.spec()?;
    let condition = parse_condition(&args.condition)?;
    let y = args.y.unwrap_or(args.exposure);
    let report = run_uniformity(args.algo, &corpus, args.exposure, condition, y, args.alpha)?;

    if let Some(dir) = &args.plot_data {
        fs::create_dir_all(dir)?;
        let mut csv = String::from("cell,count\n");
        let histogram = report
            .histogram
            .as_ref()
            .expect("uniformity report has a histogram");
        for (cell, count) in histogram.counts().iter().enumerate() {
            writeln!(csv, "{cell},{count}").expect("writing to a string cannot fail");
        }
        fs::write(dir.join("histogram.csv"), csv)?;
    }

    let reject = report.tests["uniformity"].reject;
    emit(&report, pretty, args.out.as_ref())?;
    Ok(if reject { 1 } else { 0 })
}

fn run_independence_cmd(args: &IndependenceArgs, pretty: bool) -> Result<u8, CliError> {
    let corpus = args.corpus.spec()?;
    let (id_i, id_j) = args
        .experiments
        .split_once(',')
        .ok_or_else(|| CliError::usage("--experiments needs two comma-separated ids"))?;
    let report = run_independence(args.algo, &corpus, (id_i.trim(), id_j.trim()), args.alpha)?;

    if let Some(dir) = &args.plot_data {
        fs::create_dir_all(dir)?;
        let mut csv = String::from("rb_i,rb_j\n");
        for (rb_i, rb_j) in report
            .scatter
            .as_ref()
            .expect("independence report has a scatter")
        {
            writeln!(csv, "{rb_i},{rb_j}").expect("writing to a string cannot fail");
        }
        fs::write(dir.join("scatter.csv"), csv)?;
    }

    let reject = report.tests["independence"].reject;
    emit(&report, pretty, args.out.as_ref())?;
    Ok(if reject { 1 } else { 0 })
}

fn run_srm_cmd(args: &SrmArgs, pretty: bool) -> Result<u8, CliError> {
    let corpus = args.corpus.spec()?;
    let salt = args.salt.clone().unwrap_or_else(|| args.experiment.clone());
    let config = ExperimentConfig::new(
        args.experiment.clone(),
        salt,
        args.exposure,
        parse_buckets(&args.buckets)?,
    )?;
    let report = run_srm_check(args.algo, &corpus, &config, args.alpha)?;
    let reject = report.reject;
    emit(&report, pretty, args.out.as_ref())?;
    Ok(if reject { 1 } else { 0 })
}

fn run_bench_cmd(args: &BenchArgs, pretty: bool) -> Result<u8, CliError> {
    let corpus = args.corpus.spec()?;
    let variants = args
        .algos
        .split(',')
        .map(|part| part.trim().parse::<AlgoVariant>())
        .collect::<Result<Vec<_>, _>>()?;
    let report = run_latency_bench(&variants, &corpus, args.iterations)?;
    emit(&report, pretty, None)?;
    Ok(0)
}

fn run_repro_cmd(args: &ReproArgs, pretty: bool) -> Result<u8, CliError> {
    let corpus = CorpusArgs {
        users: args.users,
        pattern: args.pattern.clone(),
        seed: args.seed,
    }
    .spec()?;
    let spec = ReproSpec {
        corpus,
        alpha: args.alpha,
    };
    let outcome = run_repro(&spec, &args.out)?;
    let ok = outcome.all_ok;
    emit(&outcome, pretty, None)?;
    Ok(if ok { 0 } else { 1 })
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Assign(args) => run_assign(args, cli.pretty),
        Command::Uniformity(args) => run_uniformity_cmd(args, cli.pretty),
        Command::Independence(args) => run_independence_cmd(args, cli.pretty),
        Command::Srm(args) => run_srm_cmd(args, cli.pretty),
        Command::Bench(args) => run_bench_cmd(args, cli.pretty),
        Command::Repro(args) => run_repro_cmd(args, cli.pretty),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
