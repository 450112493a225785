//! Desk-scale reproduction of the validation experiments: uniformity of
//! bucket residues, cross-experiment independence, sample-ratio checks,
//! and latency comparisons, all over synthetic corpora.
//!
//! Everything except benchmark timings is a pure function of the
//! scenario descriptor embedded in each report, so any report can be
//! regenerated bit-for-bit from its own provenance.

mod bench;
mod corpus;
mod repro;

pub use bench::{run_latency_bench, BenchReport, BenchRow};
pub use corpus::{generate_corpus, CorpusSpec};
pub use repro::{
    run_repro, ReproOutcome, ReproSpec, VerdictCheck, REPRO_EXPERIMENT_I, REPRO_EXPERIMENT_J,
    REPRO_FILES, REPRO_ID_PATTERN,
};

use crate::assignment::{assign, Algorithm, AssignError, BucketSpec, ExperimentConfig};
use crate::hashing::HashKind;
use crate::stats::{
    gof_proportions, gof_uniform, independence_test, ContingencyTable, Histogram100, StatsError,
    TestReport, MIN_UNIFORMITY_TOTAL,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Default experiment IDs (and salts) for two-experiment scenarios.
pub const EXPERIMENT_A: &str = "exp_A";
pub const EXPERIMENT_B: &str = "exp_B";

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Assign(#[from] AssignError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("corpus must contain at least one user")]
    EmptyCorpus,
    #[error("id pattern {pattern:?} has no {{index}} placeholder but {n_users} distinct ids were requested")]
    PatternMissingIndex { pattern: String, n_users: u64 },
    #[error(
        "conditioned sample has {got} users but the test needs {required}; use a larger corpus"
    )]
    ConditionedSampleTooSmall { got: u64, required: u64 },
    #[error("independence needs two distinct experiment ids, got {0:?} twice")]
    IdenticalExperimentIds(String),
    #[error("benchmark needs at least one iteration")]
    ZeroIterations,
    #[error("benchmark needs at least one variant")]
    NoVariants,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// The four assignment variants under study: the original two-step
/// scheme, then the single-hash scheme over FNV, MD5, and SpookyHash.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgoVariant {
    Algo1,
    Algo2,
    Algo3,
    Algo4,
}

impl AlgoVariant {
    pub const ALL: [AlgoVariant; 4] = [
        AlgoVariant::Algo1,
        AlgoVariant::Algo2,
        AlgoVariant::Algo3,
        AlgoVariant::Algo4,
    ];

    pub fn algorithm(self) -> Algorithm {
        match self {
            AlgoVariant::Algo1 => Algorithm::Original,
            AlgoVariant::Algo2 => Algorithm::New(HashKind::Fnv1a64),
            AlgoVariant::Algo3 => Algorithm::New(HashKind::Md5_64),
            AlgoVariant::Algo4 => Algorithm::New(HashKind::Spooky64),
        }
    }

    pub fn number(self) -> u32 {
        match self {
            AlgoVariant::Algo1 => 1,
            AlgoVariant::Algo2 => 2,
            AlgoVariant::Algo3 => 3,
            AlgoVariant::Algo4 => 4,
        }
    }

    pub fn from_number(n: u32) -> Option<Self> {
        match n {
            1 => Some(AlgoVariant::Algo1),
            2 => Some(AlgoVariant::Algo2),
            3 => Some(AlgoVariant::Algo3),
            4 => Some(AlgoVariant::Algo4),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgoVariant::Algo1 => "algo1",
            AlgoVariant::Algo2 => "algo2",
            AlgoVariant::Algo3 => "algo3",
            AlgoVariant::Algo4 => "algo4",
        }
    }
}

impl fmt::Display for AlgoVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("unknown algorithm variant {0:?}, expected 1-4 or algo1-algo4")]
pub struct UnknownVariant(pub String);

impl FromStr for AlgoVariant {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" | "algo1" => Ok(AlgoVariant::Algo1),
            "2" | "algo2" => Ok(AlgoVariant::Algo2),
            "3" | "algo3" => Ok(AlgoVariant::Algo3),
            "4" | "algo4" => Ok(AlgoVariant::Algo4),
            other => Err(UnknownVariant(other.to_string())),
        }
    }
}

/// How to select users for the conditional histogram: `r_e < y` or
/// `r_e == y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    LessThan,
    EqualTo,
}

impl Condition {
    fn matches(self, r_e: u32, y: u32) -> bool {
        match self {
            Condition::LessThan => r_e < y,
            Condition::EqualTo => r_e == y,
        }
    }
}

/// Everything needed to regenerate a report, embedded in the report
/// itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario {
    Uniformity {
        corpus: CorpusSpec,
        config: ExperimentConfig,
        condition: Condition,
        y: u32,
        alpha: f64,
    },
    Independence {
        corpus: CorpusSpec,
        config_i: ExperimentConfig,
        config_j: ExperimentConfig,
        alpha: f64,
    },
}

/// A validation run: the scenario, its test outcomes, and the raw
/// payloads behind them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub variant: AlgoVariant,
    /// The scheme behind the variant, naming the hash backend.
    pub algorithm: Algorithm,
    pub scenario: Scenario,
    pub tests: BTreeMap<String, TestReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Histogram100>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contingency: Option<ContingencyTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scatter: Option<Vec<(u32, u32)>>,
}

fn fifty_fifty() -> Vec<BucketSpec> {
    vec![
        BucketSpec::new("control", 50),
        BucketSpec::new("treatment", 50),
    ]
}

/// Accumulates the conditional `R_b` histogram over the whole corpus and
/// runs the uniformity test on it.
///
/// Every corpus user is assigned under `variant` at the given exposure;
/// users whose `r_e` satisfies the condition contribute their `r_b` to a
/// 100-cell histogram, which is then tested against uniform.
pub fn run_uniformity(
    variant: AlgoVariant,
    corpus: &CorpusSpec,
    exposure_percent: u32,
    condition: Condition,
    y: u32,
    alpha: f64,
) -> Result<ValidationReport, HarnessError> {
    let config = ExperimentConfig::new(EXPERIMENT_A, EXPERIMENT_A, exposure_percent, fifty_fifty())
        .map_err(AssignError::from)?;
    let users = generate_corpus(corpus)?;
    let algorithm = variant.algorithm();

    let histogram = users
        .par_iter()
        .try_fold(Histogram100::new, |mut hist, user| {
            let trace = assign(&config, user, algorithm)?;
            if condition.matches(trace.r_e, y) {
                hist.record(trace.r_b);
            }
            Ok::<_, AssignError>(hist)
        })
        .try_reduce(Histogram100::new, |a, b| Ok(a.merge(b)))?;

    let total = histogram.total();
    if total < MIN_UNIFORMITY_TOTAL {
        return Err(HarnessError::ConditionedSampleTooSmall {
            got: total,
            required: MIN_UNIFORMITY_TOTAL,
        });
    }

    let report = gof_uniform(&histogram, alpha)?;
    let mut tests = BTreeMap::new();
    tests.insert("uniformity".to_string(), report);

    Ok(ValidationReport {
        variant,
        algorithm: variant.algorithm(),
        scenario: Scenario::Uniformity {
            corpus: corpus.clone(),
            config,
            condition,
            y,
            alpha,
        },
        tests,
        histogram: Some(histogram),
        contingency: None,
        scatter: None,
    })
}

/// Runs two experiments at full exposure with a 50/50 split and tests
/// whether a user's bucket in one predicts their bucket in the other.
///
/// Also captures the bucket residues of the first 1,000 corpus users as
/// a scatter sample, which keeps the plot data deterministic.
pub fn run_independence(
    variant: AlgoVariant,
    corpus: &CorpusSpec,
    experiment_ids: (&str, &str),
    alpha: f64,
) -> Result<ValidationReport, HarnessError> {
    let (id_i, id_j) = experiment_ids;
    if id_i == id_j {
        return Err(HarnessError::IdenticalExperimentIds(id_i.to_string()));
    }
    let config_i =
        ExperimentConfig::new(id_i, id_i, 100, fifty_fifty()).map_err(AssignError::from)?;
    let config_j =
        ExperimentConfig::new(id_j, id_j, 100, fifty_fifty()).map_err(AssignError::from)?;
    let users = generate_corpus(corpus)?;
    let algorithm = variant.algorithm();

    let bucket_index = |config: &ExperimentConfig, bucket: Option<&str>| -> usize {
        config
            .buckets
            .iter()
            .position(|b| Some(b.name.as_str()) == bucket)
            .expect("full exposure always buckets")
    };

    let cells = users
        .par_iter()
        .try_fold(
            || [[0u64; 2]; 2],
            |mut cells, user| {
                let trace_i = assign(&config_i, user, algorithm)?;
                let trace_j = assign(&config_j, user, algorithm)?;
                let row = bucket_index(&config_i, trace_i.assignment.bucket());
                let col = bucket_index(&config_j, trace_j.assignment.bucket());
                cells[row][col] += 1;
                Ok::<_, AssignError>(cells)
            },
        )
        .try_reduce(
            || [[0u64; 2]; 2],
            |a, b| {
                Ok([
                    [a[0][0] + b[0][0], a[0][1] + b[0][1]],
                    [a[1][0] + b[1][0], a[1][1] + b[1][1]],
                ])
            },
        )?;

    let table = ContingencyTable::from_counts(vec![cells[0].to_vec(), cells[1].to_vec()])?;
    let report = independence_test(&table, alpha)?;

    let scatter = users
        .iter()
        .take(1000)
        .map(|user| {
            let trace_i = assign(&config_i, user, algorithm)?;
            let trace_j = assign(&config_j, user, algorithm)?;
            Ok::<_, AssignError>((trace_i.r_b, trace_j.r_b))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut tests = BTreeMap::new();
    tests.insert("independence".to_string(), report);

    Ok(ValidationReport {
        variant,
        algorithm: variant.algorithm(),
        scenario: Scenario::Independence {
            corpus: corpus.clone(),
            config_i,
            config_j,
            alpha,
        },
        tests,
        histogram: None,
        contingency: Some(table),
        scatter: Some(scatter),
    })
}

/// Sample-ratio check: do the observed bucket sizes among exposed users
/// match the configured split?
pub fn run_srm_check(
    variant: AlgoVariant,
    corpus: &CorpusSpec,
    config: &ExperimentConfig,
    alpha: f64,
) -> Result<TestReport, HarnessError> {
    config.validate().map_err(AssignError::from)?;
    let users = generate_corpus(corpus)?;
    let algorithm = variant.algorithm();
    let n_buckets = config.buckets.len();

    let counts = users
        .par_iter()
        .try_fold(
            || vec![0u64; n_buckets],
            |mut counts, user| {
                let trace = assign(config, user, algorithm)?;
                if let Some(bucket) = trace.assignment.bucket() {
                    let index = config
                        .buckets
                        .iter()
                        .position(|b| b.name == bucket)
                        .expect("assigned bucket comes from the config");
                    counts[index] += 1;
                }
                Ok::<_, AssignError>(counts)
            },
        )
        .try_reduce(
            || vec![0u64; n_buckets],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )?;

    let split: Vec<u32> = config.buckets.iter().map(|b| b.percentage).collect();
    Ok(gof_proportions(&counts, &split, alpha)?)
}
