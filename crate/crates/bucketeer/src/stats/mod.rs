//! Chi-square machinery: goodness-of-fit against uniform (and against
//! arbitrary integer splits), independence on contingency tables, and the
//! survival function they both need.

mod gamma;

use serde::{Deserialize, Serialize};

/// Minimum conditioned sample for the 100-cell uniformity test; keeps the
/// expected count per cell at the standard chi-square floor of 5.
pub const MIN_UNIFORMITY_TOTAL: u64 = 500;

/// Minimum expected count per cell for contingency and split tests.
pub const MIN_EXPECTED_COUNT: f64 = 5.0;

/// Default significance level used across the harness and CLI.
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, thiserror::Error)]
pub enum StatsError {
    #[error("statistic must be finite and non-negative, got {0}")]
    BadStatistic(f64),
    #[error("degrees of freedom must be at least 1")]
    ZeroDf,
    #[error("sample too small: {total} observations, the test requires at least {required}")]
    SampleTooSmall { total: u64, required: u64 },
    #[error("expected count {expected:.3} in cell ({row}, {col}) is below the minimum of {min}", min = MIN_EXPECTED_COUNT)]
    ExpectedCellTooSmall {
        row: usize,
        col: usize,
        expected: f64,
    },
    #[error("histogram must have exactly 100 cells, got {0}")]
    BadHistogramSize(usize),
    #[error("contingency table must be rectangular with at least 2 rows and 2 columns")]
    BadTableShape,
    #[error("split percentages must sum to 100, got {0}")]
    BadSplit(u32),
    #[error("observed counts ({counts}) and split ({split}) have different lengths")]
    SplitLengthMismatch { counts: usize, split: usize },
    #[error("incomplete gamma did not converge within {max_iter} iterations (a = {a}, x = {x})")]
    NoConvergence { a: f64, x: f64, max_iter: usize },
}

/// Counts of the 100 possible bucket residues (`R_b` values) among users
/// satisfying some exposure condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Histogram100 {
    counts: Vec<u64>,
}

impl Default for Histogram100 {
    fn default() -> Self {
        Self::new()
    }
}

impl Histogram100 {
    pub fn new() -> Self {
        Histogram100 {
            counts: vec![0; 100],
        }
    }

    pub fn from_counts(counts: Vec<u64>) -> Result<Self, StatsError> {
        if counts.len() != 100 {
            return Err(StatsError::BadHistogramSize(counts.len()));
        }
        Ok(Histogram100 { counts })
    }

    /// Records one observation of cell `r_b` (0..=99).
    pub fn record(&mut self, r_b: u32) {
        self.counts[r_b as usize] += 1;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Cell-wise sum; used to reduce per-thread partial histograms.
    pub fn merge(mut self, other: Histogram100) -> Histogram100 {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }
}

/// An r×c table of cross-experiment bucket counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    /// Builds a table from row-major counts. Must be rectangular and at
    /// least 2×2.
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self, StatsError> {
        if counts.len() < 2 {
            return Err(StatsError::BadTableShape);
        }
        let width = counts[0].len();
        if width < 2 || counts.iter().any(|row| row.len() != width) {
            return Err(StatsError::BadTableShape);
        }
        Ok(ContingencyTable { counts })
    }

    pub fn rows(&self) -> usize {
        self.counts.len()
    }

    pub fn cols(&self) -> usize {
        self.counts[0].len()
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.cols()];
        for row in &self.counts {
            for (sum, &cell) in sums.iter_mut().zip(row) {
                *sum += cell;
            }
        }
        sums
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

/// Outcome of a chi-square test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub statistic: f64,
    pub df: u64,
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
}

impl TestReport {
    fn new(statistic: f64, df: u64, alpha: f64) -> Result<Self, StatsError> {
        let p_value = chi_square_sf(statistic, df)?;
        Ok(TestReport {
            statistic,
            df,
            p_value,
            alpha,
            reject: p_value < alpha,
        })
    }
}

/// Survival function of the chi-square distribution with `df` degrees of
/// freedom: P(X > statistic), via the regularized upper incomplete gamma
/// Q(df/2, statistic/2).
pub fn chi_square_sf(statistic: f64, df: u64) -> Result<f64, StatsError> {
    if !statistic.is_finite() || statistic < 0.0 {
        return Err(StatsError::BadStatistic(statistic));
    }
    if df == 0 {
        return Err(StatsError::ZeroDf);
    }
    gamma::gamma_q(df as f64 / 2.0, statistic / 2.0)
}

/// Goodness-of-fit of a 100-cell histogram against the uniform
/// distribution (df = 99).
pub fn gof_uniform(hist: &Histogram100, alpha: f64) -> Result<TestReport, StatsError> {
    let total = hist.total();
    if total < MIN_UNIFORMITY_TOTAL {
        return Err(StatsError::SampleTooSmall {
            total,
            required: MIN_UNIFORMITY_TOTAL,
        });
    }
    let expected = total as f64 / 100.0;
    let statistic = hist
        .counts()
        .iter()
        .map(|&observed| {
            let diff = observed as f64 - expected;
            diff * diff / expected
        })
        .sum();
    TestReport::new(statistic, 99, alpha)
}

/// Goodness-of-fit of observed counts against an integer percentage
/// split (df = k − 1). This is the sample-ratio-mismatch check.
pub fn gof_proportions(
    counts: &[u64],
    split_percent: &[u32],
    alpha: f64,
) -> Result<TestReport, StatsError> {
    if counts.len() != split_percent.len() {
        return Err(StatsError::SplitLengthMismatch {
            counts: counts.len(),
            split: split_percent.len(),
        });
    }
    let pct_sum: u32 = split_percent.iter().sum();
    if pct_sum != 100 {
        return Err(StatsError::BadSplit(pct_sum));
    }
    let total: u64 = counts.iter().sum();
    let mut statistic = 0.0;
    for (cell, (&observed, &pct)) in counts.iter().zip(split_percent).enumerate() {
        let expected = total as f64 * pct as f64 / 100.0;
        if expected < MIN_EXPECTED_COUNT {
            return Err(StatsError::ExpectedCellTooSmall {
                row: 0,
                col: cell,
                expected,
            });
        }
        let diff = observed as f64 - expected;
        statistic += diff * diff / expected;
    }
    TestReport::new(statistic, counts.len() as u64 - 1, alpha)
}

/// Chi-square independence test on a contingency table
/// (df = (r − 1)(c − 1), no continuity correction).
pub fn independence_test(table: &ContingencyTable, alpha: f64) -> Result<TestReport, StatsError> {
    let row_sums = table.row_sums();
    let col_sums = table.col_sums();
    let total = table.total() as f64;

    let mut statistic = 0.0;
    for (i, row) in table.counts().iter().enumerate() {
        for (j, &observed) in row.iter().enumerate() {
            let expected = row_sums[i] as f64 * col_sums[j] as f64 / total;
            if expected < MIN_EXPECTED_COUNT {
                return Err(StatsError::ExpectedCellTooSmall {
                    row: i,
                    col: j,
                    expected,
                });
            }
            let diff = observed as f64 - expected;
            statistic += diff * diff / expected;
        }
    }
    let df = (table.rows() as u64 - 1) * (table.cols() as u64 - 1);
    TestReport::new(statistic, df, alpha)
}
