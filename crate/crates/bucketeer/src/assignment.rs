//! The two randomization schemes.
//!
//! Both map `(experiment, user)` to a variant deterministically, so a
//! returning user always sees the same experience:
//!
//! - [`assign_original`]: the legacy two-step scheme. One salted FNV hash
//!   decides exposure, a second salted FNV hash decides the bucket.
//! - [`assign_new`]: a single 64-bit hash of `experiment_id ++ user_id`
//!   is scaled to an integer `Z` in 0..=9999; the upper two digits drive
//!   exposure, the lower two the bucket. Because the bucket digits never
//!   depend on the exposure rate, raising the rate is a monotonic
//!   ramp-up: already-exposed users keep their buckets.

use crate::hashing::{hash64, HashKind, HashValue};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A named variant and its share of exposed users, as an integer
/// percentage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketSpec {
    pub name: String,
    pub percentage: u32,
}

impl BucketSpec {
    pub fn new(name: impl Into<String>, percentage: u32) -> Self {
        BucketSpec {
            name: name.into(),
            percentage,
        }
    }
}

/// Identity and allocation of one experiment.
///
/// `salt` is only consulted by the original algorithm; the new algorithm
/// keys everything off `experiment_id`. Bucket percentages must sum to
/// exactly 100, and the first bucket is conventionally the control.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment_id: String,
    pub salt: String,
    pub exposure_rate_percent: u32,
    pub buckets: Vec<BucketSpec>,
}

impl ExperimentConfig {
    pub fn new(
        experiment_id: impl Into<String>,
        salt: impl Into<String>,
        exposure_rate_percent: u32,
        buckets: Vec<BucketSpec>,
    ) -> Result<Self, ConfigError> {
        let config = ExperimentConfig {
            experiment_id: experiment_id.into(),
            salt: salt.into(),
            exposure_rate_percent,
            buckets,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.experiment_id.is_empty() {
            return Err(ConfigError::EmptyExperimentId);
        }
        if self.exposure_rate_percent > 100 {
            return Err(ConfigError::ExposureOutOfRange(self.exposure_rate_percent));
        }
        if self.buckets.is_empty() {
            return Err(ConfigError::NoBuckets);
        }
        let sum: u32 = self.buckets.iter().map(|b| b.percentage).sum();
        if sum != 100 {
            return Err(ConfigError::BadBucketSum(sum));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("experiment_id must be non-empty")]
    EmptyExperimentId,
    #[error("exposure_rate_percent must be in 0..=100, got {0}")]
    ExposureOutOfRange(u32),
    #[error("an experiment needs at least one bucket")]
    NoBuckets,
    #[error("bucket percentages must sum to exactly 100, got {0}")]
    BadBucketSum(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssignError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("user_id must be non-empty")]
    EmptyUserId,
    #[error("batch item {index}: {source}")]
    BatchItem {
        index: usize,
        #[source]
        source: Box<AssignError>,
    },
}

/// The verdict for one user: out of the experiment entirely, or in a
/// named bucket.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Assignment {
    Ignored,
    Bucketed { bucket: String },
}

impl Assignment {
    pub fn is_exposed(&self) -> bool {
        matches!(self, Assignment::Bucketed { .. })
    }

    pub fn bucket(&self) -> Option<&str> {
        match self {
            Assignment::Ignored => None,
            Assignment::Bucketed { bucket } => Some(bucket),
        }
    }
}

/// The hash material behind a trace: one value for the single-hash
/// scheme, an exposure/bucket pair for the two-step scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum TraceHashes {
    Single {
        hash: HashValue,
    },
    Pair {
        hash_exposure: HashValue,
        hash_bucket: HashValue,
    },
}

/// A full assignment with every intermediate value, for diagnostics and
/// validation. `z` is present only for the new algorithm; the original
/// scheme derives `r_e` and `r_b` from its two hashes directly (both are
/// recorded even for ignored users, though the verdict never looks at
/// the bucket residue of an unexposed user).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssignmentTrace {
    #[serde(flatten)]
    pub hashes: TraceHashes,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<u32>,
    pub r_e: u32,
    pub r_b: u32,
    pub assignment: Assignment,
}

/// Which randomization scheme to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Original,
    New(HashKind),
}

/// Scales a 64-bit hash to an integer in 0..=9999, in double precision.
/// Rounding can push a hash near the top of the range to exactly 10000,
/// so the result is clamped.
fn z_from_hash(hash: u64) -> u32 {
    let z = ((hash as f64) * 10_000.0 / (u64::MAX as f64)).floor() as u32;
    z.min(9_999)
}

/// Walks buckets in declared order and returns the first whose
/// cumulative percentage bound exceeds `r_b`.
fn bucket_for(buckets: &[BucketSpec], r_b: u32) -> &str {
    let mut cumulative = 0u32;
    for bucket in buckets {
        cumulative += bucket.percentage;
        if r_b < cumulative {
            return &bucket.name;
        }
    }
    unreachable!("validated percentages sum to 100 and r_b <= 99")
}

/// Single-hash assignment: `S = experiment_id ++ user_id` (no
/// separator), `H = hash(S)`, `Z = floor(H * 10000 / 2^64)`,
/// `R_e = Z / 100`, `R_b = Z mod 100`. Users with `R_e` at or above the
/// exposure rate are ignored; the rest land in the bucket whose
/// cumulative range covers `R_b`.
pub fn assign_new(
    config: &ExperimentConfig,
    user_id: &str,
    kind: HashKind,
) -> Result<AssignmentTrace, AssignError> {
    config.validate()?;
    if user_id.is_empty() {
        return Err(AssignError::EmptyUserId);
    }

    let mut s = String::with_capacity(config.experiment_id.len() + user_id.len());
    s.push_str(&config.experiment_id);
    s.push_str(user_id);
    let hash = hash64(kind, s.as_bytes());

    let z = z_from_hash(hash.0);
    let r_e = z / 100;
    let r_b = z % 100;
    let assignment = if r_e >= config.exposure_rate_percent {
        Assignment::Ignored
    } else {
        Assignment::Bucketed {
            bucket: bucket_for(&config.buckets, r_b).to_string(),
        }
    };

    Ok(AssignmentTrace {
        hashes: TraceHashes::Single { hash },
        z: Some(z),
        r_e,
        r_b,
        assignment,
    })
}

/// Two-step assignment, always over FNV: `R_e` comes from
/// `hash(salt ++ user_id ++ "Exposure")` and decides exposure, `R_b`
/// from `hash(salt ++ user_id ++ "Bucket")` and decides the bucket.
pub fn assign_original(
    config: &ExperimentConfig,
    user_id: &str,
) -> Result<AssignmentTrace, AssignError> {
    config.validate()?;
    if user_id.is_empty() {
        return Err(AssignError::EmptyUserId);
    }

    let mut s = String::with_capacity(config.salt.len() + user_id.len() + 8);
    s.push_str(&config.salt);
    s.push_str(user_id);
    let base_len = s.len();

    s.push_str("Exposure");
    let hash_exposure = hash64(HashKind::Fnv1a64, s.as_bytes());
    s.truncate(base_len);
    s.push_str("Bucket");
    let hash_bucket = hash64(HashKind::Fnv1a64, s.as_bytes());

    let r_e = (hash_exposure.0 % 100) as u32;
    let r_b = (hash_bucket.0 % 100) as u32;
    let assignment = if r_e >= config.exposure_rate_percent {
        Assignment::Ignored
    } else {
        Assignment::Bucketed {
            bucket: bucket_for(&config.buckets, r_b).to_string(),
        }
    };

    Ok(AssignmentTrace {
        hashes: TraceHashes::Pair {
            hash_exposure,
            hash_bucket,
        },
        z: None,
        r_e,
        r_b,
        assignment,
    })
}

/// Runs whichever scheme `algorithm` selects.
pub fn assign(
    config: &ExperimentConfig,
    user_id: &str,
    algorithm: Algorithm,
) -> Result<AssignmentTrace, AssignError> {
    match algorithm {
        Algorithm::Original => assign_original(config, user_id),
        Algorithm::New(kind) => assign_new(config, user_id, kind),
    }
}

/// Assigns a whole corpus. Output order matches input order and every
/// element equals the corresponding single call; work is spread across
/// threads.
pub fn assign_batch<S>(
    config: &ExperimentConfig,
    user_ids: &[S],
    algorithm: Algorithm,
) -> Result<Vec<AssignmentTrace>, AssignError>
where
    S: AsRef<str> + Sync,
{
    config.validate()?;
    // surface the first offending item deterministically before fanning out
    if let Some(index) = user_ids.iter().position(|u| u.as_ref().is_empty()) {
        return Err(AssignError::BatchItem {
            index,
            source: Box::new(AssignError::EmptyUserId),
        });
    }
    user_ids
        .par_iter()
        .map(|user_id| assign(config, user_id.as_ref(), algorithm))
        .collect()
}
