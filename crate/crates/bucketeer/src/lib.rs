//! Deterministic hash-based user-to-variant assignment for online
//! controlled experiments, with the statistical machinery to validate it.
//!
//! The crate has four layers:
//!
//! - [`hashing`]: bit-exact 64-bit hash backends (FNV-1a, MD5-derived,
//!   SpookyHash-derived) behind one uniform interface.
//! - [`assignment`]: two randomization schemes mapping `(experiment, user)`
//!   to a variant — a legacy two-step salted scheme and a single-hash
//!   scheme with monotonic ramp-up.
//! - [`stats`]: chi-square goodness-of-fit and independence tests, backed
//!   by a hand-rolled regularized incomplete gamma.
//! - [`harness`]: repeatable validation experiments (uniformity,
//!   independence, sample-ratio checks, latency benchmarks) producing
//!   machine-readable reports.

pub mod assignment;
pub mod harness;
pub mod hashing;
pub mod stats;

pub use assignment::{
    assign, assign_batch, assign_new, assign_original, Algorithm, Assignment, AssignmentTrace,
    BucketSpec, ExperimentConfig,
};
pub use hashing::{hash64, HashKind, HashValue};
pub use stats::{
    chi_square_sf, gof_proportions, gof_uniform, independence_test, ContingencyTable, Histogram100,
    TestReport,
};
