//! Single-threaded latency measurement of the assignment variants.
//!
//! The corpus is generated before any clock starts, and each iteration
//! times chunks of assignments to build a per-iteration median; the
//! reported figure is the median of those medians. Ratios are reported,
//! not asserted — absolute numbers are hardware-specific.

use super::{generate_corpus, AlgoVariant, CorpusSpec, HarnessError};
use crate::assignment::{assign, BucketSpec, ExperimentConfig};
use serde::Serialize;
use std::collections::BTreeMap;
use std::hint::black_box;
use std::time::Instant;

/// Chunks per iteration; each chunk yields one ns/assignment sample.
const CHUNKS_PER_ITERATION: usize = 16;

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub variant: AlgoVariant,
    pub ns_per_assignment: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub corpus: CorpusSpec,
    pub iterations: u32,
    pub rows: Vec<BenchRow>,
    /// `"algoA_over_algoB"` maps to `time(algoA) / time(algoB)`, i.e.
    /// how many times faster B is than A.
    pub pairwise_speedup: BTreeMap<String, f64>,
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.total_cmp(b));
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2.0
    }
}

/// Times every requested variant over the same pre-generated corpus at
/// full exposure with a 50/50 split.
pub fn run_latency_bench(
    variants: &[AlgoVariant],
    corpus: &CorpusSpec,
    iterations: u32,
) -> Result<BenchReport, HarnessError> {
    if iterations == 0 {
        return Err(HarnessError::ZeroIterations);
    }
    if variants.is_empty() {
        return Err(HarnessError::NoVariants);
    }

    let users = generate_corpus(corpus)?;
    let config = ExperimentConfig::new(
        super::EXPERIMENT_A,
        super::EXPERIMENT_A,
        100,
        vec![
            BucketSpec::new("control", 50),
            BucketSpec::new("treatment", 50),
        ],
    )
    .expect("static config is valid");

    let mut rows = Vec::with_capacity(variants.len());
    for &variant in variants {
        let algorithm = variant.algorithm();

        // untimed warmup pass
        for user in &users {
            black_box(assign(&config, black_box(user), algorithm)?);
        }

        let chunk_len = (users.len() / CHUNKS_PER_ITERATION).max(1);
        let mut iteration_medians = Vec::with_capacity(iterations as usize);
        for _ in 0..iterations {
            let mut chunk_samples = Vec::with_capacity(CHUNKS_PER_ITERATION + 1);
            for chunk in users.chunks(chunk_len) {
                let start = Instant::now();
                for user in chunk {
                    black_box(assign(&config, black_box(user), algorithm)?);
                }
                let elapsed = start.elapsed().as_nanos() as f64;
                chunk_samples.push(elapsed / chunk.len() as f64);
            }
            iteration_medians.push(median(&mut chunk_samples));
        }
        rows.push(BenchRow {
            variant,
            ns_per_assignment: median(&mut iteration_medians),
        });
    }

    let mut pairwise_speedup = BTreeMap::new();
    for (i, a) in rows.iter().enumerate() {
        for b in rows.iter().skip(i + 1) {
            pairwise_speedup.insert(
                format!("{}_over_{}", a.variant, b.variant),
                a.ns_per_assignment / b.ns_per_assignment,
            );
        }
    }

    Ok(BenchReport {
        corpus: corpus.clone(),
        iterations,
        rows,
        pairwise_speedup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variant_single_iteration_has_one_row() {
        let corpus = CorpusSpec::sequential(2_000);
        let report = run_latency_bench(&[AlgoVariant::Algo2], &corpus, 1).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert!(report.rows[0].ns_per_assignment > 0.0);
        assert!(report.pairwise_speedup.is_empty());
    }

    #[test]
    fn pairwise_ratios_cover_all_pairs() {
        let corpus = CorpusSpec::sequential(2_000);
        let report = run_latency_bench(
            &[AlgoVariant::Algo1, AlgoVariant::Algo2, AlgoVariant::Algo4],
            &corpus,
            1,
        )
        .unwrap();
        assert_eq!(report.pairwise_speedup.len(), 3);
        assert!(report.pairwise_speedup.contains_key("algo1_over_algo2"));
        assert!(report.pairwise_speedup.contains_key("algo1_over_algo4"));
        assert!(report.pairwise_speedup.contains_key("algo2_over_algo4"));
    }

    #[test]
    fn input_validation() {
        let corpus = CorpusSpec::sequential(10);
        assert!(matches!(
            run_latency_bench(&[AlgoVariant::Algo1], &corpus, 0),
            Err(HarnessError::ZeroIterations)
        ));
        assert!(matches!(
            run_latency_bench(&[], &corpus, 1),
            Err(HarnessError::NoVariants)
        ));
    }

    #[test]
    fn median_of_samples() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 3.0, 2.0]), 2.5);
        assert_eq!(median(&mut [7.0]), 7.0);
    }
}
