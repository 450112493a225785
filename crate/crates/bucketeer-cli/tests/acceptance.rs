//! Acceptance suite: one test per release criterion, each printing a
//! single PASS/FAIL line (run with `--nocapture` to see them alongside
//! the harness output).

use bucketeer::harness::{
    run_independence, run_latency_bench, run_uniformity, AlgoVariant, Condition, CorpusSpec,
    REPRO_EXPERIMENT_I, REPRO_EXPERIMENT_J, REPRO_FILES, REPRO_ID_PATTERN,
};
use bucketeer::hashing::{hash64, md5_digest, spooky64, HashKind};
use bucketeer::stats::{chi_square_sf, gof_uniform, Histogram100};
use bucketeer::{assign_new, Assignment, BucketSpec, ExperimentConfig};

const ALPHA: f64 = 0.05;

fn conclude(number: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "acceptance criterion {number} ({name}): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {number} ({name}) failed: {detail}");
}

/// The seeded corpus every statistical criterion runs on.
fn acceptance_corpus(n_users: u64) -> CorpusSpec {
    CorpusSpec::new(n_users, REPRO_ID_PATTERN, 0)
}

#[test]
fn criterion_1_hash_reference_vectors() {
    let fnv_vectors: &[(&[u8], u64)] = &[
        (b"", 0xcbf29ce484222325),
        (b"a", 0xaf63dc4c8601ec8c),
        (b"b", 0xaf63df4c8601f1a5),
        (b"c", 0xaf63de4c8601eff2),
        (b"foo", 0xdcb27518fed9d577),
        (b"foobar", 0x85944171f73967e8),
    ];
    let mut ok = fnv_vectors
        .iter()
        .all(|&(input, expected)| hash64(HashKind::Fnv1a64, input).0 == expected);

    let md5_vectors: &[(&[u8], &str)] = &[
        (b"", "d41d8cd98f00b204e9800998ecf8427e"),
        (b"a", "0cc175b9c0f1b6a831c399e269772661"),
        (b"abc", "900150983cd24fb0d6963f7d28e17f72"),
        (b"message digest", "f96b697d7cb7938d525a2f31aaf161d0"),
        (
            b"abcdefghijklmnopqrstuvwxyz",
            "c3fcd3d76192e4007dfb496cca67e13b",
        ),
        (
            b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789",
            "d174ab98d277d9f5a5611c2c9f419d9f",
        ),
        (
            b"12345678901234567890123456789012345678901234567890123456789012345678901234567890",
            "57edf4a22be3c955ac49da2e2107b67a",
        ),
    ];
    ok &= md5_vectors
        .iter()
        .all(|&(input, expected)| hex_digest(md5_digest(input)) == expected);

    // vectors generated from the reference implementation, seed 0
    let spooky_vectors: &[(Vec<u8>, u64)] = &[
        (b"".to_vec(), 0x232706fc6bf50919),
        (b"a".to_vec(), 0x1a108191a0bbc9bd),
        (b"ab".to_vec(), 0xf9dbb6ad202a090f),
        (b"abc".to_vec(), 0x8aab15f77537c967),
        (b"message digest".to_vec(), 0xa087095ca5c23096),
        (b"exp_Auser_42".to_vec(), 0x5cbc8b457a3c8427),
        (b"0123456789abcde".to_vec(), 0x67211fbaf6b9122d),
        (b"0123456789abcdef".to_vec(), 0xe2d06846964b80ad),
        (b"exp_Buser_123456789".to_vec(), 0xd9a92cb0c63d6b9f),
        (
            b"abcdefghijklmnopqrstuvwxyz0123".to_vec(),
            0x20929ba28e5f977a,
        ),
        (vec![b'x'; 47], 0x32feaebf5ab4f249),
        (vec![b'y'; 48], 0x53420e586e2c8742),
        (vec![b'z'; 100], 0xca3f20a50ef26db4),
        (vec![b'q'; 191], 0x77a27e60544c9da6),
        (vec![b'r'; 192], 0xefc407e667c488a2),
        (vec![b's'; 193], 0x709a4ea47d30bf9f),
        (vec![b't'; 288], 0xda76a8a79f186111),
        (vec![b'u'; 1000], 0x0317c98f40ab64f0),
    ];
    ok &= spooky_vectors
        .iter()
        .all(|(input, expected)| spooky64(input) == *expected);

    conclude(
        1,
        "hash reference vectors",
        ok,
        "a backend deviates from its reference",
    );
}

fn hex_digest(digest: [u8; 16]) -> String {
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn criterion_2_survival_function_reference_points() {
    let four_decimal: &[(f64, u64, f64)] = &[
        (106.74, 99, 0.2798),
        (113.22, 99, 0.1556),
        (108.19, 99, 0.2480),
        (108.40, 99, 0.2435),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for &(statistic, df, expected) in four_decimal {
        let got = chi_square_sf(statistic, df).unwrap();
        if (got - expected).abs() >= 5e-4 {
            ok = false;
            detail.push_str(&format!(
                "sf({statistic},{df})={got} want {expected}±5e-4; "
            ));
        }
    }
    for &(statistic, df, expected) in &[(0.44, 1u64, 0.5075), (0.31, 1, 0.5783)] {
        let got = chi_square_sf(statistic, df).unwrap();
        if (got - expected).abs() >= 2e-3 {
            ok = false;
            detail.push_str(&format!(
                "sf({statistic},{df})={got} want {expected}±2e-3; "
            ));
        }
    }
    conclude(2, "chi-square survival reference points", ok, &detail);
}

#[test]
fn criterion_3_uniformity_verdicts_at_one_million() {
    let corpus = acceptance_corpus(1_000_000);
    let mut ok = true;
    let mut detail = String::new();

    for variant in AlgoVariant::ALL {
        for exposure in [10u32, 100] {
            let report = run_uniformity(
                variant,
                &corpus,
                exposure,
                Condition::LessThan,
                exposure,
                ALPHA,
            )
            .unwrap();
            let test = &report.tests["uniformity"];
            let expected_reject = variant == AlgoVariant::Algo1 && exposure == 10;
            let this_ok = if expected_reject {
                test.reject && test.p_value < 1e-6
            } else {
                !test.reject
            };
            if !this_ok {
                ok = false;
                detail.push_str(&format!(
                    "{variant}@{exposure}%: p={} reject={}; ",
                    test.p_value, test.reject
                ));
            }
        }
    }
    conclude(3, "uniformity verdicts, 1e6 users", ok, &detail);
}

#[test]
fn criterion_4_independence_verdicts_at_one_million() {
    let corpus = acceptance_corpus(1_000_000);
    let mut ok = true;
    let mut detail = String::new();

    for variant in AlgoVariant::ALL {
        let report = run_independence(
            variant,
            &corpus,
            (REPRO_EXPERIMENT_I, REPRO_EXPERIMENT_J),
            ALPHA,
        )
        .unwrap();
        let test = &report.tests["independence"];
        let expected_reject = matches!(variant, AlgoVariant::Algo1 | AlgoVariant::Algo2);
        let this_ok = if expected_reject {
            test.reject && test.p_value < 1e-6
        } else {
            !test.reject
        };
        if !this_ok {
            ok = false;
            detail.push_str(&format!(
                "{variant}: p={} reject={}; ",
                test.p_value, test.reject
            ));
        }
    }
    conclude(4, "independence verdicts, 1e6 users", ok, &detail);
}

#[test]
fn criterion_5_monotonic_ramp_up() {
    let corpus = acceptance_corpus(10_000);
    let users = bucketeer::harness::generate_corpus(&corpus).unwrap();
    let mut ok = true;
    let mut detail = String::new();

    'variants: for kind in [HashKind::Md5_64, HashKind::Spooky64] {
        let configs: Vec<ExperimentConfig> = (0..=100u32)
            .map(|exposure| {
                ExperimentConfig::new(
                    "exp_A",
                    "exp_A",
                    exposure,
                    vec![
                        BucketSpec::new("control", 50),
                        BucketSpec::new("treatment", 50),
                    ],
                )
                .unwrap()
            })
            .collect();
        for user in &users {
            let mut exposed = false;
            let mut bucket: Option<String> = None;
            for config in &configs {
                match assign_new(config, user, kind).unwrap().assignment {
                    Assignment::Ignored => {
                        if exposed {
                            ok = false;
                            detail = format!(
                                "{kind:?}/{user} un-exposed at {}",
                                config.exposure_rate_percent
                            );
                            break 'variants;
                        }
                    }
                    Assignment::Bucketed { bucket: b } => {
                        if let Some(previous) = &bucket {
                            if previous != &b {
                                ok = false;
                                detail = format!(
                                    "{kind:?}/{user} moved {previous}->{b} at {}",
                                    config.exposure_rate_percent
                                );
                                break 'variants;
                            }
                        }
                        bucket = Some(b);
                        exposed = true;
                    }
                }
            }
        }
    }
    conclude(5, "monotonic ramp-up, 10k users x 0..=100%", ok, &detail);
}

#[test]
fn criterion_6_repro_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    for out in [&first, &second] {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_bucketeer"))
            .args([
                "repro",
                "--out",
                out.to_str().unwrap(),
                "--users",
                "150000",
                "--seed",
                "0",
            ])
            .env_remove("BUCKETEER_SEED")
            .stdout(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(status.success(), "repro run failed");
    }

    let mut ok = true;
    let mut detail = String::new();
    for name in REPRO_FILES {
        let a = std::fs::read(first.join(name)).unwrap();
        let b = std::fs::read(second.join(name)).unwrap();
        if a != b {
            ok = false;
            detail.push_str(&format!("{name} differs; "));
        }
    }
    conclude(6, "repro artifacts byte-identical across runs", ok, &detail);
}

#[test]
fn criterion_7_gof_calibration() {
    fn splitmix64(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    let mut state = 0x5eed_u64;
    let mut rejections = 0usize;
    for _ in 0..1000 {
        let mut counts = vec![0u64; 100];
        for _ in 0..10_000 {
            counts[(splitmix64(&mut state) % 100) as usize] += 1;
        }
        if gof_uniform(&Histogram100::from_counts(counts).unwrap(), ALPHA)
            .unwrap()
            .reject
        {
            rejections += 1;
        }
    }
    let rate = rejections as f64 / 1000.0;
    let ok = (0.02..=0.08).contains(&rate);
    conclude(
        7,
        "false-positive calibration",
        ok,
        &format!("rejection rate {rate}"),
    );
}

#[test]
fn criterion_8_latency_ordering() {
    let corpus = acceptance_corpus(100_000);
    let report = run_latency_bench(&AlgoVariant::ALL, &corpus, 3).unwrap();
    for row in &report.rows {
        println!(
            "bench: {} at {:.1} ns/assignment",
            row.variant, row.ns_per_assignment
        );
    }
    for (pair, speedup) in &report.pairwise_speedup {
        println!("bench: {pair} = {speedup:.2}");
    }
    let ns = |v: AlgoVariant| {
        report
            .rows
            .iter()
            .find(|r| r.variant == v)
            .unwrap()
            .ns_per_assignment
    };
    let ok = ns(AlgoVariant::Algo2) < ns(AlgoVariant::Algo1);
    conclude(
        8,
        "single-hash scheme faster than two-step",
        ok,
        &format!(
            "algo1 {:.1} ns vs algo2 {:.1} ns",
            ns(AlgoVariant::Algo1),
            ns(AlgoVariant::Algo2)
        ),
    );
}
