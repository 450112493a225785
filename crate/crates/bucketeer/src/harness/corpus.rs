//! Deterministic synthetic user corpora.
//!
//! Validation runs use generated user IDs rather than production
//! ones. Generation is a pure function of the spec: the same
//! spec always yields the same ID list, which is what makes every
//! downstream report reproducible.

use super::HarnessError;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Recipe for a user-ID corpus.
///
/// `id_pattern` supports two placeholders: `{index}` (the user's ordinal,
/// required whenever more than one ID is generated, since it is what
/// keeps IDs distinct; `{indexN}` zero-pads it to N digits) and `{rand}`
/// (a seed-derived hex tag for corpora that should not look sequential;
/// `{randN}` with N in 0..=16 keeps only the first N hex digits).
/// Combining a constant prefix, a `{rand*}` tag, and a fixed-width index
/// mimics structured production IDs such as object IDs with an epoch
/// prefix and a counter tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub n_users: u64,
    pub id_pattern: String,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            n_users: 1_000_000,
            id_pattern: "user_{index}".to_string(),
            seed: 0,
        }
    }
}

impl CorpusSpec {
    pub fn new(n_users: u64, id_pattern: impl Into<String>, seed: u64) -> Self {
        CorpusSpec {
            n_users,
            id_pattern: id_pattern.into(),
            seed,
        }
    }

    /// Sequential `user_000..` corpus of the given size with seed 0.
    pub fn sequential(n_users: u64) -> Self {
        CorpusSpec {
            n_users,
            ..Default::default()
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Parses `token` against `name` or `nameN`, returning the width (or
/// `default` for the bare form).
fn token_width(token: &str, name: &str, default: usize, max: usize) -> Option<usize> {
    let rest = token.strip_prefix(name)?;
    if rest.is_empty() {
        Some(default)
    } else {
        rest.parse::<usize>().ok().filter(|&n| n <= max)
    }
}

fn render_id(pattern: &str, index: u64, seed: u64) -> String {
    let mut out = String::with_capacity(pattern.len() + 8);
    let mut rest = pattern;
    while let Some(start) = rest.find('{') {
        out.push_str(&rest[..start]);
        let tail = &rest[start..];
        let Some(end) = tail.find('}') else {
            out.push_str(tail);
            return out;
        };
        let token = &tail[1..end];
        if let Some(width) = token_width(token, "index", 0, 20) {
            write!(out, "{index:0width$}").expect("writing to a string cannot fail");
        } else if let Some(width) = token_width(token, "rand", 16, 16) {
            let tag = splitmix64(seed ^ index.wrapping_mul(0x9e3779b97f4a7c15));
            let hex = format!("{tag:016x}");
            out.push_str(&hex[..width]);
        } else {
            // unknown token stays literal
            out.push_str(&tail[..=end]);
        }
        rest = &tail[end + 1..];
    }
    out.push_str(rest);
    out
}

fn has_index_token(pattern: &str) -> bool {
    let mut rest = pattern;
    while let Some(start) = rest.find('{') {
        let tail = &rest[start..];
        let Some(end) = tail.find('}') else {
            return false;
        };
        if token_width(&tail[1..end], "index", 0, 20).is_some() {
            return true;
        }
        rest = &tail[end + 1..];
    }
    false
}

/// Materializes the corpus: pairwise-distinct IDs, deterministic in the
/// spec.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<String>, HarnessError> {
    if spec.n_users == 0 {
        return Err(HarnessError::EmptyCorpus);
    }
    if spec.n_users > 1 && !has_index_token(&spec.id_pattern) {
        return Err(HarnessError::PatternMissingIndex {
            pattern: spec.id_pattern.clone(),
            n_users: spec.n_users,
        });
    }

    Ok((0..spec.n_users)
        .map(|i| render_id(&spec.id_pattern, i, spec.seed))
        .collect())
}
