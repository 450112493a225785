//! 64-bit hash backends behind one uniform interface.
//!
//! All three backends are pure functions over raw bytes; callers hash the
//! UTF-8 bytes of their strings with no normalization. The backends are
//! deliberately pinned bit-for-bit so that assignments are reproducible
//! across machines and releases:
//!
//! - `Fnv1a64`: FNV-1a with the 64-bit offset basis and prime.
//! - `Md5_64`: the RFC 1321 digest truncated to its first 8 bytes,
//!   read big-endian.
//! - `Spooky64`: SpookyHash V2's 64-bit result with both seeds zero.

mod fnv;
mod md5;
mod spooky;

pub use fnv::fnv1a64;
pub use md5::{md5_digest, Md5};
pub use spooky::{spooky64, spooky_hash128};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Selects one of the three hash backends.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HashKind {
    #[serde(rename = "fnv")]
    Fnv1a64,
    #[serde(rename = "md5")]
    Md5_64,
    #[serde(rename = "spooky")]
    Spooky64,
}

impl HashKind {
    pub const ALL: [HashKind; 3] = [HashKind::Fnv1a64, HashKind::Md5_64, HashKind::Spooky64];

    /// The stable name used in CLI flags and report JSON.
    pub fn name(self) -> &'static str {
        match self {
            HashKind::Fnv1a64 => "fnv",
            HashKind::Md5_64 => "md5",
            HashKind::Spooky64 => "spooky",
        }
    }
}

impl fmt::Display for HashKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HashKind {
    type Err = UnknownHashKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fnv" => Ok(HashKind::Fnv1a64),
            "md5" => Ok(HashKind::Md5_64),
            "spooky" => Ok(HashKind::Spooky64),
            other => Err(UnknownHashKind(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("unknown hash kind {0:?}, expected one of: fnv, md5, spooky")]
pub struct UnknownHashKind(pub String);

/// A 64-bit hash output. The full range is meaningful; no values are
/// reserved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HashValue(pub u64);

impl HashValue {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for HashValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#018x}", self.0)
    }
}

/// Hashes `input` with the selected backend. Total and deterministic:
/// identical `(kind, input)` always yields an identical value.
pub fn hash64(kind: HashKind, input: &[u8]) -> HashValue {
    let h = match kind {
        HashKind::Fnv1a64 => fnv1a64(input),
        HashKind::Md5_64 => {
            let digest = md5_digest(input);
            u64::from_be_bytes(digest[..8].try_into().unwrap())
        }
        HashKind::Spooky64 => spooky64(input),
    };
    HashValue(h)
}
