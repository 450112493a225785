//! FNV-1a, 64-bit.

const OFFSET_BASIS: u64 = 0xcbf29ce484222325;
const PRIME: u64 = 0x100000001b3;

/// FNV-1a over `input`; the empty input returns the offset basis.
pub fn fnv1a64(input: &[u8]) -> u64 {
    let mut hash = OFFSET_BASIS;
    for &byte in input {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(PRIME);
    }
    hash
}
