//! SpookyHash V2, 64-bit result.
//!
//! Safe transliteration of Bob Jenkins' public-domain reference: messages
//! shorter than 192 bytes take the "short" path (a 4-lane mix), longer
//! ones the 12-lane block path. Byte order is little-endian throughout,
//! so results are identical on any platform.

const NUM_VARS: usize = 12;
const BLOCK_SIZE: usize = NUM_VARS * 8;
const BUF_SIZE: usize = 2 * BLOCK_SIZE;
const CONST: u64 = 0xdead_beef_dead_beef;

#[inline]
fn read_u64(bytes: &[u8], offset: usize) -> u64 {
    u64::from_le_bytes(bytes[offset..offset + 8].try_into().unwrap())
}

#[inline]
#[rustfmt::skip]
fn short_mix(a: &mut u64, b: &mut u64, c: &mut u64, d: &mut u64) {
    *c = c.rotate_left(50); *c = c.wrapping_add(*d); *a ^= *c;
    *d = d.rotate_left(52); *d = d.wrapping_add(*a); *b ^= *d;
    *a = a.rotate_left(30); *a = a.wrapping_add(*b); *c ^= *a;
    *b = b.rotate_left(41); *b = b.wrapping_add(*c); *d ^= *b;
    *c = c.rotate_left(54); *c = c.wrapping_add(*d); *a ^= *c;
    *d = d.rotate_left(48); *d = d.wrapping_add(*a); *b ^= *d;
    *a = a.rotate_left(38); *a = a.wrapping_add(*b); *c ^= *a;
    *b = b.rotate_left(37); *b = b.wrapping_add(*c); *d ^= *b;
    *c = c.rotate_left(62); *c = c.wrapping_add(*d); *a ^= *c;
    *d = d.rotate_left(34); *d = d.wrapping_add(*a); *b ^= *d;
    *a = a.rotate_left(5);  *a = a.wrapping_add(*b); *c ^= *a;
    *b = b.rotate_left(36); *b = b.wrapping_add(*c); *d ^= *b;
}

#[inline]
#[rustfmt::skip]
fn short_end(a: &mut u64, b: &mut u64, c: &mut u64, d: &mut u64) {
    *d ^= *c; *c = c.rotate_left(15); *d = d.wrapping_add(*c);
    *a ^= *d; *d = d.rotate_left(52); *a = a.wrapping_add(*d);
    *b ^= *a; *a = a.rotate_left(26); *b = b.wrapping_add(*a);
    *c ^= *b; *b = b.rotate_left(51); *c = c.wrapping_add(*b);
    *d ^= *c; *c = c.rotate_left(28); *d = d.wrapping_add(*c);
    *a ^= *d; *d = d.rotate_left(9);  *a = a.wrapping_add(*d);
    *b ^= *a; *a = a.rotate_left(47); *b = b.wrapping_add(*a);
    *c ^= *b; *b = b.rotate_left(54); *c = c.wrapping_add(*b);
    *d ^= *c; *c = c.rotate_left(32); *d = d.wrapping_add(*c);
    *a ^= *d; *d = d.rotate_left(25); *a = a.wrapping_add(*d);
    *b ^= *a; *a = a.rotate_left(63); *b = b.wrapping_add(*a);
}

fn short(message: &[u8], seed1: u64, seed2: u64) -> (u64, u64) {
    let length = message.len();
    let mut remainder = length % 32;
    let mut a = seed1;
    let mut b = seed2;
    let mut c = CONST;
    let mut d = CONST;
    let mut offset = 0;

    if length > 15 {
        for _ in 0..length / 32 {
            c = c.wrapping_add(read_u64(message, offset));
            d = d.wrapping_add(read_u64(message, offset + 8));
            short_mix(&mut a, &mut b, &mut c, &mut d);
            a = a.wrapping_add(read_u64(message, offset + 16));
            b = b.wrapping_add(read_u64(message, offset + 24));
            offset += 32;
        }
        if remainder >= 16 {
            c = c.wrapping_add(read_u64(message, offset));
            d = d.wrapping_add(read_u64(message, offset + 8));
            short_mix(&mut a, &mut b, &mut c, &mut d);
            offset += 16;
            remainder -= 16;
        }
    }

    // last 0..15 bytes plus the total length
    d = d.wrapping_add((length as u64) << 56);
    if remainder == 0 {
        c = c.wrapping_add(CONST);
        d = d.wrapping_add(CONST);
    } else {
        // zero-padding reproduces the reference's masked tail reads
        let mut tail = [0u8; 16];
        tail[..remainder].copy_from_slice(&message[offset..]);
        c = c.wrapping_add(read_u64(&tail, 0));
        if remainder > 8 {
            d = d.wrapping_add(read_u64(&tail, 8));
        }
    }
    short_end(&mut a, &mut b, &mut c, &mut d);
    (a, b)
}

#[inline]
#[rustfmt::skip]
fn mix(data: &[u64; NUM_VARS], s: &mut [u64; NUM_VARS]) {
    s[0] = s[0].wrapping_add(data[0]);   s[2] ^= s[10]; s[11] ^= s[0];  s[0] = s[0].rotate_left(11);  s[11] = s[11].wrapping_add(s[1]);
    s[1] = s[1].wrapping_add(data[1]);   s[3] ^= s[11]; s[0] ^= s[1];   s[1] = s[1].rotate_left(32);  s[0] = s[0].wrapping_add(s[2]);
    s[2] = s[2].wrapping_add(data[2]);   s[4] ^= s[0];  s[1] ^= s[2];   s[2] = s[2].rotate_left(43);  s[1] = s[1].wrapping_add(s[3]);
    s[3] = s[3].wrapping_add(data[3]);   s[5] ^= s[1];  s[2] ^= s[3];   s[3] = s[3].rotate_left(31);  s[2] = s[2].wrapping_add(s[4]);
    s[4] = s[4].wrapping_add(data[4]);   s[6] ^= s[2];  s[3] ^= s[4];   s[4] = s[4].rotate_left(17);  s[3] = s[3].wrapping_add(s[5]);
    s[5] = s[5].wrapping_add(data[5]);   s[7] ^= s[3];  s[4] ^= s[5];   s[5] = s[5].rotate_left(28);  s[4] = s[4].wrapping_add(s[6]);
    s[6] = s[6].wrapping_add(data[6]);   s[8] ^= s[4];  s[5] ^= s[6];   s[6] = s[6].rotate_left(39);  s[5] = s[5].wrapping_add(s[7]);
    s[7] = s[7].wrapping_add(data[7]);   s[9] ^= s[5];  s[6] ^= s[7];   s[7] = s[7].rotate_left(57);  s[6] = s[6].wrapping_add(s[8]);
    s[8] = s[8].wrapping_add(data[8]);   s[10] ^= s[6]; s[7] ^= s[8];   s[8] = s[8].rotate_left(55);  s[7] = s[7].wrapping_add(s[9]);
    s[9] = s[9].wrapping_add(data[9]);   s[11] ^= s[7]; s[8] ^= s[9];   s[9] = s[9].rotate_left(54);  s[8] = s[8].wrapping_add(s[10]);
    s[10] = s[10].wrapping_add(data[10]); s[0] ^= s[8]; s[9] ^= s[10];  s[10] = s[10].rotate_left(22); s[9] = s[9].wrapping_add(s[11]);
    s[11] = s[11].wrapping_add(data[11]); s[1] ^= s[9]; s[10] ^= s[11]; s[11] = s[11].rotate_left(46); s[10] = s[10].wrapping_add(s[0]);
}

#[inline]
#[rustfmt::skip]
fn end_partial(h: &mut [u64; NUM_VARS]) {
    h[11] = h[11].wrapping_add(h[1]); h[2] ^= h[11]; h[1] = h[1].rotate_left(44);
    h[0] = h[0].wrapping_add(h[2]);   h[3] ^= h[0];  h[2] = h[2].rotate_left(15);
    h[1] = h[1].wrapping_add(h[3]);   h[4] ^= h[1];  h[3] = h[3].rotate_left(34);
    h[2] = h[2].wrapping_add(h[4]);   h[5] ^= h[2];  h[4] = h[4].rotate_left(21);
    h[3] = h[3].wrapping_add(h[5]);   h[6] ^= h[3];  h[5] = h[5].rotate_left(38);
    h[4] = h[4].wrapping_add(h[6]);   h[7] ^= h[4];  h[6] = h[6].rotate_left(33);
    h[5] = h[5].wrapping_add(h[7]);   h[8] ^= h[5];  h[7] = h[7].rotate_left(10);
    h[6] = h[6].wrapping_add(h[8]);   h[9] ^= h[6];  h[8] = h[8].rotate_left(13);
    h[7] = h[7].wrapping_add(h[9]);   h[10] ^= h[7]; h[9] = h[9].rotate_left(38);
    h[8] = h[8].wrapping_add(h[10]);  h[11] ^= h[8]; h[10] = h[10].rotate_left(53);
    h[9] = h[9].wrapping_add(h[11]);  h[0] ^= h[9];  h[11] = h[11].rotate_left(42);
    h[10] = h[10].wrapping_add(h[0]); h[1] ^= h[10]; h[0] = h[0].rotate_left(54);
}

#[inline]
fn end(data: &[u64; NUM_VARS], h: &mut [u64; NUM_VARS]) {
    for i in 0..NUM_VARS {
        h[i] = h[i].wrapping_add(data[i]);
    }
    end_partial(h);
    end_partial(h);
    end_partial(h);
}

/// 128-bit SpookyHash V2 of `message` with the given seed pair.
pub fn spooky_hash128(message: &[u8], seed1: u64, seed2: u64) -> (u64, u64) {
    if message.len() < BUF_SIZE {
        return short(message, seed1, seed2);
    }

    let mut h = [0u64; NUM_VARS];
    for (i, lane) in h.iter_mut().enumerate() {
        *lane = match i % 3 {
            0 => seed1,
            1 => seed2,
            _ => CONST,
        };
    }

    let mut data = [0u64; NUM_VARS];
    let mut offset = 0;
    for _ in 0..message.len() / BLOCK_SIZE {
        for (i, word) in data.iter_mut().enumerate() {
            *word = read_u64(message, offset + 8 * i);
        }
        mix(&data, &mut h);
        offset += BLOCK_SIZE;
    }

    // zero-padded final partial block; its last byte holds the remainder
    let remainder = message.len() - offset;
    let mut buf = [0u8; BLOCK_SIZE];
    buf[..remainder].copy_from_slice(&message[offset..]);
    buf[BLOCK_SIZE - 1] = remainder as u8;
    for (i, word) in data.iter_mut().enumerate() {
        *word = read_u64(&buf, 8 * i);
    }
    end(&data, &mut h);
    (h[0], h[1])
}

/// 64-bit SpookyHash V2 with both seeds zero.
pub fn spooky64(message: &[u8]) -> u64 {
    spooky_hash128(message, 0, 0).0
}
