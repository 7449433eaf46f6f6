//! Seeded hash functions shared between curator and client.
//!
//! The sketch construction needs two public hash functions: `h` mapping a
//! (position, bit) code in `[2n]` to a bucket in `[1, M2]`, and `g` mapping
//! the same code together with a repetition index in `[1, M1]` to `[1, M3]`.
//! Both are realized as keyed integer mixers over the 32-byte public seed,
//! with a multiply-shift range reduction. Evaluation uses fixed-width
//! integer arithmetic only, so a stored seed reproduces every hash value
//! bit-for-bit on any platform.

use crate::error::{Error, Result};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Encodes a 1-indexed position and its bit value as a point of `[0, 2n)`.
#[inline]
pub fn position_input(p: usize, bit: bool) -> u64 {
    2 * (p as u64 - 1) + u64::from(bit)
}

/// One family of `h`/`g` evaluations, fully determined by the public seed.
#[derive(Clone, Debug)]
pub struct HashFamily {
    domain: u64,
    m1: u32,
    range_h: u32,
    range_g: u32,
    key_h: [u64; 2],
    key_g: u64,
    // per-repetition subkeys so that distinct i behave as independent draws
    rep_keys: Vec<u64>,
}

impl HashFamily {
    pub fn new(seed: &[u8; 32], domain: u64, m1: u32, range_h: u32, range_g: u32) -> Self {
        let word = |i: usize| u64::from_le_bytes(seed[i * 8..(i + 1) * 8].try_into().unwrap());
        let base = word(2);
        let rep_keys = (1..=m1)
            .map(|i| mix64(base ^ (u64::from(i)).wrapping_mul(GOLDEN)))
            .collect();
        Self {
            domain,
            m1,
            range_h,
            range_g,
            key_h: [word(0), word(1)],
            key_g: word(3),
            rep_keys,
        }
    }

    #[inline]
    fn reduce(v: u64, range: u32) -> u32 {
        (((v as u128 * range as u128) >> 64) as u32) + 1
    }

    #[inline]
    pub(crate) fn h_unchecked(&self, x: u64) -> u32 {
        Self::reduce(mix64(mix64(x ^ self.key_h[0]) ^ self.key_h[1]), self.range_h)
    }

    #[inline]
    pub(crate) fn g_unchecked(&self, x: u64, i: u32) -> u32 {
        let k = self.rep_keys[(i - 1) as usize];
        Self::reduce(mix64(mix64(x ^ k) ^ self.key_g), self.range_g)
    }

    /// `h(x)` in `[1, range_h]`.
    pub fn eval_h(&self, x: u64) -> Result<u32> {
        if x >= self.domain {
            return Err(Error::HashDomain {
                x,
                domain: self.domain,
            });
        }
        Ok(self.h_unchecked(x))
    }

    /// `g(x, i)` in `[1, range_g]`, `i` in `[1, m1]`.
    pub fn eval_g(&self, x: u64, i: u32) -> Result<u32> {
        if x >= self.domain {
            return Err(Error::HashDomain {
                x,
                domain: self.domain,
            });
        }
        if i < 1 || i > self.m1 {
            return Err(Error::HashRepetition { i, m1: self.m1 });
        }
        Ok(self.g_unchecked(x, i))
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }

    pub fn range_h(&self) -> u32 {
        self.range_h
    }

    pub fn range_g(&self) -> u32 {
        self.range_g
    }
}
