//! Exact reference implementations and planted-instance generators.
//!
//! Everything here is ground truth for the probabilistic structures:
//! word-wise Hamming distance, linear-scan longest common prefix, banded and
//! unbanded edit distance, plus generators that emit pairs with a verified
//! planted distance. Oracles favor clarity over speed.

use rand::Rng;

use crate::bitstring::{hamming_popcount, PackedBitString};
use crate::edit::EditEstimate;
use crate::error::{Error, Result};

/// Exact Hamming distance (count of differing positions).
pub fn exact_hamming(a: &PackedBitString, b: &PackedBitString) -> Result<u64> {
    hamming_popcount(a, b)
}

/// Length of the longest common prefix of `a[i..]` and `b[j..]`, positions
/// 1-indexed.
pub fn exact_lcp(a: &PackedBitString, i: usize, b: &PackedBitString, j: usize) -> Result<usize> {
    if i < 1 || i > a.len() {
        return Err(Error::PositionOutOfRange {
            position: i,
            max: a.len(),
        });
    }
    if j < 1 || j > b.len() {
        return Err(Error::PositionOutOfRange {
            position: j,
            max: b.len(),
        });
    }
    let mut w = 0;
    while i + w <= a.len() && j + w <= b.len() && a.get(i + w) == b.get(j + w) {
        w += 1;
    }
    Ok(w)
}

const INF: u32 = u32::MAX / 2;

/// Banded edit distance over the diagonals `|i - j| <= k`; `TooFar` when the
/// true distance exceeds `k`.
pub fn exact_edit(a: &PackedBitString, b: &PackedBitString, k: u32) -> Result<EditEstimate> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    let kk = k as usize;
    let width = 2 * kk + 1;
    // row[d] = D(i, i + d - k); positions outside the band stay at INF
    let mut prev = vec![INF; width];
    let mut cur = vec![INF; width];
    for (d, cell) in prev.iter_mut().enumerate().take(width) {
        // i = 0 row: D(0, j) = j
        let j = d as isize - kk as isize;
        if j >= 0 && j as usize <= n {
            *cell = j as u32;
        }
    }
    for i in 1..=n {
        for cell in cur.iter_mut() {
            *cell = INF;
        }
        let ai = a.get(i);
        for d in 0..width {
            let j = i as isize + d as isize - kk as isize;
            if j < 0 || j as usize > n {
                continue;
            }
            let j = j as usize;
            let mut best = INF;
            // delete a[i]: from D(i-1, j), same j means diagonal d+1 in the previous row
            if d + 1 < width {
                best = best.min(prev[d + 1].saturating_add(1));
            }
            // insert b[j]: from D(i, j-1), diagonal d-1 in the current row
            if d > 0 && j >= 1 {
                best = best.min(cur[d - 1].saturating_add(1));
            }
            // match or substitute: from D(i-1, j-1), same diagonal
            if j >= 1 {
                let cost = u32::from(ai != b.get(j));
                best = best.min(prev[d].saturating_add(cost));
            }
            cur[d] = best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let answer = prev[kk]; // diagonal j - i = 0
    if answer > k {
        Ok(EditEstimate::TooFar)
    } else {
        Ok(EditEstimate::Distance(answer))
    }
}

/// Full-table edit distance; cross-check for the banded version on tiny inputs.
pub fn exact_edit_unbanded(a: &PackedBitString, b: &PackedBitString) -> u32 {
    let n = a.len();
    let m = b.len();
    let mut prev: Vec<u32> = (0..=m as u32).collect();
    let mut cur = vec![0u32; m + 1];
    for i in 1..=n {
        cur[0] = i as u32;
        let ai = a.get(i);
        for j in 1..=m {
            let sub = prev[j - 1] + u32::from(ai != b.get(j));
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

/// Uniformly random string of length `n`.
pub fn random_string<R: Rng>(n: usize, rng: &mut R) -> PackedBitString {
    let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    PackedBitString::from_bits(&bits).expect("n >= 1")
}

/// Emits `(a, b)` with exactly `d` differing positions.
pub fn plant_hamming_pair<R: Rng>(
    n: usize,
    d: u64,
    rng: &mut R,
) -> Result<(PackedBitString, PackedBitString)> {
    if n == 0 || d > n as u64 {
        return Err(Error::InfeasiblePlant(format!(
            "hamming distance {d} on length {n}"
        )));
    }
    let a = random_string(n, rng);
    let mut bits: Vec<bool> = (1..=n).map(|p| a.get(p)).collect();
    for idx in rand::seq::index::sample(rng, n, d as usize) {
        bits[idx] = !bits[idx];
    }
    let b = PackedBitString::from_bits(&bits).expect("n >= 1");
    debug_assert_eq!(exact_hamming(&a, &b).unwrap(), d);
    Ok((a, b))
}

/// Emits `(a, b)` of equal length `n` with edit distance exactly `d`,
/// verified by the oracle. Length is preserved by pairing every insertion
/// with a deletion; pairs whose edits collapse below `d` are discarded and
/// regenerated.
pub fn plant_edit_pair<R: Rng>(
    n: usize,
    d: u32,
    rng: &mut R,
) -> Result<(PackedBitString, PackedBitString)> {
    if n == 0 || d as usize > n {
        return Err(Error::InfeasiblePlant(format!(
            "edit distance {d} on length {n}"
        )));
    }
    if d == 0 {
        let a = random_string(n, rng);
        return Ok((a.clone(), a));
    }
    for _ in 0..256 {
        let a = random_string(n, rng);
        let pair_budget = d / 2;
        let t = if pair_budget == 0 {
            0
        } else {
            rng.gen_range(0..=pair_budget)
        };
        let subs = (d - 2 * t) as usize;
        let mut bits: Vec<bool> = (1..=n).map(|p| a.get(p)).collect();
        for idx in rand::seq::index::sample(rng, n, subs.min(n)) {
            bits[idx] = !bits[idx];
        }
        for _ in 0..t {
            let del = rng.gen_range(0..bits.len());
            bits.remove(del);
            let ins = rng.gen_range(0..=bits.len());
            bits.insert(ins, rng.gen());
        }
        let b = PackedBitString::from_bits(&bits).expect("length preserved");
        if exact_edit(&a, &b, d)? == EditEstimate::Distance(d) {
            return Ok((a, b));
        }
    }
    Err(Error::InfeasiblePlant(format!(
        "edit distance {d} on length {n}: edits kept collapsing"
    )))
}
