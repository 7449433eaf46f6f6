//! Banded furthest-reach edit distance driven by prefix queries.
//!
//! The state is the classic diagonal table `F(r, d)`: the furthest row of
//! the alignment grid reachable on diagonal `d = col - row` using exactly
//! `r` edits, with reaches slid forward along their diagonal by the longest
//! common prefix of the two suffixes. Row `r` is filled from row `r - 1` by
//! the three edit moves (substitute: reach + 1 on the same diagonal; insert:
//! reach carries to `d` from `d - 1`; delete: reach + 1 from `d + 1`),
//! clamped to the band `|d| <= k` and to the grid, then slid. The answer is
//! the first `r` with `F(r, 0) >= n`; `TooFar` if no `r <= k` reaches the
//! end. Prefix lengths come from either the exact oracle (in tests) or the
//! private tree query, which may over-extend but never consumes privacy
//! budget per call.

use crate::bitstring::PackedBitString;
use crate::error::Result;
use crate::lcp::{lcp_query, LcpBackend, QuerySide};
use crate::DyadicTree;

/// Distance estimate, or a signal that the distance exceeds the cap `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EditEstimate {
    Distance(u32),
    TooFar,
}

impl EditEstimate {
    /// `TooFar` maps to infinity so medians and error bands stay simple.
    pub fn as_f64(&self) -> f64 {
        match self {
            EditEstimate::Distance(d) => f64::from(*d),
            EditEstimate::TooFar => f64::INFINITY,
        }
    }

    pub fn is_too_far(&self) -> bool {
        matches!(self, EditEstimate::TooFar)
    }
}

const UNREACHED: i64 = -1;

/// The `(k+1) x (2k+1)` furthest-reach table.
#[derive(Clone, Debug)]
pub struct LvTable {
    k: u32,
    cells: Vec<i64>,
}

impl LvTable {
    fn new(k: u32) -> Self {
        Self {
            k,
            cells: vec![UNREACHED; (k as usize + 1) * (2 * k as usize + 1)],
        }
    }

    #[inline]
    fn idx(&self, r: u32, d: i64) -> usize {
        r as usize * (2 * self.k as usize + 1) + (d + i64::from(self.k)) as usize
    }

    /// Reach on diagonal `d` after exactly `r` edits, if reached.
    pub fn get(&self, r: u32, d: i64) -> Option<usize> {
        let v = self.cells[self.idx(r, d)];
        (v != UNREACHED).then_some(v as usize)
    }

    fn set(&mut self, r: u32, d: i64, value: usize) {
        let i = self.idx(r, d);
        self.cells[i] = value as i64;
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// All `(r, d, reach)` triples that were reached.
    pub fn reached(&self) -> impl Iterator<Item = (u32, i64, usize)> + '_ {
        let k = i64::from(self.k);
        self.cells.iter().enumerate().filter_map(move |(i, &v)| {
            (v != UNREACHED).then(|| {
                let width = (2 * k + 1) as usize;
                ((i / width) as u32, (i % width) as i64 - k, v as usize)
            })
        })
    }
}

/// Everything a single query produced: the estimate, the filled table, and
/// how many prefix queries were issued.
#[derive(Clone, Debug)]
pub struct EditOutcome {
    pub estimate: EditEstimate,
    pub table: LvTable,
    pub lcp_calls: usize,
}

/// Hard ceiling on prefix queries per edit query: three candidate extends
/// per cell of the band.
pub fn max_lcp_calls(k: u32) -> usize {
    3 * (k as usize + 1) * (2 * k as usize + 1)
}

/// Slides a reach along diagonal `d` by the prefix length of the suffixes
/// starting just past it. At the grid edge the extension is empty.
pub fn extend<F: FnMut(usize, usize) -> usize>(
    lcp: &mut F,
    n: usize,
    f_value: usize,
    d: i64,
) -> usize {
    let row = f_value;
    let col = (f_value as i64 + d) as usize;
    if row >= n || col >= n {
        return f_value;
    }
    f_value + lcp(row + 1, col + 1)
}

/// Runs the furthest-reach recurrence with an arbitrary prefix-length
/// provider (`lcp(i, j)` over 1-indexed suffix starts).
pub fn lv_run<F: FnMut(usize, usize) -> usize>(
    n: usize,
    k: u32,
    mut lcp: F,
) -> (EditEstimate, LvTable, usize) {
    let mut table = LvTable::new(k);
    let mut calls = 0usize;
    let mut counted = |i: usize, j: usize, calls: &mut usize| {
        *calls += 1;
        lcp(i, j)
    };

    let origin = extend(&mut |i, j| counted(i, j, &mut calls), n, 0, 0).min(n);
    table.set(0, 0, origin);
    if origin >= n {
        return (EditEstimate::Distance(0), table, calls);
    }

    let kk = i64::from(k);
    for r in 1..=k {
        for d in -kk..=kk {
            let mut cand = UNREACHED;
            if let Some(f) = table.get(r - 1, d) {
                cand = cand.max(f as i64 + 1); // substitution
            }
            if d - 1 >= -kk {
                if let Some(f) = table.get(r - 1, d - 1) {
                    cand = cand.max(f as i64); // insertion into the query
                }
            }
            if d + 1 <= kk {
                if let Some(f) = table.get(r - 1, d + 1) {
                    cand = cand.max(f as i64 + 1); // deletion from the base
                }
            }
            if cand == UNREACHED {
                continue;
            }
            // keep the reach on the grid: row <= n and col = row + d <= n
            let hi = (n as i64).min(n as i64 - d);
            let cand = cand.min(hi) as usize;
            let slid = extend(&mut |i, j| counted(i, j, &mut calls), n, cand, d);
            debug_assert!(slid as i64 <= hi);
            table.set(r, d, slid.min(hi as usize));
        }
        if table.get(r, 0).is_some_and(|f| f >= n) {
            return (EditEstimate::Distance(r), table, calls);
        }
    }
    (EditEstimate::TooFar, table, calls)
}

/// Edit distance query against a prepared query side.
pub fn edit_query_prepared(
    tree: &DyadicTree,
    qs: &QuerySide,
    backend: LcpBackend,
) -> Result<EditOutcome> {
    let n = tree.true_len();
    if qs.true_len() != n {
        return Err(crate::error::Error::LengthMismatch {
            left: qs.true_len(),
            right: n,
        });
    }
    let mut failure: Option<crate::error::Error> = None;
    let (estimate, table, lcp_calls) = lv_run(n, tree.k(), |i, j| {
        if failure.is_some() {
            return 0;
        }
        match lcp_query(tree, qs, i, j, backend) {
            Ok(r) => r.w_tilde,
            Err(e) => {
                failure = Some(e);
                0
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(EditOutcome {
        estimate,
        table,
        lcp_calls,
    })
}

/// Convenience wrapper: prepares the query side and runs the query.
pub fn edit_query(
    tree: &DyadicTree,
    b: &PackedBitString,
    backend: LcpBackend,
) -> Result<EditEstimate> {
    let qs = QuerySide::new(b, tree.k(), *tree.seed())?;
    Ok(edit_query_prepared(tree, &qs, backend)?.estimate)
}
