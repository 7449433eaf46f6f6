//! Multi-string database with median-of-copies amplification and the
//! versioned binary store format.
//!
//! Each database string gets `copies` independent structures, each with a
//! fresh public seed and fresh noise; a query takes the per-string median
//! (lower of the two middle values for even counts). Releasing `copies`
//! independent structures costs `copies * eps_per_copy` under sequential
//! composition, and the store reports exactly that.
//!
//! Store layout (little-endian throughout):
//! magic `DPSD` | version u16 | mode u8 | m u32 | n u32 | k u32 |
//! eps_per_copy f64 | copies u16 | 32-byte public seed per copy | then per
//! string, per copy: one sketch block per structure (hamming) or per tree
//! node in level-major left-to-right order (edit). A sketch block is
//! m1 u32 | m2 u32 | m3 u32 followed by the tensor bits packed LSB-first,
//! `(i, j, c)` order with `c` fastest, padded to a byte boundary.

use std::io::{Read, Write};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::bitstring::PackedBitString;
use crate::edit::edit_query_prepared;
use crate::error::{Error, Result};
use crate::hamming::{DpHammingStructure, HammingSketch, SketchParams};
use crate::lcp::{DyadicTree, LcpBackend, QuerySide};

const MAGIC: [u8; 4] = *b"DPSD";
const VERSION: u16 = 1;
const MAX_VOLUME: u64 = 1 << 33;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StoreMode {
    Hamming,
    Edit,
}

impl StoreMode {
    fn byte(self) -> u8 {
        match self {
            StoreMode::Hamming => 0,
            StoreMode::Edit => 1,
        }
    }

    fn from_byte(b: u8) -> Result<Self> {
        match b {
            0 => Ok(StoreMode::Hamming),
            1 => Ok(StoreMode::Edit),
            other => Err(Error::InvalidMode(other)),
        }
    }
}

/// Number of independent copies used to push the per-query failure
/// probability below `beta` for `m` strings.
pub fn copies_for(m: usize, beta: f64) -> usize {
    if m == 0 {
        return 1;
    }
    let c = (18.0 * (m as f64 / beta).ln()).ceil();
    (c as usize).max(1)
}

/// The serialized multi-string database.
pub struct SketchStore {
    mode: StoreMode,
    m: usize,
    n: usize,
    k: u32,
    eps_per_copy: f64,
    copies: usize,
    seeds: Vec<[u8; 32]>,
    hamming: Vec<Vec<DpHammingStructure>>, // [string][copy]
    trees: Vec<Vec<DyadicTree>>,           // [string][copy]
}

impl SketchStore {
    /// Builds the full `m x copies` grid. Every cell draws noise from a
    /// private stream derived off a master seed by counter, so the result
    /// is reproducible regardless of worker scheduling.
    pub fn build<R: RngCore>(
        strings: &[PackedBitString],
        k: u32,
        eps_per_copy: f64,
        beta: f64,
        mode: StoreMode,
        rng: &mut R,
    ) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidBeta(beta));
        }
        Self::build_with_copies(strings, k, eps_per_copy, copies_for(strings.len(), beta), mode, rng)
    }

    /// Same as [`SketchStore::build`] with an explicit copy count; used by
    /// amplification experiments and benchmarks.
    pub fn build_with_copies<R: RngCore>(
        strings: &[PackedBitString],
        k: u32,
        eps_per_copy: f64,
        copies: usize,
        mode: StoreMode,
        rng: &mut R,
    ) -> Result<Self> {
        let copies = copies.max(1);
        if copies > usize::from(u16::MAX) {
            return Err(Error::ParamMismatch {
                detail: format!("copy count {copies} exceeds the format limit"),
            });
        }
        let m = strings.len();
        let n = strings.first().map_or(0, PackedBitString::len);
        for (idx, s) in strings.iter().enumerate() {
            if s.len() != n {
                return Err(Error::RaggedLength {
                    line: idx + 1,
                    got: s.len(),
                    expected: n,
                });
            }
        }
        if m > 0 && (k == 0 || k as usize > n) {
            return Err(Error::KExceedsN { k, n });
        }
        if eps_per_copy.is_nan() || eps_per_copy <= 0.0 {
            return Err(Error::InvalidEpsilon(eps_per_copy));
        }

        let mut master = [0u8; 32];
        rng.fill_bytes(&mut master);
        let mut seeder = ChaCha20Rng::from_seed(master);
        seeder.set_stream(0);
        let seeds: Vec<[u8; 32]> = (0..copies)
            .map(|_| {
                let mut s = [0u8; 32];
                seeder.fill_bytes(&mut s);
                s
            })
            .collect();

        let cell_rng = |si: usize, ci: usize| {
            let mut r = ChaCha20Rng::from_seed(master);
            r.set_stream(1 + (si * copies + ci) as u64);
            r
        };

        let mut hamming = Vec::new();
        let mut trees = Vec::new();
        match mode {
            StoreMode::Hamming => {
                hamming = strings
                    .par_iter()
                    .enumerate()
                    .map(|(si, a)| {
                        (0..copies)
                            .map(|ci| {
                                let mut r = cell_rng(si, ci);
                                DpHammingStructure::init(a, k, eps_per_copy, seeds[ci], &mut r)
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
            }
            StoreMode::Edit => {
                trees = strings
                    .par_iter()
                    .enumerate()
                    .map(|(si, a)| {
                        (0..copies)
                            .map(|ci| {
                                let mut r = cell_rng(si, ci);
                                DyadicTree::build(a, k, eps_per_copy, seeds[ci], &mut r)
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
            }
        }
        Ok(Self {
            mode,
            m,
            n,
            k,
            eps_per_copy,
            copies,
            seeds,
            hamming,
            trees,
        })
    }

    /// Per-string distance estimates for `b`: median across copies.
    /// In edit mode `TooFar` copies enter the median as infinity.
    pub fn query_all(&self, b: &PackedBitString) -> Result<Vec<f64>> {
        self.query_all_with(b, LcpBackend::WindowEncode)
    }

    pub fn query_all_with(&self, b: &PackedBitString, backend: LcpBackend) -> Result<Vec<f64>> {
        if self.m == 0 {
            return Ok(Vec::new());
        }
        if b.len() != self.n {
            return Err(Error::LengthMismatch {
                left: b.len(),
                right: self.n,
            });
        }
        match self.mode {
            StoreMode::Hamming => {
                // one query encode per copy, shared across all strings
                let encoded: Vec<HammingSketch> = (0..self.copies)
                    .map(|ci| {
                        HammingSketch::encode(b, self.hamming[0][ci].params())
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.hamming
                    .par_iter()
                    .map(|row| {
                        let mut estimates = row
                            .iter()
                            .zip(&encoded)
                            .map(|(st, enc)| st.sketch().distance(enc))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(median_lower(&mut estimates))
                    })
                    .collect()
            }
            StoreMode::Edit => {
                let sides: Vec<QuerySide> = (0..self.copies)
                    .map(|ci| QuerySide::new(b, self.k, self.seeds[ci]))
                    .collect::<Result<Vec<_>>>()?;
                self.trees
                    .par_iter()
                    .map(|row| {
                        let mut estimates = row
                            .iter()
                            .zip(&sides)
                            .map(|(tree, qs)| {
                                Ok(edit_query_prepared(tree, qs, backend)?.estimate.as_f64())
                            })
                            .collect::<Result<Vec<f64>>>()?;
                        Ok(median_lower(&mut estimates))
                    })
                    .collect()
            }
        }
    }

    pub fn mode(&self) -> StoreMode {
        self.mode
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn eps_per_copy(&self) -> f64 {
        self.eps_per_copy
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    /// Total privacy cost of the release: `copies * eps_per_copy` under
    /// sequential composition. Never reports less.
    pub fn total_eps(&self) -> f64 {
        self.copies as f64 * self.eps_per_copy
    }

    pub fn seeds(&self) -> &[[u8; 32]] {
        &self.seeds
    }

    /// Direct access to one structure; tests compare the median path
    /// against single-structure queries.
    pub fn hamming_structure(&self, string: usize, copy: usize) -> &DpHammingStructure {
        &self.hamming[string][copy]
    }

    pub fn tree(&self, string: usize, copy: usize) -> &DyadicTree {
        &self.trees[string][copy]
    }

    // ---- serialization ----

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(&MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&[self.mode.byte()])?;
        w.write_all(&(self.m as u32).to_le_bytes())?;
        w.write_all(&(self.n as u32).to_le_bytes())?;
        w.write_all(&self.k.to_le_bytes())?;
        w.write_all(&self.eps_per_copy.to_le_bytes())?;
        w.write_all(&(self.copies as u16).to_le_bytes())?;
        for seed in &self.seeds {
            w.write_all(seed)?;
        }
        match self.mode {
            StoreMode::Hamming => {
                for row in &self.hamming {
                    for st in row {
                        write_sketch(w, st.sketch())?;
                    }
                }
            }
            StoreMode::Edit => {
                for row in &self.trees {
                    for tree in row {
                        for node in tree.nodes() {
                            write_sketch(w, node)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let mut magic = [0u8; 4];
        read_exact(r, &mut magic, "magic")?;
        if magic != MAGIC {
            return Err(Error::BadMagic(magic));
        }
        let version = read_u16(r, "version")?;
        if version != VERSION {
            return Err(Error::VersionMismatch(version));
        }
        let mode = StoreMode::from_byte(read_u8(r, "mode")?)?;
        let m = read_u32(r, "string count")? as usize;
        let n = read_u32(r, "string length")? as usize;
        let k = read_u32(r, "distance cap")?;
        let eps_per_copy = f64::from_le_bytes(read_array::<8, _>(r, "epsilon")?);
        let copies = usize::from(read_u16(r, "copy count")?);
        let mut seeds = Vec::with_capacity(copies);
        for _ in 0..copies {
            seeds.push(read_array::<32, _>(r, "seed")?);
        }

        let mut hamming = Vec::new();
        let mut trees = Vec::new();
        match mode {
            StoreMode::Hamming => {
                for _ in 0..m {
                    let mut row = Vec::with_capacity(copies);
                    for ci in 0..copies {
                        let sketch = read_sketch(r, |m1, m2, m3| {
                            SketchParams::with_dims(m1, m2, m3, eps_per_copy, k, n, seeds[ci])
                        })?;
                        row.push(DpHammingStructure::from_sketch(sketch));
                    }
                    hamming.push(row);
                }
            }
            StoreMode::Edit => {
                let padded = n.next_power_of_two();
                let levels = padded.trailing_zeros() as usize;
                let eps_node = eps_per_copy / (levels as f64 + 1.0);
                for _ in 0..m {
                    let mut row = Vec::with_capacity(copies);
                    for ci in 0..copies {
                        let mut nodes = Vec::with_capacity((1 << (levels + 1)) - 1);
                        for level in 0..=levels {
                            let node_len = padded >> level;
                            for _ in 0..(1usize << level) {
                                nodes.push(read_sketch(r, |m1, m2, m3| {
                                    SketchParams::with_dims(
                                        m1, m2, m3, eps_node, k, node_len, seeds[ci],
                                    )
                                })?);
                            }
                        }
                        row.push(DyadicTree::from_parts(n, k, eps_per_copy, seeds[ci], nodes)?);
                    }
                    trees.push(row);
                }
            }
        }
        Ok(Self {
            mode,
            m,
            n,
            k,
            eps_per_copy,
            copies,
            seeds,
            hamming,
            trees,
        })
    }
}

/// Median with the lower of the two middle values on even counts, so the
/// edit path never rounds an estimate upward.
pub(crate) fn median_lower(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("no NaN estimates"));
    values[(values.len() - 1) / 2]
}

fn write_sketch<W: Write>(w: &mut W, sketch: &HammingSketch) -> Result<()> {
    let p = sketch.params();
    w.write_all(&p.m1.to_le_bytes())?;
    w.write_all(&p.m2.to_le_bytes())?;
    w.write_all(&p.m3.to_le_bytes())?;
    let volume = p.volume();
    let nbytes = volume.div_ceil(8);
    let mut bytes = Vec::with_capacity(nbytes);
    for word in sketch.raw_words() {
        bytes.extend_from_slice(&word.to_le_bytes());
    }
    bytes.truncate(nbytes);
    w.write_all(&bytes)?;
    Ok(())
}

fn read_sketch<R: Read>(
    r: &mut R,
    make_params: impl FnOnce(u32, u32, u32) -> Result<SketchParams>,
) -> Result<HammingSketch> {
    let m1 = read_u32(r, "sketch m1")?;
    let m2 = read_u32(r, "sketch m2")?;
    let m3 = read_u32(r, "sketch m3")?;
    let volume = u64::from(m1) * u64::from(m2) * u64::from(m3);
    if volume == 0 || volume > MAX_VOLUME {
        return Err(Error::VolumeMismatch {
            detail: format!("declared tensor {m1}x{m2}x{m3}"),
        });
    }
    let volume = volume as usize;
    let nbytes = volume.div_ceil(8);
    let mut bytes = vec![0u8; nbytes];
    read_exact(r, &mut bytes, "sketch tensor")?;
    // bits past the volume must be zero padding
    if volume % 8 != 0 {
        let tail = bytes[nbytes - 1] >> (volume % 8);
        if tail != 0 {
            return Err(Error::VolumeMismatch {
                detail: "nonzero padding bits after tensor".into(),
            });
        }
    }
    let mut words = vec![0u64; volume.div_ceil(64)];
    for (idx, chunk) in bytes.chunks(8).enumerate() {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        words[idx] = u64::from_le_bytes(buf);
    }
    let params = make_params(m1, m2, m3)?;
    HammingSketch::from_raw(params, words)
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8], context: &'static str) -> Result<()> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            Error::TruncatedStore { context }
        } else {
            Error::Io(e)
        }
    })
}

fn read_array<const N: usize, R: Read>(r: &mut R, context: &'static str) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    read_exact(r, &mut buf, context)?;
    Ok(buf)
}

fn read_u8<R: Read>(r: &mut R, context: &'static str) -> Result<u8> {
    Ok(read_array::<1, _>(r, context)?[0])
}

fn read_u16<R: Read>(r: &mut R, context: &'static str) -> Result<u16> {
    Ok(u16::from_le_bytes(read_array::<2, _>(r, context)?))
}

fn read_u32<R: Read>(r: &mut R, context: &'static str) -> Result<u32> {
    Ok(u32::from_le_bytes(read_array::<4, _>(r, context)?))
}
