//! The private Hamming distance structure: encode, one-shot randomized
//! response bit flipping, and sketch-based query.
//!
//! `encode` folds every (position, bit) pair of the input into an
//! `M1 x M2 x M3` parity tensor through the public hash family. At
//! construction time each tensor cell is inverted independently with
//! probability `1 / (1 + e^{eps / (2 M1)})`; only the noised tensor is
//! retained, so the released object can be queried any number of times
//! without further privacy cost. A query encodes its own string with the
//! same public seed (never flipped) and recovers the distance as
//! `0.5 * sum_j max_i (mismatched cells in row (i, j))`.

use rand::Rng;

use crate::bitstring::PackedBitString;
use crate::error::{Error, Result};
use crate::hashing::{position_input, HashFamily};

#[inline]
fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Dimensions, privacy budget and public seed governing one sketch family.
#[derive(Clone, Debug, PartialEq)]
pub struct SketchParams {
    pub m1: u32,
    pub m2: u32,
    pub m3: u32,
    pub eps: f64,
    pub flip_prob: f64,
    pub k: u32,
    pub n: usize,
    pub seed: [u8; 32],
}

impl SketchParams {
    /// The default dimensioning for a distance cap `k`: `M1 = 10 L`,
    /// `M2 = 2k`, `M3 = 400 L^2` with `L = max(ceil(log2 k), 1)`.
    pub fn derive(k: u32, eps: f64, n: usize, seed: [u8; 32]) -> Result<Self> {
        if k == 0 || k as usize > n {
            return Err(Error::KExceedsN { k, n });
        }
        let l = ceil_log2(u64::from(k)).max(1);
        Self::with_dims(10 * l, 2 * k, 400 * l * l, eps, k, n, seed)
    }

    /// Explicit dimensions; used by the interval tree which runs the same
    /// mechanism at `M2 = 1`.
    pub fn with_dims(
        m1: u32,
        m2: u32,
        m3: u32,
        eps: f64,
        k: u32,
        n: usize,
        seed: [u8; 32],
    ) -> Result<Self> {
        if m1 == 0 || m2 == 0 || m3 == 0 {
            return Err(Error::InvalidDimensions { m1, m2, m3 });
        }
        if eps.is_nan() || eps <= 0.0 {
            return Err(Error::InvalidEpsilon(eps));
        }
        Ok(Self {
            m1,
            m2,
            m3,
            eps,
            flip_prob: Self::flip_probability(eps, m1),
            k,
            n,
            seed,
        })
    }

    /// `1 / (1 + e^{eps / (2 m1)})`; zero when `eps` is infinite.
    pub fn flip_probability(eps: f64, m1: u32) -> f64 {
        if eps.is_infinite() {
            0.0
        } else {
            1.0 / (1.0 + (eps / (2.0 * f64::from(m1))).exp())
        }
    }

    pub fn volume(&self) -> usize {
        self.m1 as usize * self.m2 as usize * self.m3 as usize
    }

    /// True when two parameter sets produce comparable sketches: identical
    /// dimensions and public seed. (`n` and `eps` may differ; interval
    /// sketches combine tensors built over different substring lengths.)
    pub fn same_family(&self, other: &Self) -> bool {
        self.m1 == other.m1 && self.m2 == other.m2 && self.m3 == other.m3 && self.seed == other.seed
    }

    pub(crate) fn family(&self) -> HashFamily {
        HashFamily::new(&self.seed, 2 * self.n as u64, self.m1, self.m2, self.m3)
    }
}

/// The `M1 x M2 x M3` parity tensor, packed LSB-first with the `c` axis
/// fastest: cell `(i, j, c)` (all 1-indexed) sits at bit
/// `((i-1) * M2 + (j-1)) * M3 + (c-1)`.
#[derive(Clone)]
pub struct HammingSketch {
    params: SketchParams,
    words: Vec<u64>,
}

impl PartialEq for HammingSketch {
    /// Two sketches are equal when they come from the same family and set
    /// the same cells. (`n` and `eps` are excluded: an interval sketch
    /// XOR-ed together from nodes of different lengths has no single `n`.)
    fn eq(&self, other: &Self) -> bool {
        self.params.same_family(&other.params) && self.words == other.words
    }
}

impl std::fmt::Debug for HammingSketch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "HammingSketch({}x{}x{}, {} set)",
            self.params.m1,
            self.params.m2,
            self.params.m3,
            self.count_ones()
        )
    }
}

fn xor_popcount_range(a: &[u64], b: &[u64], start: usize, len: usize) -> u32 {
    let mut count = 0;
    let mut pos = start;
    let end = start + len;
    while pos < end {
        let w = pos / 64;
        let off = pos % 64;
        let take = (64 - off).min(end - pos);
        let mask = if take == 64 {
            u64::MAX
        } else {
            ((1u64 << take) - 1) << off
        };
        count += ((a[w] ^ b[w]) & mask).count_ones();
        pos += take;
    }
    count
}

impl HammingSketch {
    /// Encodes a string: for every position `p` and repetition `i`, toggles
    /// the cell `(i, h(x), g(x, i))` where `x = 2(p-1) + bit(p)`.
    pub fn encode(a: &PackedBitString, params: &SketchParams) -> Result<Self> {
        Self::encode_at(a, params, 1)
    }

    /// Encodes a substring that conceptually starts at global position
    /// `origin` of a larger string: the hash input for local position `p`
    /// is the code of global position `origin + p - 1`. Interval sketches
    /// are XOR-combined across segments, and global codes keep toggles from
    /// different segments from cancelling each other.
    pub fn encode_at(a: &PackedBitString, params: &SketchParams, origin: usize) -> Result<Self> {
        if a.len() != params.n {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: params.n,
            });
        }
        assert!(origin >= 1, "origin is a 1-indexed global position");
        let fam = params.family();
        let mut sketch = Self {
            params: params.clone(),
            words: vec![0u64; params.volume().div_ceil(64)],
        };
        let m2 = params.m2 as usize;
        let m3 = params.m3 as usize;
        for p in 1..=params.n {
            let x = position_input(origin + p - 1, a.get(p));
            let j = fam.h_unchecked(x) as usize;
            for i in 1..=params.m1 {
                let c = fam.g_unchecked(x, i) as usize;
                let cell = ((i as usize - 1) * m2 + (j - 1)) * m3 + (c - 1);
                sketch.toggle(cell);
            }
        }
        Ok(sketch)
    }

    #[inline]
    fn toggle(&mut self, cell: usize) {
        self.words[cell / 64] ^= 1u64 << (cell % 64);
    }

    /// Inverts each cell independently with probability `flip_prob`.
    ///
    /// Sampling walks geometric gaps between flips, which matches the
    /// per-cell Bernoulli process exactly while costing time proportional
    /// to the number of flips rather than the tensor volume.
    pub fn flipped<R: Rng>(&self, rng: &mut R) -> Self {
        let q = self.params.flip_prob;
        let mut out = self.clone();
        if q <= 0.0 {
            return out;
        }
        let volume = self.params.volume();
        let ln_keep = (1.0 - q).ln();
        let mut pos = 0usize;
        loop {
            let u: f64 = rng.gen();
            let skip = ((1.0 - u).ln() / ln_keep).floor();
            if !skip.is_finite() || pos as f64 + skip >= volume as f64 {
                break;
            }
            pos += skip as usize;
            out.toggle(pos);
            pos += 1;
            if pos >= volume {
                break;
            }
        }
        out
    }

    /// `0.5 * sum_j max_i sum_c |self - other|`, the sketch distance.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_family(other)?;
        let m1 = self.params.m1 as usize;
        let m2 = self.params.m2 as usize;
        let m3 = self.params.m3 as usize;
        let mut total = 0u64;
        for j in 0..m2 {
            let mut best = 0u32;
            for i in 0..m1 {
                let row = (i * m2 + j) * m3;
                let mismatches = xor_popcount_range(&self.words, &other.words, row, m3);
                best = best.max(mismatches);
            }
            total += u64::from(best);
        }
        Ok(0.5 * total as f64)
    }

    /// Number of cells where the two tensors differ.
    pub fn diff_cells(&self, other: &Self) -> Result<u64> {
        self.check_family(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(x, y)| u64::from((x ^ y).count_ones()))
            .sum())
    }

    /// Cellwise XOR; the combining step for interval sketches.
    pub fn xor_with(&self, other: &Self) -> Result<Self> {
        self.check_family(other)?;
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
        Ok(out)
    }

    fn check_family(&self, other: &Self) -> Result<()> {
        if !self.params.same_family(&other.params) {
            return Err(Error::ParamMismatch {
                detail: format!(
                    "{}x{}x{} vs {}x{}x{} (or differing seeds)",
                    self.params.m1,
                    self.params.m2,
                    self.params.m3,
                    other.params.m1,
                    other.params.m2,
                    other.params.m3
                ),
            });
        }
        Ok(())
    }

    pub fn params(&self) -> &SketchParams {
        &self.params
    }

    pub fn volume(&self) -> usize {
        self.params.volume()
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Cell accessor, all axes 1-indexed.
    pub fn cell(&self, i: u32, j: u32, c: u32) -> bool {
        let idx = ((i as usize - 1) * self.params.m2 as usize + (j as usize - 1))
            * self.params.m3 as usize
            + (c as usize - 1);
        (self.words[idx / 64] >> (idx % 64)) & 1 == 1
    }

    pub(crate) fn raw_words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_raw(params: SketchParams, words: Vec<u64>) -> Result<Self> {
        let expect = params.volume().div_ceil(64);
        if words.len() != expect {
            return Err(Error::VolumeMismatch {
                detail: format!("{} words for volume {}", words.len(), params.volume()),
            });
        }
        Ok(Self { params, words })
    }
}

/// Audit hook: a deliberately broken encoder that toggles `1 + extra` cells
/// per repetition instead of one. Exists so negative controls can verify
/// that the sensitivity audit actually rejects a bad encoder.
#[doc(hidden)]
pub fn encode_with_fault(
    a: &PackedBitString,
    params: &SketchParams,
    extra: u32,
) -> Result<HammingSketch> {
    let mut sketch = HammingSketch::encode(a, params)?;
    let fam = params.family();
    let m2 = params.m2 as usize;
    let m3 = params.m3 as usize;
    for p in 1..=params.n {
        let x = position_input(p, a.get(p));
        let j = fam.h_unchecked(x) as usize;
        for i in 1..=params.m1 {
            let c = fam.g_unchecked(x, i) as usize;
            for e in 1..=extra as usize {
                let cell = ((i as usize - 1) * m2 + (j - 1)) * m3 + ((c - 1 + e) % m3);
                sketch.toggle(cell);
            }
        }
    }
    Ok(sketch)
}

/// The released object: a noised sketch plus its parameters. Immutable after
/// construction; noise is applied exactly once and the raw sketch is never
/// retained.
#[derive(Clone, Debug)]
pub struct DpHammingStructure {
    noised: HammingSketch,
}

impl DpHammingStructure {
    pub fn init<R: Rng>(
        a: &PackedBitString,
        k: u32,
        eps: f64,
        seed: [u8; 32],
        rng: &mut R,
    ) -> Result<Self> {
        let params = SketchParams::derive(k, eps, a.len(), seed)?;
        let clean = HammingSketch::encode(a, &params)?;
        Ok(Self {
            noised: clean.flipped(rng),
        })
    }

    /// Distance estimate for `b`; the query-side sketch is never flipped.
    pub fn query(&self, b: &PackedBitString) -> Result<f64> {
        let encoded = HammingSketch::encode(b, self.noised.params())?;
        self.noised.distance(&encoded)
    }

    pub fn params(&self) -> &SketchParams {
        self.noised.params()
    }

    pub fn sketch(&self) -> &HammingSketch {
        &self.noised
    }

    pub(crate) fn from_sketch(noised: HammingSketch) -> Self {
        Self { noised }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn seed(tag: u8) -> [u8; 32] {
        let mut s = [0u8; 32];
        s[0] = tag;
        s
    }

    fn random_string(n: usize, rng: &mut ChaCha20Rng) -> PackedBitString {
        oracle::random_string(n, rng)
    }

    #[test]
    fn derive_matches_dimension_formulas() {
        let p = SketchParams::derive(16, f64::INFINITY, 100, seed(1)).unwrap();
        assert_eq!((p.m1, p.m2, p.m3), (40, 32, 6400));
        assert_eq!(p.flip_prob, 0.0);

        // degenerate log at k = 1 clamps to L = 1
        let p1 = SketchParams::derive(1, f64::INFINITY, 4, seed(1)).unwrap();
        assert_eq!((p1.m1, p1.m2, p1.m3), (10, 2, 400));
    }

    #[test]
    fn flip_probability_algebra() {
        let p = SketchParams::derive(4, 1.0, 16, seed(1)).unwrap();
        let eps = 2.0 * f64::from(p.m1) * 3.0f64.ln();
        let q = SketchParams::flip_probability(eps, p.m1);
        assert!((q - 0.25).abs() < 1e-12);
    }

    #[test]
    fn derive_rejects_k_above_n() {
        assert!(matches!(
            SketchParams::derive(8, 1.0, 4, seed(1)),
            Err(Error::KExceedsN { k: 8, n: 4 })
        ));
    }

    #[test]
    fn rejects_nonpositive_eps() {
        assert!(matches!(
            SketchParams::derive(4, 0.0, 16, seed(1)),
            Err(Error::InvalidEpsilon(_))
        ));
        assert!(matches!(
            SketchParams::derive(4, -1.0, 16, seed(1)),
            Err(Error::InvalidEpsilon(_))
        ));
    }

    #[test]
    fn encode_single_position_sets_one_cell_per_slice() {
        let a = PackedBitString::parse("0").unwrap();
        let params = SketchParams::derive(1, f64::INFINITY, 1, seed(2)).unwrap();
        let s = HammingSketch::encode(&a, &params).unwrap();
        assert_eq!(s.count_ones(), u64::from(params.m1));
        for i in 1..=params.m1 {
            let mut per_slice = 0;
            for j in 1..=params.m2 {
                for c in 1..=params.m3 {
                    if s.cell(i, j, c) {
                        per_slice += 1;
                    }
                }
            }
            assert_eq!(per_slice, 1, "slice i={i}");
        }
    }

    #[test]
    fn encode_is_deterministic() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let a = random_string(64, &mut rng);
        let params = SketchParams::derive(8, f64::INFINITY, 64, seed(3)).unwrap();
        let s1 = HammingSketch::encode(&a, &params).unwrap();
        let s2 = HammingSketch::encode(&a, &params).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn neighbor_encodings_differ_in_few_cells_exhaustive() {
        // every length-4 string against every single-position neighbor
        for tag in 0..3u8 {
            let params = SketchParams::derive(2, f64::INFINITY, 4, seed(10 + tag)).unwrap();
            for value in 0..16u32 {
                let text: String = (0..4)
                    .map(|b| if value >> b & 1 == 1 { '1' } else { '0' })
                    .collect();
                let a = PackedBitString::parse(&text).unwrap();
                let ea = HammingSketch::encode(&a, &params).unwrap();
                for flip_pos in 0..4 {
                    let mut bits: Vec<bool> = (1..=4).map(|p| a.get(p)).collect();
                    bits[flip_pos] = !bits[flip_pos];
                    let b = PackedBitString::from_bits(&bits).unwrap();
                    let eb = HammingSketch::encode(&b, &params).unwrap();
                    assert!(ea.diff_cells(&eb).unwrap() <= 2 * u64::from(params.m1));
                }
            }
        }
    }

    #[test]
    fn flip_zero_probability_is_identity() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let a = random_string(32, &mut rng);
        let params = SketchParams::derive(4, f64::INFINITY, 32, seed(4)).unwrap();
        let s = HammingSketch::encode(&a, &params).unwrap();
        assert_eq!(s.flipped(&mut rng), s);
    }

    #[test]
    fn flip_count_concentrates() {
        // q = 1/4 via eps = 2 m1 ln 3; count within 5 sigma over 100 seeds
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let a = random_string(64, &mut rng);
        let params0 = SketchParams::derive(4, 1.0, 64, seed(5)).unwrap();
        let eps = 2.0 * f64::from(params0.m1) * 3.0f64.ln();
        let params = SketchParams::derive(4, eps, 64, seed(5)).unwrap();
        assert!((params.flip_prob - 0.25).abs() < 1e-12);
        let clean = HammingSketch::encode(&a, &params).unwrap();
        let v = params.volume() as f64;
        let sigma = (v * 0.25 * 0.75).sqrt();
        for s in 0..100u64 {
            let mut noise_rng = ChaCha20Rng::seed_from_u64(1000 + s);
            let noised = clean.flipped(&mut noise_rng);
            let flips = clean.diff_cells(&noised).unwrap() as f64;
            assert!(
                (flips - v * 0.25).abs() <= 5.0 * sigma,
                "seed {s}: {flips} flips, expect {}",
                v * 0.25
            );
        }
    }

    #[test]
    fn independent_flips_differ() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let a = random_string(64, &mut rng);
        let params = SketchParams::derive(4, 8.0, 64, seed(6)).unwrap();
        let clean = HammingSketch::encode(&a, &params).unwrap();
        let mut r1 = ChaCha20Rng::seed_from_u64(1);
        let mut r2 = ChaCha20Rng::seed_from_u64(2);
        assert_ne!(clean.flipped(&mut r1), clean.flipped(&mut r2));
    }

    #[test]
    fn distance_identity_and_single_cell() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let a = random_string(40, &mut rng);
        let params = SketchParams::derive(4, f64::INFINITY, 40, seed(7)).unwrap();
        let s = HammingSketch::encode(&a, &params).unwrap();
        assert_eq!(s.distance(&s).unwrap(), 0.0);

        let mut t = s.clone();
        t.toggle(17);
        assert_eq!(s.distance(&t).unwrap(), 0.5);
    }

    #[test]
    fn distance_rejects_family_mismatch() {
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let a = random_string(40, &mut rng);
        let p1 = SketchParams::derive(4, f64::INFINITY, 40, seed(8)).unwrap();
        let p2 = SketchParams::derive(4, f64::INFINITY, 40, seed(9)).unwrap();
        let s1 = HammingSketch::encode(&a, &p1).unwrap();
        let s2 = HammingSketch::encode(&a, &p2).unwrap();
        assert!(matches!(
            s1.distance(&s2),
            Err(Error::ParamMismatch { .. })
        ));
    }

    #[test]
    fn noiseless_sketch_recovers_planted_distance() {
        let k = 8;
        let n = 256;
        let mut hits = 0;
        for s in 0..100u64 {
            let mut rng = ChaCha20Rng::seed_from_u64(40_000 + s);
            let (a, b) = oracle::plant_hamming_pair(n, 5, &mut rng).unwrap();
            let params = SketchParams::derive(k, f64::INFINITY, n, seed(s as u8)).unwrap();
            let sa = HammingSketch::encode(&a, &params).unwrap();
            let sb = HammingSketch::encode(&b, &params).unwrap();
            if sa.distance(&sb).unwrap() == 5.0 {
                hits += 1;
            }
        }
        assert!(hits >= 95, "only {hits}/100 exact");
    }

    #[test]
    fn init_without_noise_equals_encode() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let a = random_string(64, &mut rng);
        let st = DpHammingStructure::init(&a, 4, f64::INFINITY, seed(10), &mut rng).unwrap();
        let params = SketchParams::derive(4, f64::INFINITY, 64, seed(10)).unwrap();
        assert_eq!(*st.sketch(), HammingSketch::encode(&a, &params).unwrap());
    }

    #[test]
    fn init_fresh_rng_fresh_noise() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let a = random_string(64, &mut rng);
        let mut r1 = ChaCha20Rng::seed_from_u64(100);
        let mut r2 = ChaCha20Rng::seed_from_u64(200);
        let s1 = DpHammingStructure::init(&a, 4, 16.0, seed(11), &mut r1).unwrap();
        let s2 = DpHammingStructure::init(&a, 4, 16.0, seed(11), &mut r2).unwrap();
        assert_ne!(s1.sketch(), s2.sketch());
    }

    #[test]
    fn query_identity_and_planted() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let a = random_string(128, &mut rng);
        let st = DpHammingStructure::init(&a, 8, f64::INFINITY, seed(12), &mut rng).unwrap();
        assert_eq!(st.query(&a).unwrap(), 0.0);

        let mut hits = 0;
        for s in 0..200u64 {
            let mut trial = ChaCha20Rng::seed_from_u64(50_000 + s);
            let (a, b) = oracle::plant_hamming_pair(128, 3, &mut trial).unwrap();
            let mut sb = [0u8; 32];
            trial.fill(&mut sb);
            let st = DpHammingStructure::init(&a, 8, f64::INFINITY, sb, &mut trial).unwrap();
            if st.query(&b).unwrap() == 3.0 {
                hits += 1;
            }
        }
        assert!(hits as f64 / 200.0 >= 0.95, "{hits}/200 exact");
    }

    #[test]
    fn query_is_pure() {
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        let a = random_string(64, &mut rng);
        let b = random_string(64, &mut rng);
        let st = DpHammingStructure::init(&a, 4, 8.0, seed(13), &mut rng).unwrap();
        assert_eq!(st.query(&b).unwrap(), st.query(&b).unwrap());
    }

    #[test]
    fn noise_stays_inside_expectation_band() {
        // mean |noised - clean| over 100 draws bounded by 4 * M1 M2 M3 q,
        // and the mean never drops below clean - 4 * M1 M2 M3 q
        let n = 64;
        let mut rng = ChaCha20Rng::seed_from_u64(15);
        let (a, b) = oracle::plant_hamming_pair(n, 2, &mut rng).unwrap();
        let params0 = SketchParams::derive(4, 1.0, n, seed(14)).unwrap();
        let q = 0.05f64;
        let eps = 2.0 * f64::from(params0.m1) * ((1.0 - q) / q).ln();
        let params = SketchParams::derive(4, eps, n, seed(14)).unwrap();
        let clean = HammingSketch::encode(&a, &params).unwrap();
        let query_side = HammingSketch::encode(&b, &params).unwrap();
        let clean_dist = clean.distance(&query_side).unwrap();
        let budget = 4.0 * params.volume() as f64 * params.flip_prob;
        let mut sum_abs = 0.0;
        let mut sum = 0.0;
        for s in 0..100u64 {
            let mut noise_rng = ChaCha20Rng::seed_from_u64(60_000 + s);
            let noised = clean.flipped(&mut noise_rng);
            let d = noised.distance(&query_side).unwrap();
            sum_abs += (d - clean_dist).abs();
            sum += d;
        }
        assert!(sum_abs / 100.0 <= budget);
        assert!(sum / 100.0 >= clean_dist - budget);
    }

    #[test]
    fn faulty_encode_violates_sensitivity() {
        let mut rng = ChaCha20Rng::seed_from_u64(16);
        let params = SketchParams::derive(8, f64::INFINITY, 64, seed(15)).unwrap();
        let a = random_string(64, &mut rng);
        let mut bits: Vec<bool> = (1..=64).map(|p| a.get(p)).collect();
        bits[10] = !bits[10];
        let b = PackedBitString::from_bits(&bits).unwrap();
        let ea = encode_with_fault(&a, &params, 2).unwrap();
        let eb = encode_with_fault(&b, &params, 2).unwrap();
        assert!(ea.diff_cells(&eb).unwrap() > 2 * u64::from(params.m1));
    }
}
