//! Dyadic tree of interval sketches and the binary-search longest common
//! prefix query.
//!
//! The curator pads the string to a power-of-two length `2^L` and builds one
//! noised sketch per dyadic node, `2^{L+1} - 1` nodes in total, each over its
//! substring with node-local positions and a per-node budget `eps / (L + 1)`
//! (every position sits in exactly one node per level, so the releases
//! compose to `eps`). Any interval is the disjoint union of at most
//! `2 (L + 1)` maximal nodes; XOR-ing their tensors yields the interval
//! sketch. A prefix-length binary search compares interval sketches of the
//! two strings against a noise threshold.
//!
//! Two query backends exist. `TreeAligned` matches the query's own
//! precomputed tree node-for-node, which is only guaranteed when both
//! interval decompositions align (equal offsets). `WindowEncode` (the
//! default) re-encodes the query window against the database decomposition
//! each step, so equal substrings produce identical pre-noise sketches at
//! any shift.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bitstring::PackedBitString;
use crate::error::{Error, Result};
use crate::hamming::{HammingSketch, SketchParams};

const NODE_M2: u32 = 1;
const NODE_M3: u32 = 10;

#[inline]
fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Repetition count for tree nodes: `ceil(log2 k) + ceil(log2 log2 n) + 10`
/// over the padded length `n = 2^L`.
pub fn tree_m1(k: u32, levels: u32) -> u32 {
    ceil_log2(u64::from(k)) + ceil_log2(u64::from(levels.max(1))) + 10
}

/// Identifies a tree node: `level` 0 is the root, `index` runs left to
/// right within a level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeId {
    pub level: usize,
    pub index: usize,
}

/// Per-level, per-node sketches over the dyadic substrings of one string.
#[derive(Clone, Debug)]
pub struct DyadicTree {
    true_len: usize,
    padded_len: usize,
    levels: usize, // L; the tree has L + 1 node levels
    k: u32,
    eps: f64,
    eps_node: f64,
    m1: u32,
    seed: [u8; 32],
    nodes: Vec<HammingSketch>, // level-major, left to right
}

impl DyadicTree {
    /// Builds the noised tree. All nodes share the public `seed`; each node
    /// draws its flip noise from a private stream derived off `rng`.
    pub fn build<R: RngCore>(
        a: &PackedBitString,
        k: u32,
        eps: f64,
        seed: [u8; 32],
        rng: &mut R,
    ) -> Result<Self> {
        if k == 0 || k as usize > a.len() {
            return Err(Error::KExceedsN { k, n: a.len() });
        }
        if eps.is_nan() || eps <= 0.0 {
            return Err(Error::InvalidEpsilon(eps));
        }
        let padded = a.pad_to_pow2();
        let levels = padded.len().trailing_zeros() as usize;
        let eps_node = eps / (levels as f64 + 1.0);
        let m1 = tree_m1(k, levels as u32);
        let mut master = [0u8; 32];
        rng.fill_bytes(&mut master);
        let mut nodes = Vec::with_capacity((1usize << (levels + 1)) - 1);
        let mut flat = 0u64;
        for level in 0..=levels {
            let node_len = padded.len() >> level;
            let params = SketchParams::with_dims(m1, NODE_M2, NODE_M3, eps_node, k, node_len, seed)?;
            for index in 0..(1usize << level) {
                let sub = padded.substring(index * node_len + 1, node_len);
                let clean = HammingSketch::encode(&sub, &params)?;
                let mut node_rng = ChaCha20Rng::from_seed(master);
                node_rng.set_stream(flat + 1);
                nodes.push(clean.flipped(&mut node_rng));
                flat += 1;
            }
        }
        Ok(Self {
            true_len: a.len(),
            padded_len: padded.len(),
            levels,
            k,
            eps,
            eps_node,
            m1,
            seed,
            nodes,
        })
    }

    pub(crate) fn from_parts(
        true_len: usize,
        k: u32,
        eps: f64,
        seed: [u8; 32],
        nodes: Vec<HammingSketch>,
    ) -> Result<Self> {
        let padded_len = true_len.next_power_of_two();
        let levels = padded_len.trailing_zeros() as usize;
        let expect = (1usize << (levels + 1)) - 1;
        if nodes.len() != expect {
            return Err(Error::VolumeMismatch {
                detail: format!("{} tree nodes, expected {expect}", nodes.len()),
            });
        }
        let m1 = nodes[0].params().m1;
        for node in &nodes {
            let p = node.params();
            if p.m1 != m1 || p.m2 != NODE_M2 || p.m3 != NODE_M3 {
                return Err(Error::VolumeMismatch {
                    detail: format!("inconsistent node dimensions {}x{}x{}", p.m1, p.m2, p.m3),
                });
            }
        }
        Ok(Self {
            true_len,
            padded_len,
            levels,
            k,
            eps,
            eps_node: eps / (levels as f64 + 1.0),
            m1,
            seed,
            nodes,
        })
    }

    #[inline]
    fn flat(&self, id: NodeId) -> usize {
        ((1usize << id.level) - 1) + id.index
    }

    /// Global 1-indexed span `[start, end]` covered by a node.
    pub fn node_span(&self, id: NodeId) -> (usize, usize) {
        let len = self.padded_len >> id.level;
        (id.index * len + 1, (id.index + 1) * len)
    }

    pub fn node_sketch(&self, id: NodeId) -> &HammingSketch {
        &self.nodes[self.flat(id)]
    }

    /// The canonical decomposition of `[pl, pr]`: disjoint maximal nodes in
    /// left-to-right order, exactly tiling the interval.
    pub fn decompose(&self, pl: usize, pr: usize) -> Result<Vec<NodeId>> {
        if pl < 1 || pr < pl || pr > self.padded_len {
            return Err(Error::InvalidInterval {
                lo: pl,
                hi: pr,
                max: self.padded_len,
            });
        }
        let mut out = Vec::new();
        let mut stack = vec![NodeId { level: 0, index: 0 }];
        while let Some(id) = stack.pop() {
            let (s, e) = self.node_span(id);
            if pl <= s && e <= pr {
                out.push(id);
                continue;
            }
            if e < pl || s > pr {
                continue;
            }
            let left = NodeId {
                level: id.level + 1,
                index: 2 * id.index,
            };
            let right = NodeId {
                level: id.level + 1,
                index: 2 * id.index + 1,
            };
            // push right first so the left child is visited first
            stack.push(right);
            stack.push(left);
        }
        Ok(out)
    }

    /// XOR of the canonical nodes' sketches over `[pl, pr]`.
    pub fn interval_sketch(&self, pl: usize, pr: usize) -> Result<HammingSketch> {
        let nodes = self.decompose(pl, pr)?;
        self.interval_sketch_of(&nodes)
    }

    /// XOR of an explicit node list (callers reuse a decomposition).
    pub fn interval_sketch_of(&self, nodes: &[NodeId]) -> Result<HammingSketch> {
        let mut iter = nodes.iter();
        let first = iter.next().expect("decomposition is never empty");
        let mut acc = self.node_sketch(*first).clone();
        for id in iter {
            acc = acc.xor_with(self.node_sketch(*id))?;
        }
        Ok(acc)
    }

    pub fn true_len(&self) -> usize {
        self.true_len
    }

    pub fn padded_len(&self) -> usize {
        self.padded_len
    }

    /// `L`: the leaf level; the tree has `L + 1` levels of nodes.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn eps_node(&self) -> f64 {
        self.eps_node
    }

    pub fn m1(&self) -> u32 {
        self.m1
    }

    pub fn m3(&self) -> u32 {
        NODE_M3
    }

    pub fn seed(&self) -> &[u8; 32] {
        &self.seed
    }

    /// Flip probability actually applied to every node.
    pub fn flip_prob_node(&self) -> f64 {
        self.nodes[0].params().flip_prob
    }

    pub(crate) fn nodes(&self) -> &[HammingSketch] {
        &self.nodes
    }

    fn node_params(&self, level: usize) -> Result<SketchParams> {
        SketchParams::with_dims(
            self.m1,
            NODE_M2,
            NODE_M3,
            self.eps_node,
            self.k,
            self.padded_len >> level,
            self.seed,
        )
    }
}

/// Query-side state: the padded query string plus its own noiseless tree
/// (used by the `TreeAligned` backend). The query is client data and is
/// never flipped.
#[derive(Clone, Debug)]
pub struct QuerySide {
    padded: PackedBitString,
    true_len: usize,
    tree: DyadicTree,
}

impl QuerySide {
    pub fn new(b: &PackedBitString, k: u32, seed: [u8; 32]) -> Result<Self> {
        // eps = inf means flip probability zero; the rng is never sampled
        let mut unused = ChaCha20Rng::from_seed([0u8; 32]);
        let tree = DyadicTree::build(b, k, f64::INFINITY, seed, &mut unused)?;
        Ok(Self {
            padded: b.pad_to_pow2(),
            true_len: b.len(),
            tree,
        })
    }

    pub fn true_len(&self) -> usize {
        self.true_len
    }

    pub fn tree(&self) -> &DyadicTree {
        &self.tree
    }

    /// Encodes the query windows matching a database decomposition shifted
    /// by `shift`, then XORs them. Each node span `[s, e]` contributes the
    /// encoding of `b[s+shift ..= e+shift]` under node-local labels, so equal
    /// substrings reproduce the database's pre-noise sketch at any shift.
    pub fn window_sketch(
        &self,
        tree: &DyadicTree,
        nodes: &[NodeId],
        shift: i64,
    ) -> Result<HammingSketch> {
        let mut acc: Option<HammingSketch> = None;
        for id in nodes {
            let (s, e) = tree.node_span(*id);
            let bs = s as i64 + shift;
            let be = e as i64 + shift;
            if bs < 1 || be > self.padded.len() as i64 {
                return Err(Error::InvalidInterval {
                    lo: bs.max(0) as usize,
                    hi: be.max(0) as usize,
                    max: self.padded.len(),
                });
            }
            let len = e - s + 1;
            let params = tree.node_params(id.level)?;
            let window = self.padded.substring(bs as usize, len);
            let enc = HammingSketch::encode(&window, &params)?;
            acc = Some(match acc {
                None => enc,
                Some(prev) => prev.xor_with(&enc)?,
            });
        }
        Ok(acc.expect("decomposition is never empty"))
    }
}

/// How the query side of an interval comparison is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LcpBackend {
    /// Use the query's precomputed tree; exact only for aligned offsets.
    TreeAligned,
    /// Re-encode the query window per step; correct for arbitrary shifts.
    #[default]
    WindowEncode,
}

/// Outcome of one prefix-length binary search.
#[derive(Clone, Debug)]
pub struct LcpQueryResult {
    pub w_tilde: usize,
    pub steps: usize,
    /// Per-step sketch distances, for diagnostics.
    pub distances: Vec<f64>,
}

/// Estimated longest common prefix of `a[i..]` and `b[j..]` via binary
/// search over interval sketches.
pub fn lcp_query(
    tree: &DyadicTree,
    qs: &QuerySide,
    i: usize,
    j: usize,
    backend: LcpBackend,
) -> Result<LcpQueryResult> {
    let n = tree.true_len();
    if qs.true_len() != n {
        return Err(Error::LengthMismatch {
            left: qs.true_len(),
            right: n,
        });
    }
    if i < 1 || i > n {
        return Err(Error::PositionOutOfRange { position: i, max: n });
    }
    if j < 1 || j > n {
        return Err(Error::PositionOutOfRange { position: j, max: n });
    }
    if qs.tree().seed() != tree.seed() || qs.tree().m1() != tree.m1() {
        return Err(Error::ParamMismatch {
            detail: "query side was prepared with a different seed or cap".into(),
        });
    }
    let threshold =
        1.5 * f64::from(tree.m1()) * f64::from(tree.m3()) * tree.flip_prob_node();
    let shift = j as i64 - i as i64;
    let mut lo = 0usize;
    let mut hi = n - i.max(j) + 1;
    let mut distances = Vec::new();
    while lo != hi {
        let mid = (lo + hi + 1) / 2;
        let nodes = tree.decompose(i, i + mid - 1)?;
        let sa = tree.interval_sketch_of(&nodes)?;
        let sb = match backend {
            LcpBackend::TreeAligned => qs.tree().interval_sketch(j, j + mid - 1)?,
            LcpBackend::WindowEncode => qs.window_sketch(tree, &nodes, shift)?,
        };
        let dist = sa.distance(&sb)?;
        distances.push(dist);
        if dist <= threshold {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(LcpQueryResult {
        w_tilde: lo,
        steps: distances.len(),
        distances,
    })
}
