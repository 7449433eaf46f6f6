//! Differentially private sketches for binary string distances.
//!
//! A curator encodes each database string into randomized-response-noised
//! bit tensors and releases them once; after that, any number of Hamming,
//! longest-common-prefix, and edit distance queries can be answered from
//! the released sketches alone, with additive error governed by the privacy
//! budget. Queries are pure post-processing, so repeating a query reveals
//! nothing new.
//!
//! Module map:
//! - [`bitstring`]: packed binary strings and corpus I/O
//! - [`hashing`]: the seeded public hash functions `h` and `g`
//! - [`hamming`]: encode / flip / query for single-string Hamming distance
//! - [`lcp`]: dyadic interval-sketch tree and prefix-length binary search
//! - [`edit`]: banded furthest-reach edit distance over prefix queries
//! - [`db`]: multi-string store, median amplification, binary format
//! - [`oracle`]: exact reference implementations and planted instances

pub mod bitstring;
pub mod db;
pub mod edit;
pub mod error;
pub mod hamming;
pub mod hashing;
pub mod lcp;
pub mod oracle;

pub use bitstring::{hamming_popcount, PackedBitString};
pub use db::{copies_for, SketchStore, StoreMode};
pub use edit::{edit_query, EditEstimate, EditOutcome, LvTable};
pub use error::{Error, Result};
pub use hamming::{DpHammingStructure, HammingSketch, SketchParams};
pub use lcp::{lcp_query, DyadicTree, LcpBackend, LcpQueryResult, NodeId, QuerySide};
