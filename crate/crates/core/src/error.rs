//! Shared error type for the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty bit string")]
    EmptyString,
    #[error("invalid character at position {position} (expected '0' or '1')")]
    InvalidCharacter { position: usize },
    #[error("corpus line {line}: {source}")]
    CorpusLine { line: usize, source: Box<Error> },
    #[error("corpus line {line} has length {got}, expected {expected}")]
    RaggedLength { line: usize, got: usize, expected: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("distance cap k={k} exceeds string length n={n}")]
    KExceedsN { k: u32, n: usize },
    #[error("position {position} out of range [1, {max}]")]
    PositionOutOfRange { position: usize, max: usize },
    #[error("invalid interval [{lo}, {hi}] over [1, {max}]")]
    InvalidInterval { lo: usize, hi: usize, max: usize },
    #[error("hash input {x} outside domain [0, {domain})")]
    HashDomain { x: u64, domain: u64 },
    #[error("hash repetition {i} outside [1, {m1}]")]
    HashRepetition { i: u32, m1: u32 },
    #[error("epsilon must be positive (or infinite), got {0}")]
    InvalidEpsilon(f64),
    #[error("beta must lie in (0, 1), got {0}")]
    InvalidBeta(f64),
    #[error("invalid sketch dimensions {m1}x{m2}x{m3}")]
    InvalidDimensions { m1: u32, m2: u32, m3: u32 },
    #[error("sketch parameter mismatch: {detail}")]
    ParamMismatch { detail: String },
    #[error("bad store magic {0:02x?}")]
    BadMagic([u8; 4]),
    #[error("unsupported store version {0}")]
    VersionMismatch(u16),
    #[error("store truncated while reading {context}")]
    TruncatedStore { context: &'static str },
    #[error("tensor volume mismatch: {detail}")]
    VolumeMismatch { detail: String },
    #[error("invalid store mode byte {0}")]
    InvalidMode(u8),
    #[error("cannot plant instance: {0}")]
    InfeasiblePlant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
