//! Bit-packed binary strings and corpus I/O.
//!
//! Strings are stored little-endian bit order: bit `p` (1-indexed) lives at
//! bit `(p-1) % 64` of word `(p-1) / 64`, so serializing the words as
//! little-endian bytes yields an LSB-first byte stream. Every bit beyond
//! `len` in the final word is kept at zero; all constructors and operations
//! preserve that invariant.

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// A length-`n` binary string, bit-packed into 64-bit words.
///
/// Positions in the public API are 1-indexed. Values are immutable after
/// construction and safe to share across threads.
#[derive(Clone, PartialEq, Eq)]
pub struct PackedBitString {
    len: usize,
    words: Vec<u64>,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl PackedBitString {
    /// Parses a line of `'0'`/`'1'` characters.
    pub fn parse(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyString);
        }
        let bytes = text.as_bytes();
        let mut words = vec![0u64; words_for(bytes.len())];
        for (idx, &ch) in bytes.iter().enumerate() {
            match ch {
                b'0' => {}
                b'1' => words[idx / 64] |= 1u64 << (idx % 64),
                _ => return Err(Error::InvalidCharacter { position: idx + 1 }),
            }
        }
        Ok(Self {
            len: bytes.len(),
            words,
        })
    }

    /// Builds a string from explicit bits, most significant position last.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyString);
        }
        let mut words = vec![0u64; words_for(bits.len())];
        for (idx, &b) in bits.iter().enumerate() {
            if b {
                words[idx / 64] |= 1u64 << (idx % 64);
            }
        }
        Ok(Self {
            len: bits.len(),
            words,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Returns the `p`-th symbol, `p` in `[1, len]`.
    ///
    /// Panics on out-of-range positions; range errors on user-supplied
    /// positions are raised by the query operations instead.
    pub fn get(&self, p: usize) -> bool {
        assert!(
            p >= 1 && p <= self.len,
            "position {p} out of range [1, {}]",
            self.len
        );
        self.bit(p - 1)
    }

    #[inline]
    pub(crate) fn bit(&self, idx: usize) -> bool {
        (self.words[idx / 64] >> (idx % 64)) & 1 == 1
    }

    /// Zero-pads up to the smallest power of two at least `len`.
    pub fn pad_to_pow2(&self) -> Self {
        let target = self.len.next_power_of_two();
        if target == self.len {
            return self.clone();
        }
        let mut words = self.words.clone();
        words.resize(words_for(target), 0);
        Self { len: target, words }
    }

    /// Copies out `[start, start + len - 1]` (1-indexed) as a fresh string.
    pub fn substring(&self, start: usize, len: usize) -> Self {
        assert!(len >= 1, "empty substring");
        assert!(
            start >= 1 && start + len - 1 <= self.len,
            "substring [{start}, {}] out of range [1, {}]",
            start + len - 1,
            self.len
        );
        let mut words = vec![0u64; words_for(len)];
        let base = start - 1;
        // Word-aligned fast path, bit shuffle otherwise.
        if base % 64 == 0 {
            let first = base / 64;
            words.copy_from_slice(&self.words[first..first + words_for(len)]);
        } else {
            let shift = base % 64;
            let first = base / 64;
            for (w, out) in words.iter_mut().enumerate() {
                let lo = self.words[first + w] >> shift;
                let hi = match self.words.get(first + w + 1) {
                    Some(&next) => next << (64 - shift),
                    None => 0,
                };
                *out = lo | hi;
            }
        }
        if len % 64 != 0 {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        Self { len, words }
    }

    /// Renders back to a `'0'`/`'1'` line; inverse of [`PackedBitString::parse`].
    pub fn to_line(&self) -> String {
        let mut s = String::with_capacity(self.len);
        for p in 0..self.len {
            s.push(if self.bit(p) { '1' } else { '0' });
        }
        s
    }

}

impl fmt::Debug for PackedBitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 64 {
            write!(f, "PackedBitString({:?})", self.to_line())
        } else {
            write!(
                f,
                "PackedBitString(len={}, {}...)",
                self.len,
                self.substring(1, 64).to_line()
            )
        }
    }
}

impl fmt::Display for PackedBitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// Counts positions where `a` and `b` differ.
pub fn hamming_popcount(a: &PackedBitString, b: &PackedBitString) -> Result<u64> {
    if a.len != b.len {
        return Err(Error::LengthMismatch {
            left: a.len,
            right: b.len,
        });
    }
    Ok(a.words
        .iter()
        .zip(&b.words)
        .map(|(x, y)| u64::from((x ^ y).count_ones()))
        .sum())
}

/// Reads a corpus: one string per line, all lines the same length.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<Vec<PackedBitString>> {
    let mut out = Vec::new();
    let mut expected = None;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() && out.is_empty() {
            continue; // tolerate leading blank line
        }
        let s = PackedBitString::parse(&line).map_err(|e| Error::CorpusLine {
            line: idx + 1,
            source: Box::new(e),
        })?;
        match expected {
            None => expected = Some(s.len()),
            Some(n) if n != s.len() => {
                return Err(Error::RaggedLength {
                    line: idx + 1,
                    got: s.len(),
                    expected: n,
                })
            }
            _ => {}
        }
        out.push(s);
    }
    Ok(out)
}

/// Writes a corpus in the format accepted by [`read_corpus`].
pub fn write_corpus<W: Write>(mut writer: W, strings: &[PackedBitString]) -> Result<()> {
    for s in strings {
        writeln!(writer, "{}", s.to_line())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_transcribes_bits() {
        let s = PackedBitString::parse("0101").unwrap();
        assert_eq!(s.len(), 4);
        assert!(!s.get(1));
        assert!(s.get(2));
        assert!(!s.get(3));
        assert!(s.get(4));
    }

    #[test]
    fn parse_rejects_empty() {
        assert!(matches!(PackedBitString::parse(""), Err(Error::EmptyString)));
    }

    #[test]
    fn parse_names_offending_position() {
        match PackedBitString::parse("01a1") {
            Err(Error::InvalidCharacter { position }) => assert_eq!(position, 3),
            other => panic!("expected InvalidCharacter, got {other:?}"),
        }
    }

    #[test]
    fn pad_to_pow2_rounds_up_with_zeros() {
        let s = PackedBitString::parse("11111").unwrap();
        let p = s.pad_to_pow2();
        assert_eq!(p.len(), 8);
        for pos in 1..=5 {
            assert!(p.get(pos));
        }
        for pos in 6..=8 {
            assert!(!p.get(pos));
        }
    }

    #[test]
    fn pad_to_pow2_identity_cases() {
        let s = PackedBitString::parse("10101010").unwrap();
        assert_eq!(s.pad_to_pow2(), s);
        let one = PackedBitString::parse("1").unwrap();
        assert_eq!(one.pad_to_pow2().len(), 1);
    }

    #[test]
    fn popcount_examples() {
        let a = PackedBitString::parse("0101").unwrap();
        assert_eq!(hamming_popcount(&a, &a).unwrap(), 0);
        let b = PackedBitString::parse("0111").unwrap();
        assert_eq!(hamming_popcount(&a, &b).unwrap(), 1);
        // alternating strings differ everywhere
        let x = PackedBitString::parse("01010101").unwrap();
        let y = PackedBitString::parse("10101010").unwrap();
        assert_eq!(hamming_popcount(&x, &y).unwrap(), 8);
    }

    #[test]
    fn popcount_rejects_length_mismatch() {
        let a = PackedBitString::parse("01").unwrap();
        let b = PackedBitString::parse("011").unwrap();
        assert!(matches!(
            hamming_popcount(&a, &b),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn substring_matches_bit_loop() {
        let text: String = (0..200)
            .map(|i| if (i * 7 + 3) % 5 < 2 { '1' } else { '0' })
            .collect();
        let s = PackedBitString::parse(&text).unwrap();
        for &(start, len) in &[(1, 200), (2, 64), (63, 70), (128, 1), (65, 64)] {
            let sub = s.substring(start, len);
            for t in 0..len {
                assert_eq!(sub.get(t + 1), s.get(start + t), "start={start} t={t}");
            }
        }
    }

    #[test]
    fn corpus_round_trip_and_ragged_error() {
        let corpus = b"0101\n1110\n0001\n";
        let strings = read_corpus(&corpus[..]).unwrap();
        assert_eq!(strings.len(), 3);
        let mut buf = Vec::new();
        write_corpus(&mut buf, &strings).unwrap();
        assert_eq!(buf, corpus);

        let ragged = b"0101\n111\n";
        match read_corpus(&ragged[..]) {
            Err(Error::RaggedLength { line, got, expected }) => {
                assert_eq!((line, got, expected), (2, 3, 4));
            }
            other => panic!("expected RaggedLength, got {other:?}"),
        }
    }

    #[test]
    fn corpus_parse_error_names_line() {
        let bad = b"0101\n01x1\n";
        match read_corpus(&bad[..]) {
            Err(Error::CorpusLine { line, source }) => {
                assert_eq!(line, 2);
                assert!(matches!(*source, Error::InvalidCharacter { position: 3 }));
            }
            other => panic!("expected CorpusLine, got {other:?}"),
        }
    }
}
