//! Binary strings, index intervals, and the three-valued oracle symbol.
//!
//! Indices into strings are 1-based throughout the crate, matching the
//! interval arithmetic of the block layout (`I_j = 2(j-1)t+1 .. 2(j-1)t+t`).
//! Edit distance counts insertions and deletions only, so
//! `ED(a, b) = |a| + |b| - 2 * |LCS(a, b)|`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite binary word. Stored one bit per byte; values are always 0 or 1.
/// Ordering is lexicographic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn new() -> Self {
        BitString { bits: Vec::new() }
    }

    /// Build from raw 0/1 bytes.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidParameter(format!(
                "bit value {b} is not 0 or 1"
            )));
        }
        Ok(BitString { bits })
    }

    /// The all-zero word of length `len`.
    pub fn zeros(len: usize) -> Self {
        BitString { bits: vec![0; len] }
    }

    /// Interpret the low `n` bits of `value` as a word, most significant
    /// bit first, so that `from_index(u, n)` enumerates `{0,1}^n` in binary
    /// order as `u` counts up.
    pub fn from_index(value: usize, n: usize) -> Self {
        let bits = (0..n).map(|i| ((value >> (n - 1 - i)) & 1) as u8).collect();
        BitString { bits }
    }

    /// The binary-order index of this word (inverse of [`from_index`]).
    ///
    /// [`from_index`]: BitString::from_index
    pub fn to_index(&self) -> usize {
        self.bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// 1-based bit access.
    pub fn get(&self, pos: usize) -> Option<u8> {
        if pos == 0 {
            return None;
        }
        self.bits.get(pos - 1).copied()
    }

    /// 1-based bit access; panics out of range.
    pub fn bit(&self, pos: usize) -> u8 {
        self.get(pos)
            .unwrap_or_else(|| panic!("position {pos} out of range 1..={}", self.len()))
    }

    pub fn set(&mut self, pos: usize, value: u8) {
        assert!(value <= 1, "bit value must be 0 or 1");
        assert!(pos >= 1 && pos <= self.len());
        self.bits[pos - 1] = value;
    }

    pub fn flip(&mut self, pos: usize) {
        assert!(pos >= 1 && pos <= self.len());
        self.bits[pos - 1] ^= 1;
    }

    /// Insert `value` so that it ends up at 1-based position `pos`
    /// (`pos` may be `len + 1` to append).
    pub fn insert(&mut self, pos: usize, value: u8) {
        assert!(value <= 1);
        assert!(pos >= 1 && pos <= self.len() + 1);
        self.bits.insert(pos - 1, value);
    }

    /// Delete the bit at 1-based position `pos`.
    pub fn delete(&mut self, pos: usize) {
        assert!(pos >= 1 && pos <= self.len());
        self.bits.remove(pos - 1);
    }

    pub fn as_bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().copied()
    }

    pub fn push(&mut self, value: u8) {
        assert!(value <= 1);
        self.bits.push(value);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    /// The substring covered by `interval` (1-based, inclusive).
    pub fn slice(&self, interval: Interval) -> Result<BitString> {
        if interval.end > self.len() {
            return Err(Error::IntervalOutOfRange {
                start: interval.start,
                end: interval.end,
                len: self.len(),
            });
        }
        Ok(BitString {
            bits: self.bits[interval.start - 1..interval.end].to_vec(),
        })
    }

    /// Like [`slice`], but truncates at the end of the word instead of
    /// failing, and returns the empty word when the interval starts past
    /// the end. Used for windows of received words whose length may differ
    /// from the codeword length.
    ///
    /// [`slice`]: BitString::slice
    pub fn slice_clamped(&self, interval: Interval) -> BitString {
        if interval.start > self.len() {
            return BitString::new();
        }
        let end = interval.end.min(self.len());
        BitString {
            bits: self.bits[interval.start - 1..end].to_vec(),
        }
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// True if the word contains no "00" substring.
    pub fn is_zero_run_free(&self) -> bool {
        !self.bits.windows(2).any(|w| w[0] == 0 && w[1] == 0)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{}\")", self)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => {
                    return Err(Error::Parse(format!(
                        "invalid character '{c}' at position {} in bit string",
                        i + 1
                    )))
                }
            }
        }
        Ok(BitString { bits })
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A 1-based inclusive index window `start..end`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start == 0 || start > end {
            return Err(Error::InvalidParameter(format!(
                "invalid interval {start}..{end}: need 1 <= start <= end"
            )));
        }
        Ok(Interval { start, end })
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, pos: usize) -> bool {
        pos >= self.start && pos <= self.end
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }

    /// Two intervals are non-adjacent when a gap of at least one position
    /// separates them.
    pub fn disjoint_nonadjacent(&self, other: &Interval) -> bool {
        self.end + 1 < other.start || other.end + 1 < self.start
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| Error::Parse(format!("invalid interval '{s}', expected START..END")))?;
        let start = a
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("invalid interval start '{a}': {e}")))?;
        let end = b
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("invalid interval end '{b}': {e}")))?;
        Interval::new(start, end)
    }
}

/// An oracle answer or decoder output: a bit or the abort symbol.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum QuerySymbol {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "bot")]
    Bot,
}

impl QuerySymbol {
    pub fn from_bit(b: u8) -> Self {
        match b {
            0 => QuerySymbol::Zero,
            1 => QuerySymbol::One,
            _ => panic!("bit value must be 0 or 1"),
        }
    }

    pub fn as_bit(&self) -> Option<u8> {
        match self {
            QuerySymbol::Zero => Some(0),
            QuerySymbol::One => Some(1),
            QuerySymbol::Bot => None,
        }
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, QuerySymbol::Bot)
    }

    /// True when the answer equals the given bit (a ⊥ answer matches no bit).
    pub fn matches_bit(&self, b: u8) -> bool {
        self.as_bit() == Some(b)
    }
}

impl fmt::Display for QuerySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuerySymbol::Zero => write!(f, "0"),
            QuerySymbol::One => write!(f, "1"),
            QuerySymbol::Bot => write!(f, "bot"),
        }
    }
}

/// Hamming distance between equal-length words.
pub fn hamming_distance(a: &BitString, b: &BitString) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.as_bits()
        .iter()
        .zip(b.as_bits())
        .filter(|(x, y)| x != y)
        .count())
}

/// Number of ones in `a`.
pub fn hamming_weight(a: &BitString) -> usize {
    a.weight()
}

/// Insertion-deletion edit distance via the LCS identity.
pub fn edit_distance(a: &BitString, b: &BitString) -> usize {
    a.len() + b.len() - 2 * lcs_length(a, b)
}

/// Length of the longest common subsequence (two-row DP).
pub fn lcs_length(a: &BitString, b: &BitString) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let n = short.len();
    if n == 0 {
        return 0;
    }
    let mut row = vec![0u32; n + 1];
    for &lb in long.as_bits() {
        let mut prev_diag = 0u32;
        for (i, &sb) in short.as_bits().iter().enumerate() {
            let cur = row[i + 1];
            row[i + 1] = if sb == lb {
                prev_diag + 1
            } else {
                cur.max(row[i])
            };
            prev_diag = cur;
        }
    }
    row[n] as usize
}

/// Edit distance if it is at most `cap`, else `None`.
///
/// Banded DP: any path through a cell with `|i - j| > cap` already costs
/// more than `cap`, so those cells can be skipped.
pub fn edit_distance_within(a: &BitString, b: &BitString, cap: usize) -> Option<usize> {
    let la = a.len();
    let lb = b.len();
    if la.abs_diff(lb) > cap {
        return None;
    }
    const BIG: u32 = u32::MAX / 2;
    let mut prev = vec![BIG; lb + 1];
    for (j, cell) in prev.iter_mut().enumerate().take(cap.min(lb) + 1) {
        *cell = j as u32;
    }
    for i in 1..=la {
        let mut cur = vec![BIG; lb + 1];
        let jlo = i.saturating_sub(cap);
        let jhi = (i + cap).min(lb);
        for j in jlo..=jhi {
            if j == 0 {
                cur[0] = i as u32;
                continue;
            }
            let mut best = prev[j].saturating_add(1); // delete a_i
            best = best.min(cur[j - 1].saturating_add(1)); // insert b_j
            if a.bit(i) == b.bit(j) {
                best = best.min(prev[j - 1]);
            }
            cur[j] = best;
        }
        prev = cur;
    }
    let d = prev[lb] as usize;
    if d <= cap {
        Some(d)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn hamming_basic() {
        assert_eq!(hamming_distance(&bs("0101"), &bs("0101")).unwrap(), 0);
        assert_eq!(hamming_distance(&bs("0101"), &bs("0111")).unwrap(), 1);
        assert!(matches!(
            hamming_distance(&bs("01"), &bs("011")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn weight_basic() {
        assert_eq!(hamming_weight(&bs("0000")), 0);
        assert_eq!(hamming_weight(&bs("0110")), 2);
    }

    #[test]
    fn edit_distance_basic() {
        assert_eq!(edit_distance(&bs("0101"), &bs("0101")), 0);
        assert_eq!(edit_distance(&bs("0101"), &bs("101")), 1);
        assert_eq!(edit_distance(&bs("0000"), &bs("1111")), 8);
        assert_eq!(edit_distance(&bs(""), &bs("101")), 3);
    }

    #[test]
    fn edit_distance_within_agrees_with_full() {
        let words = [
            "", "0", "1", "01", "10", "0110", "10101", "111000", "010101",
        ];
        for a in words {
            for b in words {
                let (a, b) = (bs(a), bs(b));
                let full = edit_distance(&a, &b);
                for cap in 0..=10 {
                    let banded = edit_distance_within(&a, &b, cap);
                    if full <= cap {
                        assert_eq!(banded, Some(full), "a={a} b={b} cap={cap}");
                    } else {
                        assert_eq!(banded, None, "a={a} b={b} cap={cap}");
                    }
                }
            }
        }
    }

    #[test]
    fn interval_parse_display() {
        let iv: Interval = "3..7".parse().unwrap();
        assert_eq!(iv, Interval::new(3, 7).unwrap());
        assert_eq!(iv.to_string(), "3..7");
        assert_eq!(iv.len(), 5);
        assert!(Interval::new(5, 4).is_err());
        assert!(Interval::new(0, 4).is_err());
    }

    #[test]
    fn bitstring_roundtrip_and_index() {
        assert_eq!(bs("0110").to_string(), "0110");
        assert!(BitString::from_str("01x0").is_err());
        assert_eq!(BitString::from_index(5, 4), bs("0101"));
        assert_eq!(bs("0101").to_index(), 5);
        assert_eq!(BitString::from_index(0, 3), bs("000"));
    }

    #[test]
    fn zero_run_detection() {
        assert!(bs("0110").is_zero_run_free());
        assert!(!bs("0100").is_zero_run_free());
        assert!(bs("").is_zero_run_free());
        assert!(bs("0").is_zero_run_free());
    }
}
