//! Monotone matchings between two strings, canonical LCS matchings, and the
//! span bookkeeping for interval families.

use serde::{Deserialize, Serialize};

use crate::bits::{BitString, Interval};
use crate::error::{Error, Result};

/// A monotone matching between a left and a right string: pairs `(i, j)`
/// strictly increasing in both coordinates, with equal matched symbols.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Validate `pairs` against the two fixed strings.
    pub fn new(pairs: Vec<(usize, usize)>, left: &BitString, right: &BitString) -> Result<Self> {
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(Error::InvalidParameter(format!(
                    "matching not strictly increasing: {:?} then {:?}",
                    w[0], w[1]
                )));
            }
        }
        for &(i, j) in &pairs {
            let (Some(a), Some(b)) = (left.get(i), right.get(j)) else {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    bound: left.len().max(right.len()),
                });
            };
            if a != b {
                return Err(Error::InvalidParameter(format!(
                    "matched symbols differ at pair ({i}, {j})"
                )));
            }
        }
        Ok(Matching { pairs })
    }

    pub fn empty() -> Self {
        Matching { pairs: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The right partner of left index `i`, if matched.
    pub fn partner_of_left(&self, i: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&i, |&(l, _)| l)
            .ok()
            .map(|idx| self.pairs[idx].1)
    }
}

/// The canonical maximum matching underlying the LCS of `a` and `b`.
///
/// When the DP admits several optimal matchings the backtrace prefers taking
/// a match step, then advancing in the left string; this fixes one canonical
/// matching. `|pairs| = (|a| + |b| - ED(a, b)) / 2`.
pub fn lcs_matching(a: &BitString, b: &BitString) -> Matching {
    let la = a.len();
    let lb = b.len();
    let mut dp = vec![0u32; (la + 1) * (lb + 1)];
    let idx = |i: usize, j: usize| i * (lb + 1) + j;
    for i in 1..=la {
        for j in 1..=lb {
            dp[idx(i, j)] = if a.bit(i) == b.bit(j) {
                dp[idx(i - 1, j - 1)] + 1
            } else {
                dp[idx(i - 1, j)].max(dp[idx(i, j - 1)])
            };
        }
    }
    let mut pairs = Vec::with_capacity(dp[idx(la, lb)] as usize);
    let (mut i, mut j) = (la, lb);
    while i > 0 && j > 0 {
        if a.bit(i) == b.bit(j) && dp[idx(i, j)] == dp[idx(i - 1, j - 1)] + 1 {
            pairs.push((i, j));
            i -= 1;
            j -= 1;
        } else if dp[idx(i - 1, j)] >= dp[idx(i, j - 1)] {
            // prefer advancing in the left string
            i -= 1;
        } else {
            j -= 1;
        }
    }
    pairs.reverse();
    Matching { pairs }
}

/// `M(J)`, `N(J)` and `Span(J)` for a family of intervals on the left string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanReport {
    /// Matched left indices inside the interval family, ascending.
    pub matched_left: Vec<usize>,
    /// Their right partners, ascending.
    pub partners: Vec<usize>,
    /// Minimal covering interval of the partners, one per input interval
    /// that contains at least one matched index.
    pub spans: Vec<Interval>,
}

/// Compute `M(J)`, `N(J)`, `Span(J)` for intervals `js` on the left string
/// of `matching`. Spans are reported per interval; for disjoint,
/// non-adjacent intervals the spans are pairwise disjoint.
pub fn span_of(matching: &Matching, js: &[Interval], left_len: usize) -> Result<SpanReport> {
    for iv in js {
        if iv.end > left_len {
            return Err(Error::IntervalOutOfRange {
                start: iv.start,
                end: iv.end,
                len: left_len,
            });
        }
    }
    let mut matched_left = Vec::new();
    let mut partners = Vec::new();
    let mut spans = Vec::new();
    for iv in js {
        let mut piece_partners: Vec<usize> = Vec::new();
        for &(i, j) in matching.pairs() {
            if iv.contains(i) {
                matched_left.push(i);
                piece_partners.push(j);
            }
        }
        if let (Some(&lo), Some(&hi)) = (piece_partners.first(), piece_partners.last()) {
            spans.push(Interval::new(lo, hi)?);
        }
        partners.extend(piece_partners);
    }
    matched_left.sort_unstable();
    matched_left.dedup();
    partners.sort_unstable();
    partners.dedup();
    Ok(SpanReport {
        matched_left,
        partners,
        spans,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::edit_distance;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn lcs_matching_size_matches_edit_distance() {
        let a = bs("0101");
        let b = bs("101");
        let m = lcs_matching(&a, &b);
        assert_eq!(m.len(), 3);
        assert_eq!(edit_distance(&a, &b), a.len() + b.len() - 2 * m.len());
    }

    #[test]
    fn self_match_is_identity() {
        let s = bs("110010");
        let m = lcs_matching(&s, &s);
        assert_eq!(m.len(), s.len());
        for (idx, &(i, j)) in m.pairs().iter().enumerate() {
            assert_eq!(i, idx + 1);
            assert_eq!(j, idx + 1);
        }
    }

    #[test]
    fn disjoint_symbols_give_empty_matching() {
        let m = lcs_matching(&bs("0000"), &bs("1111"));
        assert!(m.is_empty());
    }

    #[test]
    fn matching_validation() {
        let a = bs("110100");
        let b = bs("110010");
        assert!(Matching::new(vec![(2, 1), (3, 4), (4, 5), (6, 6)], &a, &b).is_ok());
        // not increasing
        assert!(Matching::new(vec![(3, 4), (2, 5)], &a, &b).is_err());
        // symbols differ: a[1] = 1, b[3] = 0
        assert!(Matching::new(vec![(1, 3)], &a, &b).is_err());
    }

    // The six-symbol worked instance: M = {(2,1),(3,4),(4,5),(6,6)},
    // J = {2,3} gives M(J) = {2,3}, N(J) = {1,4}, Span(J) = 1..4.
    #[test]
    fn span_worked_instance() {
        let a = bs("110100");
        let b = bs("110010");
        let m = Matching::new(vec![(2, 1), (3, 4), (4, 5), (6, 6)], &a, &b).unwrap();
        let j = Interval::new(2, 3).unwrap();
        let rep = span_of(&m, &[j], a.len()).unwrap();
        assert_eq!(rep.matched_left, vec![2, 3]);
        assert_eq!(rep.partners, vec![1, 4]);
        assert_eq!(rep.spans, vec![Interval::new(1, 4).unwrap()]);
    }

    #[test]
    fn span_of_empty_matching() {
        let rep = span_of(&Matching::empty(), &[Interval::new(1, 3).unwrap()], 6).unwrap();
        assert!(rep.matched_left.is_empty());
        assert!(rep.partners.is_empty());
        assert!(rep.spans.is_empty());
    }

    #[test]
    fn span_range_error() {
        let m = Matching::empty();
        assert!(span_of(&m, &[Interval::new(2, 9).unwrap()], 6).is_err());
    }
}
