//! Property tests for the string kernels and channels.

mod common;

use proptest::prelude::*;

use rldc_core::bits::{edit_distance, edit_distance_within, hamming_weight, BitString, Interval};
use rldc_core::channel::{random_insdel, random_insdel_balanced};
use rldc_core::matching::{lcs_matching, span_of};

fn bitstring(max_len: usize) -> impl Strategy<Value = BitString> {
    prop::collection::vec(0u8..2, 0..=max_len).prop_map(|bits| BitString::from_bits(bits).unwrap())
}

proptest! {
    #[test]
    fn edit_distance_is_a_metric(
        a in bitstring(12),
        b in bitstring(12),
        c in bitstring(12),
    ) {
        let ab = edit_distance(&a, &b);
        prop_assert_eq!(ab, edit_distance(&b, &a));
        prop_assert_eq!(ab == 0, a == b);
        prop_assert!(ab <= edit_distance(&a, &c) + edit_distance(&c, &b));
    }

    #[test]
    fn lcs_matching_is_monotone_equal_and_maximal(
        a in bitstring(14),
        b in bitstring(14),
    ) {
        let m = lcs_matching(&a, &b);
        for w in m.pairs().windows(2) {
            prop_assert!(w[0].0 < w[1].0 && w[0].1 < w[1].1);
        }
        for &(i, j) in m.pairs() {
            prop_assert_eq!(a.bit(i), b.bit(j));
        }
        prop_assert_eq!(2 * m.len(), a.len() + b.len() - edit_distance(&a, &b));
    }

    #[test]
    fn banded_distance_agrees_with_full(
        a in bitstring(10),
        b in bitstring(10),
        cap in 0usize..12,
    ) {
        let full = edit_distance(&a, &b);
        match edit_distance_within(&a, &b, cap) {
            Some(d) => prop_assert_eq!(d, full),
            None => prop_assert!(full > cap),
        }
    }

    #[test]
    fn hamming_weight_is_bit_sum(a in bitstring(24)) {
        prop_assert_eq!(hamming_weight(&a), a.iter().map(usize::from).sum::<usize>());
    }

    #[test]
    fn hamming_distance_matches_position_scan(
        pair in prop::collection::vec(0u8..4, 1..=12),
    ) {
        let a = BitString::from_bits(pair.iter().map(|v| v & 1).collect()).unwrap();
        let b = BitString::from_bits(pair.iter().map(|v| v >> 1).collect()).unwrap();
        let mut count = 0;
        for pos in 1..=a.len() {
            if a.bit(pos) != b.bit(pos) {
                count += 1;
            }
        }
        prop_assert_eq!(rldc_core::bits::hamming_distance(&a, &b).unwrap(), count);
    }

    #[test]
    fn span_counts_match(a in bitstring(12), b in bitstring(12)) {
        prop_assume!(a.len() >= 4);
        let m = lcs_matching(&a, &b);
        let mid = a.len() / 2;
        let j1 = Interval::new(1, mid.saturating_sub(1).max(1)).unwrap();
        let j2 = Interval::new(mid + 1, a.len()).unwrap();
        prop_assume!(j1.disjoint_nonadjacent(&j2));
        let rep = span_of(&m, &[j1, j2], a.len()).unwrap();
        // |M(J)| = |N(J)| (a matching is a bijection on its pairs)
        prop_assert_eq!(rep.matched_left.len(), rep.partners.len());
        prop_assert!(rep.partners.len() <= rep.spans.iter().map(Interval::len).sum::<usize>());
        // disjoint, non-adjacent intervals have disjoint spans
        for (x, s1) in rep.spans.iter().enumerate() {
            for s2 in rep.spans.iter().skip(x + 1) {
                prop_assert!(s1.end < s2.start || s2.end < s1.start);
            }
        }
    }

    #[test]
    fn random_insdel_respects_budget(
        s in bitstring(40),
        budget in 0usize..8,
        seed in 0u64..1000,
    ) {
        let (w, plan) = random_insdel(&s, budget, seed);
        prop_assert_eq!(plan.apply(&s), w.clone());
        prop_assert!(plan.ops.len() <= budget);
        // re-verified with the independent full DP, not the plan
        prop_assert!(edit_distance(&s, &w) <= budget);
    }

    #[test]
    fn balanced_insdel_preserves_length(
        s in bitstring(40),
        budget in 0usize..8,
        seed in 0u64..1000,
    ) {
        prop_assume!(!s.is_empty());
        let (w, plan) = random_insdel_balanced(&s, budget, seed);
        prop_assert_eq!(w.len(), s.len());
        prop_assert_eq!(plan.apply(&s), w.clone());
        prop_assert!(edit_distance(&s, &w) <= budget);
    }
}

// The substring-weight property is equivalent to containing no "00":
// exhaustive over every string of length <= 12.
#[test]
fn weight_property_iff_zero_run_free() {
    for len in 0..=12usize {
        for s in common::all_strings(len) {
            let weight_ok = (2..=len).all(|window_len| {
                (1..=len - window_len + 1).all(|start| {
                    let w = s
                        .slice(Interval::new(start, start + window_len - 1).unwrap())
                        .unwrap();
                    w.weight() >= window_len / 2
                })
            });
            assert_eq!(weight_ok, s.is_zero_run_free(), "mismatch for {s}");
        }
    }
}
