//! Shared test oracles, independent of the library's DP kernels.
#![allow(dead_code)] // not every integration test uses every oracle

use std::collections::{HashSet, VecDeque};

use rldc_core::bits::BitString;

/// Breadth-first search over the edit graph: vertices are bit strings, edges
/// are single insertions/deletions. Restricting intermediate strings to
/// length at most `max(|a|, |b|)` preserves distances (an optimal script
/// that does the deletions first never grows past that).
pub fn bfs_edit_distance(a: &BitString, b: &BitString) -> usize {
    if a == b {
        return 0;
    }
    let cap = a.len().max(b.len());
    let mut seen: HashSet<BitString> = HashSet::new();
    let mut queue: VecDeque<(BitString, usize)> = VecDeque::new();
    seen.insert(a.clone());
    queue.push_back((a.clone(), 0));
    while let Some((cur, dist)) = queue.pop_front() {
        for next in neighbors(&cur, cap) {
            if next == *b {
                return dist + 1;
            }
            if seen.insert(next.clone()) {
                queue.push_back((next, dist + 1));
            }
        }
    }
    unreachable!("edit graph is connected");
}

fn neighbors(s: &BitString, cap: usize) -> Vec<BitString> {
    let mut out = Vec::new();
    for pos in 1..=s.len() {
        let mut shorter = s.clone();
        shorter.delete(pos);
        out.push(shorter);
    }
    if s.len() < cap {
        for pos in 1..=s.len() + 1 {
            for bit in 0..2u8 {
                let mut longer = s.clone();
                longer.insert(pos, bit);
                out.push(longer);
            }
        }
    }
    out
}

/// All bit strings of length exactly `len`.
pub fn all_strings(len: usize) -> Vec<BitString> {
    (0..1usize << len)
        .map(|u| BitString::from_index(u, len))
        .collect()
}

/// All bit strings of length up to `max_len` (including the empty string).
pub fn all_strings_up_to(max_len: usize) -> Vec<BitString> {
    (0..=max_len).flat_map(all_strings).collect()
}
