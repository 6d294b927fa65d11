//! Inner insdel codebooks: `C_in : [k] x {0,1} -> {0,1}^t`.
//!
//! The decoder analysis needs exactly three properties from the inner code:
//! all 2k codewords are distinct, every length->=2 window of every codeword
//! has Hamming weight >= floor(len/2) (equivalently, no codeword contains
//! "00"), and the minimum normalized edit distance over distinct pairs is a
//! constant `delta_in` in (0, 1/2). Instead of assuming such a code exists,
//! this module finds one by greedy search over the pool of "00"-free strings
//! and verifies the achieved parameters exactly.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{edit_distance, BitString};
use crate::error::{Error, Result};
use crate::rng;

/// Exhaustive enumeration is used for pool lengths up to this cap; longer
/// pools are sampled.
pub const ENUMERATION_CAP: usize = 24;
/// Maximum number of sampled candidates when the pool is not enumerated.
pub const SAMPLE_CAP: usize = 1 << 20;

/// An inner codebook together with its achieved parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerCodebook {
    k: usize,
    t: usize,
    seed: u64,
    /// Codeword for (j, b) at index 2*(j-1) + b.
    codewords: Vec<BitString>,
    /// Achieved minimum normalized edit distance, min over distinct pairs of
    /// ED / (2t).
    delta_in: f64,
}

impl InnerCodebook {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn delta_in(&self) -> f64 {
        self.delta_in
    }

    /// Rate `(1 + ceil(log2 k)) / t`.
    pub fn rate(&self) -> f64 {
        (1.0 + (self.k as f64).log2().ceil()) / self.t as f64
    }

    /// The codeword for block `j` (1-based) carrying bit `b`.
    pub fn encode(&self, j: usize, b: u8) -> Result<&BitString> {
        if j == 0 || j > self.k {
            return Err(Error::IndexOutOfRange {
                index: j,
                bound: self.k,
            });
        }
        if b > 1 {
            return Err(Error::InvalidParameter(format!("bit {b} is not 0 or 1")));
        }
        Ok(&self.codewords[2 * (j - 1) + b as usize])
    }

    /// Smallest offset `i0` in `[t]` where the two codewords of block `j`
    /// disagree. Exists because codewords are pairwise distinct.
    pub fn first_diff_index(&self, j: usize) -> Result<usize> {
        let c0 = self.encode(j, 0)?;
        let c1 = self.encode(j, 1)?;
        for i in 1..=self.t {
            if c0.bit(i) != c1.bit(i) {
                return Ok(i);
            }
        }
        unreachable!("codebook invariant: codewords of a block are distinct")
    }

    /// Serialize as a self-describing text document. `parse` round-trips
    /// exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "k {}", self.k).unwrap();
        writeln!(out, "t {}", self.t).unwrap();
        writeln!(out, "delta_in {}", self.delta_in).unwrap();
        writeln!(out, "seed {}", self.seed).unwrap();
        for j in 1..=self.k {
            for b in 0..2u8 {
                writeln!(
                    out,
                    "{} {} {}",
                    j,
                    b,
                    self.codewords[2 * (j - 1) + b as usize]
                )
                .unwrap();
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let mut header = |name: &str| -> Result<String> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing header line '{name}'")))?;
            let (key, value) = line
                .split_once(' ')
                .ok_or_else(|| Error::Parse(format!("malformed header line '{line}'")))?;
            if key != name {
                return Err(Error::Parse(format!(
                    "expected header '{name}', found '{key}'"
                )));
            }
            Ok(value.trim().to_string())
        };
        let k: usize = header("k")?
            .parse()
            .map_err(|e| Error::Parse(format!("bad k: {e}")))?;
        let t: usize = header("t")?
            .parse()
            .map_err(|e| Error::Parse(format!("bad t: {e}")))?;
        let delta_in: f64 = header("delta_in")?
            .parse()
            .map_err(|e| Error::Parse(format!("bad delta_in: {e}")))?;
        let seed: u64 = header("seed")?
            .parse()
            .map_err(|e| Error::Parse(format!("bad seed: {e}")))?;
        let mut codewords = vec![BitString::new(); 2 * k];
        let mut seen = vec![false; 2 * k];
        for line in lines {
            let mut parts = line.split_whitespace();
            let (Some(js), Some(bs), Some(ws)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!("malformed codeword line '{line}'")));
            };
            let j: usize = js
                .parse()
                .map_err(|e| Error::Parse(format!("bad block index: {e}")))?;
            let b: u8 = bs
                .parse()
                .map_err(|e| Error::Parse(format!("bad bit: {e}")))?;
            if j == 0 || j > k || b > 1 {
                return Err(Error::Parse(format!(
                    "codeword key ({j}, {b}) out of range"
                )));
            }
            let word: BitString = ws.parse()?;
            if word.len() != t {
                return Err(Error::Parse(format!(
                    "codeword ({j}, {b}) has length {} instead of {t}",
                    word.len()
                )));
            }
            let slot = 2 * (j - 1) + b as usize;
            if seen[slot] {
                return Err(Error::Parse(format!("duplicate codeword key ({j}, {b})")));
            }
            seen[slot] = true;
            codewords[slot] = word;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::Parse(format!(
                "missing codeword for block {} bit {}",
                missing / 2 + 1,
                missing % 2
            )));
        }
        Ok(InnerCodebook {
            k,
            t,
            seed,
            codewords,
            delta_in,
        })
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.serialize())?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }
}

/// Outcome of checking every codebook invariant from scratch.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodebookReport {
    pub k: usize,
    pub t: usize,
    /// (j, b, window) triples where a weight check failed.
    pub weight_failures: Vec<(usize, u8, String)>,
    /// Exact minimum pairwise normalized edit distance over all 2k codewords.
    pub min_normalized_ed: f64,
    /// Minimum pairwise (unnormalized) edit distance.
    pub min_ed: usize,
    pub rate: f64,
    pub all_lengths_ok: bool,
    pub all_distinct: bool,
    pub pass: bool,
}

/// Exhaustively re-verify a codebook: window weights of every codeword, all
/// pairwise edit distances, lengths and distinctness.
pub fn verify_codebook(book: &InnerCodebook) -> CodebookReport {
    let mut weight_failures = Vec::new();
    let mut all_lengths_ok = true;
    for j in 1..=book.k {
        for b in 0..2u8 {
            let w = book.encode(j, b).unwrap();
            if w.len() != book.t {
                all_lengths_ok = false;
            }
            for len in 2..=w.len() {
                for start in 1..=(w.len() - len + 1) {
                    let window = w
                        .slice(crate::bits::Interval::new(start, start + len - 1).unwrap())
                        .unwrap();
                    if window.weight() < len / 2 {
                        weight_failures.push((j, b, window.to_string()));
                    }
                }
            }
        }
    }
    let mut min_ed = usize::MAX;
    let mut all_distinct = true;
    let words = &book.codewords;
    for x in 0..words.len() {
        for y in (x + 1)..words.len() {
            let ed = edit_distance(&words[x], &words[y]);
            if ed == 0 {
                all_distinct = false;
            }
            min_ed = min_ed.min(ed);
        }
    }
    if words.len() < 2 {
        min_ed = 0;
    }
    let min_normalized_ed = min_ed as f64 / (2.0 * book.t as f64);
    let pass = weight_failures.is_empty()
        && all_lengths_ok
        && all_distinct
        && min_normalized_ed > 0.0
        && min_normalized_ed < 0.5
        && (min_normalized_ed - book.delta_in).abs() < 1e-12;
    CodebookReport {
        k: book.k,
        t: book.t,
        weight_failures,
        min_normalized_ed,
        min_ed,
        rate: book.rate(),
        all_lengths_ok,
        all_distinct,
        pass,
    }
}

/// All "00"-free strings of length `t`, in lexicographic order. There are
/// Fibonacci-many: F(t + 2) with F(1) = F(2) = 1.
pub fn enumerate_zero_run_free(t: usize) -> Vec<BitString> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(t);
    fn rec(cur: &mut Vec<u8>, t: usize, out: &mut Vec<BitString>) {
        if cur.len() == t {
            out.push(BitString::from_bits(cur.clone()).unwrap());
            return;
        }
        if cur.last() != Some(&0) {
            cur.push(0);
            rec(cur, t, out);
            cur.pop();
        }
        cur.push(1);
        rec(cur, t, out);
        cur.pop();
    }
    rec(&mut cur, t, &mut out);
    out
}

/// Number of "00"-free strings of length `t`.
pub fn count_zero_run_free(t: usize) -> u64 {
    // ends0[l], ends1[l]: counts of 00-free strings of length l by last bit
    let (mut ends0, mut ends1) = (1u64, 1u64);
    if t == 0 {
        return 1;
    }
    for _ in 1..t {
        let new0 = ends1;
        let new1 = ends0 + ends1;
        ends0 = new0;
        ends1 = new1;
    }
    ends0 + ends1
}

/// Uniformly sample a "00"-free string of length `t` using suffix counts.
fn sample_zero_run_free(t: usize, rng: &mut impl Rng) -> BitString {
    // suffix[l][b]: number of 00-free completions of length l after last bit b
    let mut suffix = vec![[0u64; 2]; t + 1];
    suffix[0] = [1, 1];
    for l in 1..=t {
        suffix[l][0] = suffix[l - 1][1]; // after a 0 the next bit must be 1
        suffix[l][1] = suffix[l - 1][0] + suffix[l - 1][1];
    }
    let mut bits = Vec::with_capacity(t);
    let mut last = 1u8; // sentinel: no constraint on the first bit
    for l in (1..=t).rev() {
        let zero_weight = if last == 0 { 0 } else { suffix[l - 1][0] };
        let one_weight = suffix[l - 1][1];
        let pick = rng.gen_range(0..zero_weight + one_weight);
        let bit = if pick < zero_weight { 0 } else { 1 };
        bits.push(bit);
        last = bit;
    }
    BitString::from_bits(bits).unwrap()
}

/// Greedily build a codebook with `2k` codewords of length `t` whose pairwise
/// edit distance is at least `target_delta_in * 2t`.
///
/// The candidate pool is every "00"-free string of length `t` (enumerated for
/// `t <= 24`, sampled up to a cap otherwise), shuffled by `seed` over the
/// lexicographic order. Construction is deterministic given
/// `(k, t, target_delta_in, seed)`.
pub fn build_codebook(
    k: usize,
    t: usize,
    target_delta_in: f64,
    seed: u64,
) -> Result<InnerCodebook> {
    if t < 4 {
        return Err(Error::InvalidParameter(format!("t = {t} < 4")));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if !(target_delta_in > 0.0 && target_delta_in < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "target_delta_in = {target_delta_in} outside (0, 1/2)"
        )));
    }
    let mut pool = if t <= ENUMERATION_CAP {
        enumerate_zero_run_free(t)
    } else {
        let mut rng = rng::substream(seed, 0x9001);
        let mut set = std::collections::BTreeSet::new();
        // oversample, then dedupe; cap attempts to stay bounded
        let cap = SAMPLE_CAP.min(count_zero_run_free(t).min(usize::MAX as u64) as usize);
        let mut attempts = 0usize;
        while set.len() < cap && attempts < SAMPLE_CAP * 4 {
            set.insert(sample_zero_run_free(t, &mut rng));
            attempts += 1;
        }
        set.into_iter().collect()
    };
    let mut shuffle_rng = rng::substream(seed, 0x5u64);
    pool.shuffle(&mut shuffle_rng);

    let needed = 2 * k;
    let min_ed = (target_delta_in * 2.0 * t as f64 - 1e-9).ceil().max(1.0) as usize;
    let mut admitted: Vec<BitString> = Vec::with_capacity(needed);
    for cand in pool {
        if admitted
            .iter()
            .all(|w| edit_distance_at_least(w, &cand, min_ed))
        {
            admitted.push(cand);
            if admitted.len() == needed {
                break;
            }
        }
    }
    if admitted.len() < needed {
        return Err(Error::CodebookInfeasible {
            found: admitted.len(),
            needed,
        });
    }
    let mut min_pairwise = usize::MAX;
    for x in 0..admitted.len() {
        for y in (x + 1)..admitted.len() {
            min_pairwise = min_pairwise.min(edit_distance(&admitted[x], &admitted[y]));
        }
    }
    Ok(InnerCodebook {
        k,
        t,
        seed,
        codewords: admitted,
        delta_in: min_pairwise as f64 / (2.0 * t as f64),
    })
}

fn edit_distance_at_least(a: &BitString, b: &BitString, bound: usize) -> bool {
    if bound == 0 {
        return true;
    }
    crate::bits::edit_distance_within(a, b, bound - 1).is_none()
}

/// Load a cached codebook keyed by `(k, t, target, seed)` from `dir`, or
/// build and cache it.
pub fn load_or_build(
    dir: &Path,
    k: usize,
    t: usize,
    target_delta_in: f64,
    seed: u64,
) -> Result<InnerCodebook> {
    let name = format!("inner_k{k}_t{t}_d{target_delta_in}_s{seed}.code");
    let path = dir.join(name);
    if path.exists() {
        return InnerCodebook::read_from(&path);
    }
    let book = build_codebook(k, t, target_delta_in, seed)?;
    std::fs::create_dir_all(dir)?;
    book.write_to(&path)?;
    Ok(book)
}
