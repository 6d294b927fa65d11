//! Corruption models: random insdel within an edit budget, Hamming flips,
//! and adversarial strategies aimed at the decoder's failure modes.
//!
//! Every channel returns a replayable [`CorruptionPlan`] and re-verifies its
//! declared distance bound with the DP edit distance; the plan is never
//! trusted on its own.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{edit_distance_within, BitString};
use crate::concat::block_interval;
use crate::error::{Error, Result};
use crate::inner::InnerCodebook;
use crate::matching::lcs_matching;
use crate::rng;

/// One edit operation. Positions are 1-based and refer to the word as it is
/// at the moment the operation applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EditOp {
    Insert { pos: usize, bit: u8 },
    Delete { pos: usize },
}

/// An ordered edit script with a declared budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorruptionPlan {
    pub ops: Vec<EditOp>,
    pub budget: usize,
}

impl CorruptionPlan {
    /// Replay the plan on a source word.
    pub fn apply(&self, source: &BitString) -> BitString {
        let mut w = source.clone();
        for op in &self.ops {
            match *op {
                EditOp::Insert { pos, bit } => w.insert(pos, bit),
                EditOp::Delete { pos } => w.delete(pos),
            }
        }
        w
    }

    /// Line-oriented serialization: `insert POS BIT` / `delete POS`.
    pub fn serialize(&self) -> String {
        let mut out = format!("budget {}\n", self.budget);
        for op in &self.ops {
            match *op {
                EditOp::Insert { pos, bit } => out.push_str(&format!("insert {pos} {bit}\n")),
                EditOp::Delete { pos } => out.push_str(&format!("delete {pos}\n")),
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut ops = Vec::new();
        let mut budget = None;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("budget") => {
                    let b = parts
                        .next()
                        .ok_or_else(|| Error::Parse("missing budget value".into()))?;
                    budget = Some(
                        b.parse()
                            .map_err(|e| Error::Parse(format!("bad budget: {e}")))?,
                    );
                }
                Some("insert") => {
                    let pos = parts
                        .next()
                        .ok_or_else(|| Error::Parse("insert missing position".into()))?
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad position: {e}")))?;
                    let bit: u8 = parts
                        .next()
                        .ok_or_else(|| Error::Parse("insert missing bit".into()))?
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad bit: {e}")))?;
                    if bit > 1 {
                        return Err(Error::Parse(format!("bit {bit} is not 0 or 1")));
                    }
                    ops.push(EditOp::Insert { pos, bit });
                }
                Some("delete") => {
                    let pos = parts
                        .next()
                        .ok_or_else(|| Error::Parse("delete missing position".into()))?
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad position: {e}")))?;
                    ops.push(EditOp::Delete { pos });
                }
                Some(other) => {
                    return Err(Error::Parse(format!("unknown plan op '{other}'")));
                }
                None => {}
            }
        }
        let budget = budget.ok_or_else(|| Error::Parse("missing budget line".into()))?;
        if ops.len() > budget {
            return Err(Error::Parse(format!(
                "plan has {} ops but declares budget {budget}",
                ops.len()
            )));
        }
        Ok(CorruptionPlan { ops, budget })
    }
}

fn assert_within_budget(source: &BitString, out: &BitString, budget: usize) {
    assert!(
        edit_distance_within(source, out, budget).is_some(),
        "channel output exceeds its declared edit budget {budget}"
    );
}

/// Apply `budget` uniformly random insertions/deletions.
///
/// Each operation is an insertion of a random bit or a deletion, at a
/// position uniform over the current word; the true edit distance may be
/// smaller than the budget and is re-verified by DP.
pub fn random_insdel(s: &BitString, budget: usize, seed: u64) -> (BitString, CorruptionPlan) {
    let mut rng = rng::stream(seed);
    let mut w = s.clone();
    let mut ops = Vec::with_capacity(budget);
    for _ in 0..budget {
        let insert = w.is_empty() || rng.gen_bool(0.5);
        if insert {
            let pos = rng.gen_range(1..=w.len() + 1);
            let bit = rng.gen_range(0..2u8);
            w.insert(pos, bit);
            ops.push(EditOp::Insert { pos, bit });
        } else {
            let pos = rng.gen_range(1..=w.len());
            w.delete(pos);
            ops.push(EditOp::Delete { pos });
        }
    }
    let plan = CorruptionPlan { ops, budget };
    assert_within_budget(s, &w, budget);
    (w, plan)
}

/// Like [`random_insdel`] but the output always has the source's length:
/// `floor(budget / 2)` random deletions and as many random insertions,
/// interleaved randomly.
pub fn random_insdel_balanced(
    s: &BitString,
    budget: usize,
    seed: u64,
) -> (BitString, CorruptionPlan) {
    let mut rng = rng::stream(seed);
    let pairs = budget / 2;
    let mut w = s.clone();
    let mut ops = Vec::with_capacity(2 * pairs);
    let mut pending_inserts = pairs;
    let mut pending_deletes = pairs;
    while pending_inserts + pending_deletes > 0 {
        let do_insert = if pending_deletes == 0 || w.is_empty() {
            true
        } else if pending_inserts == 0 {
            false
        } else {
            rng.gen_bool(0.5)
        };
        if do_insert {
            let pos = rng.gen_range(1..=w.len() + 1);
            let bit = rng.gen_range(0..2u8);
            w.insert(pos, bit);
            ops.push(EditOp::Insert { pos, bit });
            pending_inserts -= 1;
        } else {
            let pos = rng.gen_range(1..=w.len());
            w.delete(pos);
            ops.push(EditOp::Delete { pos });
            pending_deletes -= 1;
        }
    }
    let plan = CorruptionPlan { ops, budget };
    assert_within_budget(s, &w, budget);
    debug_assert_eq!(w.len(), s.len());
    (w, plan)
}

/// Result of a targeted attack: the corrupted word, the plan, and which
/// targets were actually completed within budget.
#[derive(Clone, Debug)]
pub struct AttackResult {
    pub word: BitString,
    pub plan: CorruptionPlan,
    pub completed: Vec<usize>,
}

/// Minimal edit script rewriting `window` (at 1-based `base+1..base+len`)
/// into `replacement`, confined to the window so the rest of the word keeps
/// its alignment. Returns ops relative to the whole word.
fn window_rewrite_ops(w: &BitString, base: usize, replacement: &BitString) -> Vec<EditOp> {
    let t = replacement.len();
    let window = w
        .slice(crate::bits::Interval::new(base + 1, base + t).unwrap())
        .expect("window in range");
    let matching = lcs_matching(&window, replacement);
    let matched_left: Vec<usize> = matching.pairs().iter().map(|&(i, _)| i).collect();
    let matched_right: Vec<usize> = matching.pairs().iter().map(|&(_, j)| j).collect();
    let mut ops = Vec::new();
    // delete unmatched window bits, right to left
    for i in (1..=t).rev() {
        if !matched_left.contains(&i) {
            ops.push(EditOp::Delete { pos: base + i });
        }
    }
    // after deletions the window holds the matched bits in order; insert the
    // unmatched replacement bits at their final offsets, left to right
    for j in 1..=t {
        if !matched_right.contains(&j) {
            ops.push(EditOp::Insert {
                pos: base + j,
                bit: replacement.bit(j),
            });
        }
    }
    ops
}

/// Rewrite the windows of the target blocks to hold the inner encoding of
/// the opposite bit, greedily while the cumulative edit cost stays within
/// budget. Completed targets have `ED(w[I_j], C_in(j, 1-y_j)) = 0`: they are
/// dangerous by construction.
pub fn attack_dangerous_blocks(
    codeword: &BitString,
    book: &InnerCodebook,
    y: &BitString,
    targets: &[usize],
    budget: usize,
) -> Result<AttackResult> {
    let t = book.t();
    let mut w = codeword.clone();
    let mut ops = Vec::new();
    let mut completed = Vec::new();
    let mut spent = 0usize;
    for &j in targets {
        if j == 0 || j > book.k() {
            return Err(Error::IndexOutOfRange {
                index: j,
                bound: book.k(),
            });
        }
        let opposite = book.encode(j, 1 - y.bit(j))?.clone();
        let base = block_interval(j, t).start - 1;
        let step_ops = window_rewrite_ops(&w, base, &opposite);
        if spent + step_ops.len() > budget {
            break;
        }
        for op in &step_ops {
            match *op {
                EditOp::Insert { pos, bit } => w.insert(pos, bit),
                EditOp::Delete { pos } => w.delete(pos),
            }
        }
        spent += step_ops.len();
        ops.extend(step_ops);
        completed.push(j);
    }
    let plan = CorruptionPlan { ops, budget };
    assert_within_budget(codeword, &w, budget);
    Ok(AttackResult {
        word: w,
        plan,
        completed,
    })
}

/// Structural corruption kinds exercising misalignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructuralAttack {
    /// Delete the first `r` symbols.
    PrefixShift { r: usize },
    /// Delete buffer `j` (the `0^t` run after block `j`) entirely.
    BufferDeletion { j: usize },
    /// Swap the contents of block windows `I_j` and `I_j2`.
    BlockSwap { j: usize, j2: usize },
}

/// Apply a structural attack, refusing if its cost exceeds the budget.
pub fn attack_structural(
    codeword: &BitString,
    book: &InnerCodebook,
    kind: StructuralAttack,
    budget: usize,
) -> Result<(BitString, CorruptionPlan)> {
    let t = book.t();
    let mut w = codeword.clone();
    let mut ops = Vec::new();
    match kind {
        StructuralAttack::PrefixShift { r } => {
            if r > budget {
                return Err(Error::BudgetExceeded {
                    budget,
                    required: r,
                });
            }
            if r > w.len() {
                return Err(Error::InvalidParameter(format!(
                    "prefix shift {r} longer than word"
                )));
            }
            for _ in 0..r {
                w.delete(1);
                ops.push(EditOp::Delete { pos: 1 });
            }
        }
        StructuralAttack::BufferDeletion { j } => {
            if t > budget {
                return Err(Error::BudgetExceeded {
                    budget,
                    required: t,
                });
            }
            if j == 0 || j >= book.k() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    bound: book.k() - 1,
                });
            }
            // buffer j occupies the t positions after block j
            let start = block_interval(j, t).end + 1;
            for _ in 0..t {
                w.delete(start);
                ops.push(EditOp::Delete { pos: start });
            }
        }
        StructuralAttack::BlockSwap { j, j2 } => {
            if j == j2 || j == 0 || j2 == 0 || j > book.k() || j2 > book.k() {
                return Err(Error::InvalidParameter(format!(
                    "invalid block swap ({j}, {j2})"
                )));
            }
            let iv_a = block_interval(j, t);
            let iv_b = block_interval(j2, t);
            let content_a = w.slice(iv_a)?;
            let content_b = w.slice(iv_b)?;
            let ops_a = window_rewrite_ops(&w, iv_a.start - 1, &content_b);
            let ops_b_cost = {
                // cost of the second rewrite measured on the original word
                window_rewrite_ops(&w, iv_b.start - 1, &content_a).len()
            };
            let required = ops_a.len() + ops_b_cost;
            if required > budget {
                return Err(Error::BudgetExceeded { budget, required });
            }
            for op in &ops_a {
                match *op {
                    EditOp::Insert { pos, bit } => w.insert(pos, bit),
                    EditOp::Delete { pos } => w.delete(pos),
                }
            }
            ops.extend(ops_a);
            let ops_b = window_rewrite_ops(&w, iv_b.start - 1, &content_a);
            for op in &ops_b {
                match *op {
                    EditOp::Insert { pos, bit } => w.insert(pos, bit),
                    EditOp::Delete { pos } => w.delete(pos),
                }
            }
            ops.extend(ops_b);
        }
    }
    let plan = CorruptionPlan { ops, budget };
    assert_within_budget(codeword, &w, budget);
    Ok((w, plan))
}

/// Flip a uniformly random set of exactly `budget` positions.
pub fn hamming_corrupt(s: &BitString, flips: usize, seed: u64) -> Result<BitString> {
    if flips > s.len() {
        return Err(Error::InvalidParameter(format!(
            "cannot flip {flips} of {} positions",
            s.len()
        )));
    }
    let mut rng = rng::stream(seed);
    let mut picked: Vec<usize> = Vec::with_capacity(flips);
    // Floyd's algorithm for a uniform subset
    for j in (s.len() - flips + 1)..=s.len() {
        let candidate = rng.gen_range(1..=j);
        if picked.contains(&candidate) {
            picked.push(j);
        } else {
            picked.push(candidate);
        }
    }
    let mut w = s.clone();
    for pos in picked {
        w.flip(pos);
    }
    Ok(w)
}
