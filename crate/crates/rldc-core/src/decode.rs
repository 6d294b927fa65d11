//! The constant-query relaxed local decoder and corrector over a
//! query-counting oracle.
//!
//! A decode first verifies the received word has length `m` with two oracle
//! queries (positions `m+1` then `m`; out-of-range positions answer `⊥`),
//! then drives an outer decoder session, serving each outer query `j` by
//! probing block `j`: it reads the offsets `i_0, i_1, ..., i_d` of window
//! `I_j`, where `i_0` is the first offset on which the two inner codewords
//! of block `j` disagree and `i_1..i_d` are uniform samples (with
//! replacement). The probe yields `y~_j = 0` if every answer matches
//! `C_in(j,0)`, `1` if every answer matches `C_in(j,1)`, and `⊥` otherwise;
//! any `⊥` probe aborts the whole decode with `⊥`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{BitString, QuerySymbol};
use crate::concat::{classify_position, CodeMode, ConcatCode, PositionKind};
use crate::error::{Error, Result};
use crate::inner::InnerCodebook;
use crate::outer::{SessionStep, TrackedSession};
use crate::rng::{self, LANE_OUTER, LANE_PROBE};

/// Oracle access to a received word, with query counting and logging.
///
/// Positions beyond the word's length answer `⊥`; every call costs exactly
/// one query.
pub struct WordOracle {
    word: BitString,
    log: Vec<usize>,
}

impl WordOracle {
    pub fn new(word: BitString) -> Self {
        WordOracle {
            word,
            log: Vec::new(),
        }
    }

    pub fn answer(&mut self, pos: usize) -> QuerySymbol {
        self.log.push(pos);
        match self.word.get(pos) {
            Some(b) => QuerySymbol::from_bit(b),
            None => QuerySymbol::Bot,
        }
    }

    pub fn queries_used(&self) -> usize {
        self.log.len()
    }

    pub fn query_log(&self) -> &[usize] {
        &self.log
    }

    pub fn word(&self) -> &BitString {
        &self.word
    }

    pub fn word_len(&self) -> usize {
        self.word.len()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeOptions {
    /// Skip the two-query length check (the received length is then trusted
    /// to be `m`). Query budget drops to `(d+1) * q_out`.
    pub skip_length_check: bool,
}

/// One block probe: which block, which offsets, what came back.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub block: usize,
    /// `i_0` followed by the `d` sampled offsets, each in `[t]`.
    pub offsets: Vec<usize>,
    pub answers: Vec<QuerySymbol>,
    pub result: QuerySymbol,
}

/// Everything a decode invocation did.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Transcript {
    /// Answers to the length-check queries at `m+1` and `m` (absent when
    /// the check is skipped or not reached).
    pub length_check: Option<(QuerySymbol, QuerySymbol)>,
    pub probes: Vec<ProbeRecord>,
    pub total_queries: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub value: QuerySymbol,
    pub transcript: Transcript,
}

/// Probe block `j`: sample offsets, query the oracle, and vote.
///
/// Issues exactly `d + 1` queries. The caller provides a dedicated
/// randomness stream; two probes of the same block use fresh samples.
pub fn probe_block(
    j: usize,
    oracle: &mut WordOracle,
    book: &InnerCodebook,
    d: usize,
    rng: &mut impl Rng,
) -> Result<ProbeRecord> {
    let t = book.t();
    let c0 = book.encode(j, 0)?.clone();
    let c1 = book.encode(j, 1)?.clone();
    let i0 = book.first_diff_index(j)?;
    let mut offsets = Vec::with_capacity(d + 1);
    offsets.push(i0);
    for _ in 0..d {
        offsets.push(rng.gen_range(1..=t));
    }
    let base = 2 * (j - 1) * t;
    let answers: Vec<QuerySymbol> = offsets.iter().map(|&i| oracle.answer(base + i)).collect();
    let all_match = |c: &BitString| {
        offsets
            .iter()
            .zip(&answers)
            .all(|(&i, ans)| ans.matches_bit(c.bit(i)))
    };
    let result = if all_match(&c0) {
        QuerySymbol::Zero
    } else if all_match(&c1) {
        QuerySymbol::One
    } else {
        QuerySymbol::Bot
    };
    Ok(ProbeRecord {
        block: j,
        offsets,
        answers,
        result,
    })
}

fn length_check(oracle: &mut WordOracle, m: usize, transcript: &mut Transcript) -> bool {
    let beyond = oracle.answer(m + 1);
    let last = oracle.answer(m);
    transcript.length_check = Some((beyond, last));
    beyond.is_bot() && !last.is_bot()
}

fn finish(value: QuerySymbol, mut transcript: Transcript, oracle: &WordOracle) -> DecodeOutcome {
    transcript.total_queries = oracle.queries_used();
    DecodeOutcome { value, transcript }
}

/// Recover message bit `i` from a (possibly corrupted) received word.
pub fn rldc_decode(
    i: usize,
    oracle: &mut WordOracle,
    code: &ConcatCode,
    seed: u64,
    options: DecodeOptions,
) -> Result<DecodeOutcome> {
    let params = &code.params;
    if i == 0 || i > params.n {
        return Err(Error::IndexOutOfRange {
            index: i,
            bound: params.n,
        });
    }
    let mut transcript = Transcript {
        length_check: None,
        probes: Vec::new(),
        total_queries: 0,
    };
    if !options.skip_length_check && !length_check(oracle, params.m, &mut transcript) {
        return Ok(finish(QuerySymbol::Bot, transcript, oracle));
    }
    let session = code
        .outer
        .decode_session(i, rng::split_seed(seed, LANE_OUTER))?;
    drive_session(session, oracle, code, seed, transcript)
}

/// Recover codeword bit `pos` of the RLCC-mode code.
///
/// Buffer positions are answered `0` with zero oracle queries. Block
/// positions run the outer correct-session over block probes and re-encode
/// the recovered block bit.
pub fn rlcc_correct(
    pos: usize,
    oracle: &mut WordOracle,
    code: &ConcatCode,
    seed: u64,
    options: DecodeOptions,
) -> Result<DecodeOutcome> {
    let params = &code.params;
    if params.mode != CodeMode::Rlcc {
        return Err(Error::InvalidParameter(
            "rlcc_correct requires a code in RLCC mode".into(),
        ));
    }
    let mut transcript = Transcript {
        length_check: None,
        probes: Vec::new(),
        total_queries: 0,
    };
    let (block, offset) = match classify_position(pos, params)? {
        PositionKind::Buffer => {
            return Ok(finish(QuerySymbol::Zero, transcript, oracle));
        }
        PositionKind::Block { j, offset } => (j, offset),
    };
    if !options.skip_length_check && !length_check(oracle, params.m, &mut transcript) {
        return Ok(finish(QuerySymbol::Bot, transcript, oracle));
    }
    let session = code
        .outer
        .correct_session(block, rng::split_seed(seed, LANE_OUTER))?;
    let outcome = drive_session(session, oracle, code, seed, transcript)?;
    match outcome.value {
        QuerySymbol::Bot => Ok(outcome),
        sym => {
            let b = sym.as_bit().unwrap();
            let bit = code.book.encode(block, b)?.bit(offset);
            Ok(DecodeOutcome {
                value: QuerySymbol::from_bit(bit),
                transcript: outcome.transcript,
            })
        }
    }
}

fn drive_session(
    session: Box<dyn crate::outer::OuterSession>,
    oracle: &mut WordOracle,
    code: &ConcatCode,
    seed: u64,
    mut transcript: Transcript,
) -> Result<DecodeOutcome> {
    let params = &code.params;
    let mut tracked = TrackedSession::new(session, params.q_out);
    let mut step = tracked.begin();
    let mut probe_index = 0u64;
    loop {
        match step {
            SessionStep::Query(j) => {
                if j == 0 || j > params.k {
                    return Err(Error::IndexOutOfRange {
                        index: j,
                        bound: params.k,
                    });
                }
                let mut probe_rng = rng::substream(seed, LANE_PROBE + probe_index);
                probe_index += 1;
                let record = probe_block(j, oracle, &code.book, params.d, &mut probe_rng)?;
                let y_j = record.result;
                transcript.probes.push(record);
                if y_j.is_bot() {
                    return Ok(finish(QuerySymbol::Bot, transcript, oracle));
                }
                step = tracked.answer(y_j);
            }
            SessionStep::Done(v) => {
                return Ok(finish(v, transcript, oracle));
            }
        }
    }
}
