//! Executable checks for the decoder's guarantees, Monte-Carlo success-rate
//! estimation, and the generic decoder transforms (confidence amplification
//! and replacing aborts by coin flips).

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{edit_distance, BitString, QuerySymbol};
use crate::channel::{
    attack_dangerous_blocks, attack_structural, hamming_corrupt, random_insdel,
    random_insdel_balanced, StructuralAttack,
};
use crate::concat::{block_interval, CodeMode, ConcatCode, ConcatParams};
use crate::decode::{probe_block, rlcc_correct, rldc_decode, DecodeOptions, WordOracle};
use crate::error::{Error, Result};
use crate::inner::InnerCodebook;
use crate::rng::{self, LANE_CHANNEL, LANE_DECODE, LANE_MESSAGE};

// ---------------------------------------------------------------------------
// Dangerous blocks
// ---------------------------------------------------------------------------

/// Per-block danger analysis of a received word of length exactly `m`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DangerReport {
    /// Blocks whose window is within `delta_in * t / 4` edits of the inner
    /// encoding of the opposite bit.
    pub dangerous: Vec<usize>,
    /// `ED(w[I_j], C_in(j, 1 - y_j))` per block.
    pub per_block_ed: Vec<usize>,
    /// Danger threshold `delta_in * t / 4`.
    pub threshold: f64,
    /// Upper bound `delta_out * k / 2` on the number of dangerous blocks.
    pub bound: f64,
    pub pass: bool,
}

/// Compute the dangerous set of `w` against the nominal outer codeword `y`.
///
/// Refuses when `|w| != m`: the block windows `I_j` are only meaningful at
/// the nominal length (the decoder's length check pins this).
pub fn detect_dangerous(
    w: &BitString,
    book: &InnerCodebook,
    y: &BitString,
    params: &ConcatParams,
) -> Result<DangerReport> {
    if w.len() != params.m {
        return Err(Error::AnalysisRefused(format!(
            "received word has length {} but the layout requires m = {}",
            w.len(),
            params.m
        )));
    }
    if y.len() != params.k {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: params.k,
        });
    }
    let t = params.t;
    let threshold = params.delta_in * t as f64 / 4.0;
    let mut dangerous = Vec::new();
    let mut per_block_ed = Vec::with_capacity(params.k);
    for j in 1..=params.k {
        let window = w.slice(block_interval(j, t))?;
        let opposite = book.encode(j, 1 - y.bit(j))?;
        let ed = edit_distance(&window, opposite);
        if (ed as f64) <= threshold + 1e-12 {
            dangerous.push(j);
        }
        per_block_ed.push(ed);
    }
    let bound = params.delta_out * params.k as f64 / 2.0;
    let pass = (dangerous.len() as f64) <= bound + 1e-12;
    Ok(DangerReport {
        dangerous,
        per_block_ed,
        threshold,
        bound,
        pass,
    })
}

// ---------------------------------------------------------------------------
// Self-nonsimilarity
// ---------------------------------------------------------------------------

/// Minimum-margin report of the exhaustive interval scan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NonsimilarityReport {
    /// Smallest `ED(C[I], C_in(j, 1-y_j))` over all scanned `(I, j)`.
    pub min_ed: usize,
    /// Where the minimum is attained: (interval start, interval length, block).
    pub witness: (usize, usize, usize),
    /// Required lower bound `delta_in * t / 2`.
    pub bound: f64,
    /// Largest interval length scanned, `floor((2 - delta_in) * t)`.
    pub max_interval_len: usize,
    pub pass: bool,
}

/// Exhaustively scan every interval `I` of the clean codeword with
/// `|I| <= (2 - delta_in) t` against the inner encoding of every opposite
/// bit; longer intervals are excluded since the length gap alone forces
/// `ED >= (1 - delta_in) t >= delta_in t / 2`.
pub fn verify_self_nonsimilarity(
    codeword: &BitString,
    book: &InnerCodebook,
    y: &BitString,
    params: &ConcatParams,
) -> Result<NonsimilarityReport> {
    if codeword.len() != params.m {
        return Err(Error::LengthMismatch {
            left: codeword.len(),
            right: params.m,
        });
    }
    let t = params.t;
    let max_len = ((2.0 - params.delta_in) * t as f64).floor() as usize;
    let mut min_ed = usize::MAX;
    let mut witness = (0, 0, 0);
    for j in 1..=params.k {
        let opposite = book.encode(j, 1 - y.bit(j))?;
        for start in 1..=params.m {
            let longest = max_len.min(params.m - start + 1);
            // one DP sweep yields ED(C[start..start+l-1], opposite) for all l
            let mut row: Vec<u32> = (0..=t as u32).collect();
            for l in 1..=longest {
                let a_bit = codeword.bit(start + l - 1);
                let mut next = vec![0u32; t + 1];
                next[0] = l as u32;
                for p in 1..=t {
                    let mut best = (row[p] + 1).min(next[p - 1] + 1);
                    if a_bit == opposite.bit(p) {
                        best = best.min(row[p - 1]);
                    }
                    next[p] = best;
                }
                row = next;
                let ed = row[t] as usize;
                if ed < min_ed {
                    min_ed = ed;
                    witness = (start, l, j);
                }
            }
        }
    }
    let bound = params.delta_in * t as f64 / 2.0;
    let pass = (min_ed as f64) + 1e-12 >= bound;
    Ok(NonsimilarityReport {
        min_ed,
        witness,
        bound,
        max_interval_len: max_len,
        pass,
    })
}

// ---------------------------------------------------------------------------
// Flip probability of a block probe
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlipProbabilityReport {
    pub block: usize,
    /// Monte-Carlo frequency of the probe reporting `1 - y_j`.
    pub empirical: f64,
    /// Exact probability `a0 * (agree / t)^d` where `a0` indicates agreement
    /// at the forced offset `i_0` and `agree` counts offsets matching the
    /// opposite codeword.
    pub exact: f64,
    /// The analytical bound `(1 - delta_in / 8)^d`.
    pub bound: f64,
    pub trials: u64,
    /// Monte-Carlo standard error at the exact probability.
    pub std_err: f64,
}

/// Estimate and exactly compute the probability that probing a
/// non-dangerous block reports the flipped bit.
pub fn estimate_flip_probability(
    j: usize,
    w: &BitString,
    book: &InnerCodebook,
    y: &BitString,
    params: &ConcatParams,
    trials: u64,
    seed: u64,
) -> Result<FlipProbabilityReport> {
    if w.len() != params.m {
        return Err(Error::AnalysisRefused(format!(
            "received word has length {} but the layout requires m = {}",
            w.len(),
            params.m
        )));
    }
    let t = params.t;
    let window = w.slice(block_interval(j, t))?;
    let opposite = book.encode(j, 1 - y.bit(j))?.clone();
    let ed = edit_distance(&window, &opposite);
    if (ed as f64) <= params.delta_in * t as f64 / 4.0 + 1e-12 {
        return Err(Error::AnalysisRefused(format!(
            "block {j} is dangerous (ED {ed}): the flip bound assumes a non-dangerous block"
        )));
    }
    let i0 = book.first_diff_index(j)?;
    let a0 = if window.bit(i0) == opposite.bit(i0) {
        1.0
    } else {
        0.0
    };
    let agree = (1..=t)
        .filter(|&i| window.bit(i) == opposite.bit(i))
        .count();
    let exact = a0 * ((agree as f64) / t as f64).powi(params.d as i32);
    let flipped = QuerySymbol::from_bit(1 - y.bit(j));
    let mut hits = 0u64;
    for trial in 0..trials {
        let mut oracle = WordOracle::new(w.clone());
        let mut rng = rng::substream(seed, trial);
        let rec = probe_block(j, &mut oracle, book, params.d, &mut rng)?;
        if rec.result == flipped {
            hits += 1;
        }
    }
    let empirical = hits as f64 / trials as f64;
    let std_err = (exact * (1.0 - exact) / trials as f64).sqrt();
    Ok(FlipProbabilityReport {
        block: j,
        empirical,
        exact,
        bound: (1.0 - params.delta_in / 8.0).powi(params.d as i32),
        trials,
        std_err,
    })
}

// ---------------------------------------------------------------------------
// Per-block probe view of a fixed randomness draw
// ---------------------------------------------------------------------------

/// The vector `Y` of per-block probe outcomes for one randomness draw,
/// together with the induced corrected word `c(Y)` and disagreement count.
#[derive(Clone, Debug)]
pub struct OuterView {
    pub outcomes: Vec<QuerySymbol>,
}

impl OuterView {
    /// Probe every block once with fresh randomness.
    pub fn sample(
        w: &BitString,
        book: &InnerCodebook,
        params: &ConcatParams,
        seed: u64,
    ) -> Result<OuterView> {
        let mut outcomes = Vec::with_capacity(params.k);
        for j in 1..=params.k {
            let mut oracle = WordOracle::new(w.clone());
            let mut rng = rng::substream(seed, j as u64);
            let rec = probe_block(j, &mut oracle, book, params.d, &mut rng)?;
            outcomes.push(rec.result);
        }
        Ok(OuterView { outcomes })
    }

    /// `c(Y)_j = y_j` when `Y_j` is `y_j` or `⊥`, else `1 - y_j`.
    pub fn corrected_word(&self, y: &BitString) -> BitString {
        let mut out = BitString::zeros(y.len());
        for j in 1..=y.len() {
            let bit = match self.outcomes[j - 1] {
                QuerySymbol::Bot => y.bit(j),
                sym => {
                    let b = sym.as_bit().unwrap();
                    if b == y.bit(j) {
                        y.bit(j)
                    } else {
                        1 - y.bit(j)
                    }
                }
            };
            out.set(j, bit);
        }
        out
    }

    /// `d(Y, y)`: the number of blocks whose probe reported the flipped bit.
    pub fn disagreements(&self, y: &BitString) -> usize {
        (1..=y.len())
            .filter(|&j| self.outcomes[j - 1].matches_bit(1 - y.bit(j)))
            .count()
    }
}

// ---------------------------------------------------------------------------
// Trial statistics
// ---------------------------------------------------------------------------

/// Counts from a Monte-Carlo campaign on one target index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialStats {
    pub trials: u64,
    /// Outcome in `{target bit, ⊥}`.
    pub successes: u64,
    /// Outcome equal to the target bit.
    pub correct: u64,
    /// Outcome `⊥`.
    pub bot: u64,
}

const Z_95: f64 = 1.959963984540054;

/// Two-sided 95% Wilson score interval for `hits / trials`.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

impl TrialStats {
    pub fn record(&mut self, outcome: QuerySymbol, target: u8) {
        self.trials += 1;
        match outcome {
            QuerySymbol::Bot => {
                self.successes += 1;
                self.bot += 1;
            }
            sym if sym.matches_bit(target) => {
                self.successes += 1;
                self.correct += 1;
            }
            _ => {}
        }
    }

    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials.max(1) as f64
    }

    pub fn correct_rate(&self) -> f64 {
        self.correct as f64 / self.trials.max(1) as f64
    }

    pub fn success_ci(&self) -> (f64, f64) {
        wilson_interval(self.successes, self.trials)
    }

    pub fn correct_ci(&self) -> (f64, f64) {
        wilson_interval(self.correct, self.trials)
    }

    pub fn merge(&mut self, other: &TrialStats) {
        self.trials += other.trials;
        self.successes += other.successes;
        self.correct += other.correct;
        self.bot += other.bot;
    }
}

// ---------------------------------------------------------------------------
// Channel selection for campaigns
// ---------------------------------------------------------------------------

/// A corruption strategy with its parameters, applied per trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    /// No corruption.
    Identity,
    /// `budget` random insertions/deletions.
    Random { budget: usize },
    /// Random insdel conditioned on preserving the length
    /// (`floor(budget/2)` deletions + as many insertions).
    RandomBalanced { budget: usize },
    /// Rewrite target block windows to the opposite inner codeword,
    /// greedily within budget. Empty target list means all blocks.
    Dangerous { targets: Vec<usize>, budget: usize },
    /// Delete the first `r` symbols.
    Shift { r: usize },
    /// Delete buffer `j` entirely.
    Buffer { j: usize },
    /// Swap the contents of blocks `j` and `j2`.
    Swap { j: usize, j2: usize, budget: usize },
    /// Flip exactly `flips` random positions.
    Hamming { flips: usize },
}

impl ChannelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelSpec::Identity => "identity",
            ChannelSpec::Random { .. } => "random",
            ChannelSpec::RandomBalanced { .. } => "random_balanced",
            ChannelSpec::Dangerous { .. } => "dangerous",
            ChannelSpec::Shift { .. } => "shift",
            ChannelSpec::Buffer { .. } => "buffer",
            ChannelSpec::Swap { .. } => "swap",
            ChannelSpec::Hamming { .. } => "hamming",
        }
    }

    /// Apply the channel to a codeword. `y` is the nominal outer codeword.
    pub fn apply(
        &self,
        codeword: &BitString,
        book: &InnerCodebook,
        y: &BitString,
        seed: u64,
    ) -> Result<BitString> {
        Ok(match self {
            ChannelSpec::Identity => codeword.clone(),
            ChannelSpec::Random { budget } => random_insdel(codeword, *budget, seed).0,
            ChannelSpec::RandomBalanced { budget } => {
                random_insdel_balanced(codeword, *budget, seed).0
            }
            ChannelSpec::Dangerous { targets, budget } => {
                let all: Vec<usize>;
                let targets = if targets.is_empty() {
                    all = (1..=book.k()).collect();
                    &all
                } else {
                    targets
                };
                attack_dangerous_blocks(codeword, book, y, targets, *budget)?.word
            }
            ChannelSpec::Shift { r } => {
                attack_structural(codeword, book, StructuralAttack::PrefixShift { r: *r }, *r)?.0
            }
            ChannelSpec::Buffer { j } => {
                attack_structural(
                    codeword,
                    book,
                    StructuralAttack::BufferDeletion { j: *j },
                    book.t(),
                )?
                .0
            }
            ChannelSpec::Swap { j, j2, budget } => {
                attack_structural(
                    codeword,
                    book,
                    StructuralAttack::BlockSwap { j: *j, j2: *j2 },
                    *budget,
                )?
                .0
            }
            ChannelSpec::Hamming { flips } => hamming_corrupt(codeword, *flips, seed)?,
        })
    }
}

/// Per-index result of a success-rate campaign.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexStats {
    /// Message index (RLDC) or codeword position (RLCC), 1-based.
    pub index: usize,
    pub stats: TrialStats,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Monte-Carlo success-rate estimation over (message, corruption, decoder
/// randomness) for the given indices.
///
/// Every decode's query count is asserted against the budget
/// `(d+1) q_out + 2`. Trials are seeded hierarchically so adding trials or
/// indices never perturbs earlier ones.
pub fn estimate_success_rate(
    code: &ConcatCode,
    indices: &[usize],
    trials: u64,
    channel: &ChannelSpec,
    seed: u64,
    options: DecodeOptions,
) -> Result<Vec<IndexStats>> {
    let mut out = Vec::with_capacity(indices.len());
    for &index in indices {
        let mut stats = TrialStats::default();
        for trial in 0..trials {
            let trial_seed = rng::split_seed(seed, (index as u64) << 32 | trial);
            let (outcome, target) = run_trial(code, index, channel, trial_seed, options)?;
            stats.record(outcome, target);
        }
        let (ci_low, ci_high) = stats.success_ci();
        out.push(IndexStats {
            index,
            stats,
            ci_low,
            ci_high,
        });
    }
    Ok(out)
}

/// One campaign trial: sample a message, corrupt, decode. Returns the
/// decoder's output and the target bit it should have produced.
pub fn run_trial(
    code: &ConcatCode,
    index: usize,
    channel: &ChannelSpec,
    trial_seed: u64,
    options: DecodeOptions,
) -> Result<(QuerySymbol, u8)> {
    let mut msg_rng = rng::substream(trial_seed, LANE_MESSAGE);
    let x = random_message(code.params.n, &mut msg_rng);
    let codeword = code.encode(&x)?;
    let y = code.outer_codeword(&x)?;
    let w = channel.apply(
        &codeword,
        &code.book,
        &y,
        rng::split_seed(trial_seed, LANE_CHANNEL),
    )?;
    let mut oracle = WordOracle::new(w);
    let decode_seed = rng::split_seed(trial_seed, LANE_DECODE);
    let (outcome, target) = match code.params.mode {
        CodeMode::Rldc => {
            let out = rldc_decode(index, &mut oracle, code, decode_seed, options)?;
            (out, x.bit(index))
        }
        CodeMode::Rlcc => {
            let out = rlcc_correct(index, &mut oracle, code, decode_seed, options)?;
            (out, codeword.bit(index))
        }
    };
    assert!(
        outcome.transcript.total_queries <= code.params.q,
        "query budget exceeded: {} > {}",
        outcome.transcript.total_queries,
        code.params.q
    );
    Ok((outcome.value, target))
}

pub fn random_message(n: usize, rng: &mut impl Rng) -> BitString {
    let mut x = BitString::zeros(n);
    for i in 1..=n {
        x.set(i, rng.gen_range(0..2u8));
    }
    x
}

/// Danger survey: corrupt `trials` times, analyze every output of nominal
/// length, and summarize.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DangerSurvey {
    pub channel: String,
    pub trials: u64,
    /// Outputs with `|w| = m` (the only ones the analysis covers).
    pub analyzed: u64,
    pub all_pass: bool,
    pub max_dangerous: usize,
    pub bound: f64,
}

pub fn danger_survey(
    code: &ConcatCode,
    channel: &ChannelSpec,
    trials: u64,
    seed: u64,
) -> Result<DangerSurvey> {
    let mut analyzed = 0u64;
    let mut all_pass = true;
    let mut max_dangerous = 0usize;
    let mut bound = 0.0;
    for trial in 0..trials {
        let trial_seed = rng::split_seed(seed, trial);
        let mut msg_rng = rng::substream(trial_seed, LANE_MESSAGE);
        let x = random_message(code.params.n, &mut msg_rng);
        let codeword = code.encode(&x)?;
        let y = code.outer_codeword(&x)?;
        let w = channel.apply(
            &codeword,
            &code.book,
            &y,
            rng::split_seed(trial_seed, LANE_CHANNEL),
        )?;
        if w.len() != code.params.m {
            continue;
        }
        let report = detect_dangerous(&w, &code.book, &y, &code.params)?;
        analyzed += 1;
        all_pass &= report.pass;
        max_dangerous = max_dangerous.max(report.dangerous.len());
        bound = report.bound;
    }
    Ok(DangerSurvey {
        channel: channel.name().to_string(),
        trials,
        analyzed,
        all_pass,
        max_dangerous,
        bound,
    })
}

// ---------------------------------------------------------------------------
// Amplification and ⊥-randomization
// ---------------------------------------------------------------------------

/// Repetitions needed to push error `1/2 - beta` down to `eps`:
/// `ceil(ln(1/eps) / (2 beta^2))`.
pub fn amplification_reps(beta: f64, eps: f64) -> usize {
    ((1.0 / eps).ln() / (2.0 * beta * beta)).ceil() as usize
}

/// Run the base decoder `reps` times and take the majority.
///
/// Outputs a bit only when exactly one of the tallies reaches `reps / 2`;
/// the exact tie (both at `reps / 2`) and the no-majority case yield `⊥`.
pub fn amplified_outcome(
    reps: usize,
    mut base: impl FnMut(&mut ChaCha8Rng) -> QuerySymbol,
    rng: &mut ChaCha8Rng,
) -> QuerySymbol {
    let mut tally = [0usize; 3];
    for _ in 0..reps {
        match base(rng) {
            QuerySymbol::Zero => tally[0] += 1,
            QuerySymbol::One => tally[1] += 1,
            QuerySymbol::Bot => tally[2] += 1,
        }
    }
    let half = reps as f64 / 2.0;
    let zero_major = tally[0] as f64 >= half;
    let one_major = tally[1] as f64 >= half;
    match (zero_major, one_major) {
        (true, false) => QuerySymbol::Zero,
        (false, true) => QuerySymbol::One,
        _ => QuerySymbol::Bot,
    }
}

/// Amplified decode of the concatenation code: `reps` independent decodes
/// of the same index, majority vote as in [`amplified_outcome`]. Query cost
/// is at most `reps` times the single-decode budget; the per-run counts are
/// returned with the outcome.
pub fn amplified_decode(
    code: &ConcatCode,
    index: usize,
    word: &BitString,
    reps: usize,
    seed: u64,
    options: DecodeOptions,
) -> Result<(QuerySymbol, Vec<usize>)> {
    let mut tally = [0usize; 3];
    let mut query_counts = Vec::with_capacity(reps);
    for rep in 0..reps {
        let mut oracle = WordOracle::new(word.clone());
        let out = rldc_decode(
            index,
            &mut oracle,
            code,
            rng::split_seed(seed, rep as u64),
            options,
        )?;
        query_counts.push(out.transcript.total_queries);
        match out.value {
            QuerySymbol::Zero => tally[0] += 1,
            QuerySymbol::One => tally[1] += 1,
            QuerySymbol::Bot => tally[2] += 1,
        }
    }
    let half = reps as f64 / 2.0;
    let value = match (tally[0] as f64 >= half, tally[1] as f64 >= half) {
        (true, false) => QuerySymbol::Zero,
        (false, true) => QuerySymbol::One,
        _ => QuerySymbol::Bot,
    };
    Ok((value, query_counts))
}

/// Replace `⊥` by an unbiased coin from the invocation's randomness stream;
/// bit outcomes pass through unchanged.
pub fn randomize_bot(outcome: QuerySymbol, rng: &mut impl Rng) -> u8 {
    match outcome.as_bit() {
        Some(b) => b,
        None => rng.gen_range(0..2u8),
    }
}

/// Exact binomial upper tail `Pr[Bin(n, p) >= k]`.
pub fn binomial_tail(n: u64, p: f64, k: u64) -> f64 {
    let mut total = 0.0;
    for i in k..=n {
        total += binomial_pmf(n, p, i);
    }
    total.min(1.0)
}

fn binomial_pmf(n: u64, p: f64, k: u64) -> f64 {
    let mut log_c = 0.0f64;
    for i in 0..k {
        log_c += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
    }
    (log_c + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp()
}

// ---------------------------------------------------------------------------
// Synthetic outcome profiles (exact arithmetic for the transforms)
// ---------------------------------------------------------------------------

/// Exact per-index outcome distribution of a synthetic decoder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDist {
    pub p_correct: f64,
    pub p_wrong: f64,
    pub p_bot: f64,
}

impl OutcomeDist {
    pub fn new(p_correct: f64, p_wrong: f64, p_bot: f64) -> Result<Self> {
        let sum = p_correct + p_wrong + p_bot;
        if (sum - 1.0).abs() > 1e-12 || p_correct < 0.0 || p_wrong < 0.0 || p_bot < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "outcome distribution ({p_correct}, {p_wrong}, {p_bot}) does not sum to 1"
            )));
        }
        Ok(OutcomeDist {
            p_correct,
            p_wrong,
            p_bot,
        })
    }

    /// Success probability after replacing `⊥` by a fair coin.
    pub fn success_after_coin(&self) -> f64 {
        self.p_correct + self.p_bot / 2.0
    }

    /// Sample an outcome; `correct` encodes the target bit.
    pub fn sample(&self, target: u8, rng: &mut impl Rng) -> QuerySymbol {
        let u: f64 = rng.gen();
        if u < self.p_correct {
            QuerySymbol::from_bit(target)
        } else if u < self.p_correct + self.p_wrong {
            QuerySymbol::from_bit(1 - target)
        } else {
            QuerySymbol::Bot
        }
    }
}

/// The per-index profile of a strong relaxed decoder: a `rho` fraction of
/// indices answer correctly with probability `alpha` (wrong otherwise), the
/// rest abort with probability `alpha` (wrong otherwise).
pub fn strong_profile(n: usize, good: usize, alpha: f64) -> Result<Vec<OutcomeDist>> {
    if good > n {
        return Err(Error::InvalidParameter(format!(
            "good index count {good} exceeds n = {n}"
        )));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if i < good {
            out.push(OutcomeDist::new(alpha, 1.0 - alpha, 0.0)?);
        } else {
            out.push(OutcomeDist::new(0.0, 1.0 - alpha, alpha)?);
        }
    }
    Ok(out)
}

/// Average success rate of the coin-wrapped decoder over a profile (exact).
pub fn average_success_after_coin(profile: &[OutcomeDist]) -> f64 {
    profile.iter().map(|d| d.success_after_coin()).sum::<f64>() / profile.len() as f64
}

/// Indices whose rate clears the threshold, plus their density.
pub fn good_index_fraction(rates: &[f64], threshold: f64) -> (Vec<usize>, f64) {
    let picked: Vec<usize> = rates
        .iter()
        .enumerate()
        .filter(|(_, &r)| r + 1e-12 >= threshold)
        .map(|(i, _)| i + 1)
        .collect();
    let density = picked.len() as f64 / rates.len() as f64;
    (picked, density)
}
