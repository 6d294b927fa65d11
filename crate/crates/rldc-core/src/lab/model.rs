//! Explicit two-query decoders with abort: exact query and output
//! distributions, completeness and query-structure checkers, the
//! conditional-flip construction, and the reduction to a decoder that
//! never aborts.

use std::collections::BTreeMap;

use rand::Rng;

use crate::bits::{BitString, QuerySymbol};
use crate::error::{Error, Result};

use super::code::TruthTableCode;
use super::fixability::FixabilityProfile;

// ---------------------------------------------------------------------------
// Exact distributions
// ---------------------------------------------------------------------------

/// A finitely supported distribution with integer weights (exact rationals
/// over the common denominator `denom()`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dist<T> {
    entries: Vec<(T, u64)>,
}

impl<T: Clone + Eq> Dist<T> {
    pub fn new(entries: Vec<(T, u64)>) -> Result<Self> {
        if entries.is_empty() || entries.iter().all(|(_, w)| *w == 0) {
            return Err(Error::InvalidParameter(
                "distribution needs at least one positive weight".into(),
            ));
        }
        let entries: Vec<(T, u64)> = entries.into_iter().filter(|(_, w)| *w > 0).collect();
        Ok(Dist { entries })
    }

    pub fn point(value: T) -> Self {
        Dist {
            entries: vec![(value, 1)],
        }
    }

    pub fn uniform(items: Vec<T>) -> Result<Self> {
        Self::new(items.into_iter().map(|v| (v, 1)).collect())
    }

    pub fn denom(&self) -> u64 {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|(v, _)| v)
    }

    pub fn entries(&self) -> &[(T, u64)] {
        &self.entries
    }

    pub fn weight_of(&self, value: &T) -> u64 {
        self.entries
            .iter()
            .find(|(v, _)| v == value)
            .map(|(_, w)| *w)
            .unwrap_or(0)
    }

    /// Is the distribution a point mass on `value`?
    pub fn is_point(&self, value: &T) -> bool {
        self.entries.len() == 1 && &self.entries[0].0 == value
    }

    pub fn sample(&self, rng: &mut impl Rng) -> &T {
        let total = self.denom();
        let mut pick = rng.gen_range(0..total);
        for (v, w) in &self.entries {
            if pick < *w {
                return v;
            }
            pick -= w;
        }
        unreachable!("weights sum to denom")
    }
}

/// An exact nonnegative fraction with on-the-fly reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub num: u128,
    pub den: u128,
}

#[allow(clippy::should_implement_trait)]
impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };

    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0);
        let g = gcd(num, den);
        Fraction {
            num: num / g.max(1),
            den: den / g.max(1),
        }
    }

    pub fn add(self, other: Fraction) -> Fraction {
        Fraction::new(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )
    }

    pub fn mul(self, other: Fraction) -> Fraction {
        Fraction::new(self.num * other.num, self.den * other.den)
    }

    /// `self >= p / q`, compared exactly.
    pub fn at_least(self, p: u128, q: u128) -> bool {
        self.num * q >= p * self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---------------------------------------------------------------------------
// The decoder model
// ---------------------------------------------------------------------------

/// Per-target-bit description of an adaptive two-query decoder: the first
/// query distribution, the second query distribution for each (first query,
/// answer), and the output distribution for each full path. Non-adaptive
/// decoders are the special case where the second query ignores the answer.
#[derive(Clone, Debug)]
pub struct TargetModel {
    pub first: Dist<usize>,
    pub second: BTreeMap<(usize, u8), Dist<usize>>,
    pub output: BTreeMap<(usize, u8, usize, u8), Dist<QuerySymbol>>,
}

impl TargetModel {
    fn validate(&self, m: usize) -> Result<()> {
        for &j in self.first.support() {
            if j == 0 || j > m {
                return Err(Error::IndexOutOfRange { index: j, bound: m });
            }
            for b in 0..2u8 {
                let second = self.second.get(&(j, b)).ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "missing second-query distribution for first query {j}, answer {b}"
                    ))
                })?;
                for &k in second.support() {
                    if k == 0 || k > m {
                        return Err(Error::IndexOutOfRange { index: k, bound: m });
                    }
                    for b2 in 0..2u8 {
                        if !self.output.contains_key(&(j, b, k, b2)) {
                            return Err(Error::InvalidParameter(format!(
                                "missing output distribution for path ({j}, {b}, {k}, {b2})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Does every output distribution along first query `j` avoid `⊥`?
    fn bot_free_first_query(&self, j: usize) -> bool {
        (0..2u8).all(|b| {
            self.second.get(&(j, b)).is_none_or(|second| {
                second.support().all(|&k| {
                    (0..2u8).all(|b2| self.output[&(j, b, k, b2)].weight_of(&QuerySymbol::Bot) == 0)
                })
            })
        })
    }
}

/// An explicit two-query decoder for every target bit of a truth-table code.
#[derive(Clone, Debug)]
pub struct TwoQueryDecoderModel {
    pub m: usize,
    pub targets: Vec<TargetModel>,
}

impl TwoQueryDecoderModel {
    pub fn new(m: usize, targets: Vec<TargetModel>) -> Result<Self> {
        for t in &targets {
            t.validate(m)?;
        }
        Ok(TwoQueryDecoderModel { m, targets })
    }

    pub fn target(&self, i: usize) -> &TargetModel {
        &self.targets[i - 1]
    }

    /// Non-adaptive check: the second query distribution ignores the first
    /// answer for every target and first query.
    pub fn is_non_adaptive(&self) -> bool {
        self.targets.iter().all(|t| {
            t.first
                .support()
                .all(|&j| t.second.get(&(j, 0)) == t.second.get(&(j, 1)))
        })
    }

    /// `F_i^0`: first queries along which no output distribution puts mass
    /// on `⊥`; the complement of the support is `F_i^{>0}`.
    pub fn bot_free_partition(&self, i: usize) -> (Vec<usize>, Vec<usize>) {
        let t = self.target(i);
        let mut free = Vec::new();
        let mut tainted = Vec::new();
        for &j in t.first.support() {
            if t.bot_free_first_query(j) {
                free.push(j);
            } else {
                tainted.push(j);
            }
        }
        (free, tainted)
    }

    /// Simulate one decode of target `i` against the received word.
    pub fn run(&self, i: usize, word: &BitString, rng: &mut impl Rng) -> QuerySymbol {
        let t = self.target(i);
        let j = *t.first.sample(rng);
        let b = word.bit(j);
        let k = *t.second[&(j, b)].sample(rng);
        let b2 = word.bit(k);
        *t.output[&(j, b, k, b2)].sample(rng)
    }

    /// Exact distribution of the output on a fixed word: probabilities of
    /// (zero, one, bot).
    pub fn exact_output(&self, i: usize, word: &BitString) -> [Fraction; 3] {
        let t = self.target(i);
        let mut acc = [Fraction::ZERO; 3];
        let d1 = t.first.denom() as u128;
        for (jv, w1) in t.first.entries() {
            let j = *jv;
            let b = word.bit(j);
            let second = &t.second[&(j, b)];
            let d2 = second.denom() as u128;
            for (kv, w2) in second.entries() {
                let k = *kv;
                let b2 = word.bit(k);
                let out = &t.output[&(j, b, k, b2)];
                let d3 = out.denom() as u128;
                for (sym, w3) in out.entries() {
                    let p = Fraction::new(*w1 as u128 * *w2 as u128 * *w3 as u128, d1 * d2 * d3);
                    let slot = match sym {
                        QuerySymbol::Zero => 0,
                        QuerySymbol::One => 1,
                        QuerySymbol::Bot => 2,
                    };
                    acc[slot] = acc[slot].add(p);
                }
            }
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Model builders for the corpus codes
// ---------------------------------------------------------------------------

/// The decoder that queries position `i` twice and returns the first answer
/// (for codes whose coordinate `i` IS the message bit, like the identity
/// code).
pub fn read_index_decoder(code: &TruthTableCode) -> Result<TwoQueryDecoderModel> {
    let n = code.n();
    let mut targets = Vec::with_capacity(n);
    for i in 1..=n {
        let mut second = BTreeMap::new();
        let mut output = BTreeMap::new();
        for b in 0..2u8 {
            second.insert((i, b), Dist::point(i));
            for b2 in 0..2u8 {
                output.insert((i, b, i, b2), Dist::point(QuerySymbol::from_bit(b)));
            }
        }
        targets.push(TargetModel {
            first: Dist::point(i),
            second,
            output,
        });
    }
    TwoQueryDecoderModel::new(code.m(), targets)
}

/// The XOR-pair decoder: for each target bit, first queries are uniform
/// over all positions `j` that have a partner `k` with
/// `C_j(x) XOR C_k(x) = x_i` for every message; the second query is that
/// partner and the output is the XOR of the answers.
///
/// For a full Hadamard code every position has a partner; for punctured
/// variants positions without a partner are excluded from the first-query
/// support.
pub fn xor_pair_decoder(code: &TruthTableCode) -> Result<TwoQueryDecoderModel> {
    let n = code.n();
    let m = code.m();
    let total = 1usize << n;
    let mut targets = Vec::with_capacity(n);
    for i in 1..=n {
        let mut partner: Vec<Option<usize>> = vec![None; m];
        for j in 1..=m {
            'search: for k in 1..=m {
                if k == j {
                    continue;
                }
                for u in 0..total {
                    if code.eval(j, u) ^ code.eval(k, u) != code.x_bit(i, u) {
                        continue 'search;
                    }
                }
                partner[j - 1] = Some(k);
                break;
            }
        }
        let endpoints: Vec<usize> = (1..=m).filter(|&j| partner[j - 1].is_some()).collect();
        if endpoints.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "no XOR pair found for target bit {i}"
            )));
        }
        let mut second = BTreeMap::new();
        let mut output = BTreeMap::new();
        for &j in &endpoints {
            let k = partner[j - 1].unwrap();
            for b in 0..2u8 {
                second.insert((j, b), Dist::point(k));
                for b2 in 0..2u8 {
                    output.insert((j, b, k, b2), Dist::point(QuerySymbol::from_bit(b ^ b2)));
                }
            }
        }
        targets.push(TargetModel {
            first: Dist::uniform(endpoints)?,
            second,
            output,
        });
    }
    TwoQueryDecoderModel::new(m, targets)
}

// ---------------------------------------------------------------------------
// Completeness and claim checking
// ---------------------------------------------------------------------------

/// A decode path that can occur on a valid codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathWitness {
    pub message: usize,
    pub target: usize,
    pub first: usize,
    pub first_answer: u8,
    pub second: usize,
    pub second_answer: u8,
}

#[derive(Clone, Debug, Default)]
pub struct CompletenessReport {
    pub violations: Vec<PathWitness>,
}

impl CompletenessReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that on every uncorrupted codeword, every nonzero-probability path
/// outputs the target bit with probability 1.
pub fn check_completeness(
    code: &TruthTableCode,
    model: &TwoQueryDecoderModel,
) -> Result<CompletenessReport> {
    if model.m != code.m() {
        return Err(Error::LengthMismatch {
            left: model.m,
            right: code.m(),
        });
    }
    let mut violations = Vec::new();
    for u in 0..1usize << code.n() {
        for i in 1..=code.n() {
            let want = QuerySymbol::from_bit(code.x_bit(i, u));
            let t = model.target(i);
            for &j in t.first.support() {
                let b = code.eval(j, u);
                for &k in t.second[&(j, b)].support() {
                    let b2 = code.eval(k, u);
                    if !t.output[&(j, b, k, b2)].is_point(&want) {
                        violations.push(PathWitness {
                            message: u,
                            target: i,
                            first: j,
                            first_answer: b,
                            second: k,
                            second_answer: b2,
                        });
                    }
                }
            }
        }
    }
    Ok(CompletenessReport { violations })
}

/// Which of the three structure cases a fixable first query falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrichotomyCase {
    SecondInsideFixable,
    OutputsFirstAnswer,
    OutputsFlippedAnswer,
}

#[derive(Clone, Debug)]
pub struct ClaimViolation {
    pub target: usize,
    pub first: usize,
    pub answer: Option<u8>,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct ClaimReport {
    /// Violations of "first queries outside `S_i` never abort".
    pub bot_outside_fixable: Vec<ClaimViolation>,
    /// Violations of the three-case structure for first queries in `S_i`.
    pub trichotomy: Vec<ClaimViolation>,
    /// Cases observed per (target, first query in `S_i`, answer).
    pub cases: Vec<(usize, usize, u8, TrichotomyCase)>,
}

impl ClaimReport {
    pub fn pass(&self) -> bool {
        self.bot_outside_fixable.is_empty() && self.trichotomy.is_empty()
    }
}

/// Verify the query structure forced by perfect completeness: every first
/// query outside `S_i` leads only to `⊥`-free outputs, and every first
/// query inside `S_i` either keeps its second query inside `S_i` or outputs
/// a constant independent of the second answer.
///
/// Refuses decoders that fail completeness (the structure is only implied
/// for complete decoders).
pub fn check_claims(
    code: &TruthTableCode,
    model: &TwoQueryDecoderModel,
    profile: &FixabilityProfile,
) -> Result<ClaimReport> {
    let completeness = check_completeness(code, model)?;
    if !completeness.pass() {
        return Err(Error::CompletenessViolation(format!(
            "{} violating paths; claims assume a complete decoder",
            completeness.violations.len()
        )));
    }
    let mut report = ClaimReport::default();
    for i in 1..=code.n() {
        let s_i = &profile.s_sets[i - 1];
        let t = model.target(i);
        let (_, tainted) = model.bot_free_partition(i);
        for &j in &tainted {
            if !s_i.contains(&j) {
                report.bot_outside_fixable.push(ClaimViolation {
                    target: i,
                    first: j,
                    answer: None,
                    detail: format!("first query {j} outside S_{i} reaches an output with ⊥ mass"),
                });
            }
        }
        for &j in t.first.support() {
            if !s_i.contains(&j) {
                continue;
            }
            for b in 0..2u8 {
                let second = &t.second[&(j, b)];
                let outside: Vec<usize> = second
                    .support()
                    .copied()
                    .filter(|k| !s_i.contains(k))
                    .collect();
                if outside.is_empty() {
                    report
                        .cases
                        .push((i, j, b, TrichotomyCase::SecondInsideFixable));
                    continue;
                }
                let constant_to = |val: QuerySymbol| {
                    outside
                        .iter()
                        .all(|&k| (0..2u8).all(|b2| t.output[&(j, b, k, b2)].is_point(&val)))
                };
                if constant_to(QuerySymbol::from_bit(b)) {
                    report
                        .cases
                        .push((i, j, b, TrichotomyCase::OutputsFirstAnswer));
                } else if constant_to(QuerySymbol::from_bit(1 - b)) {
                    report
                        .cases
                        .push((i, j, b, TrichotomyCase::OutputsFlippedAnswer));
                } else {
                    report.trichotomy.push(ClaimViolation {
                        target: i,
                        first: j,
                        answer: Some(b),
                        detail: format!(
                            "first query {j} in S_{i} with answer {b}: second queries \
                             escape S_{i} but the output is not a constant"
                        ),
                    });
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Conditional flip
// ---------------------------------------------------------------------------

/// Build the word that agrees with `s` off `S` and with the encoding of a
/// chosen message with `x_i = 1 - b` on `S`. Returns the word and the
/// chosen message index.
pub fn conditional_flip(
    code: &TruthTableCode,
    s_set: &std::collections::BTreeSet<usize>,
    s: &BitString,
    i: usize,
    b: u8,
) -> Result<(BitString, usize)> {
    if s.len() != code.m() {
        return Err(Error::LengthMismatch {
            left: s.len(),
            right: code.m(),
        });
    }
    let u = (0..1usize << code.n())
        .find(|&u| code.x_bit(i, u) == 1 - b)
        .expect("both bit values occur among messages");
    let mut z = s.clone();
    for &j in s_set {
        if j == 0 || j > code.m() {
            return Err(Error::IndexOutOfRange {
                index: j,
                bound: code.m(),
            });
        }
        z.set(j, code.eval(j, u));
    }
    Ok((z, u))
}

// ---------------------------------------------------------------------------
// Reduction to a never-abort decoder
// ---------------------------------------------------------------------------

/// The decoder obtained by conditioning the first query to land outside
/// `S_i` and finishing the simulation.
pub struct ReducedDecoder<'a> {
    model: &'a TwoQueryDecoderModel,
    pub target: usize,
    pub allowed_first: Dist<usize>,
}

/// Restrict the first-query distribution to the complement of `S_i`.
///
/// Fails when the conditioning event has probability zero (every possible
/// first query is fixable by `x_i`), which for a genuine relaxed decoder
/// would contradict relaxed decoding.
pub fn reduce_to_ldc<'a>(
    model: &'a TwoQueryDecoderModel,
    profile: &FixabilityProfile,
    i: usize,
) -> Result<ReducedDecoder<'a>> {
    let s_i = &profile.s_sets[i - 1];
    let t = model.target(i);
    let allowed: Vec<(usize, u64)> = t
        .first
        .entries()
        .iter()
        .filter(|(j, _)| !s_i.contains(j))
        .cloned()
        .collect();
    if allowed.is_empty() {
        return Err(Error::ReductionInfeasible(format!(
            "every first query of target {i} lies inside S_{i} \
             (|S_{i}| = {}); the conditional distribution is undefined",
            s_i.len()
        )));
    }
    Ok(ReducedDecoder {
        model,
        target: i,
        allowed_first: Dist::new(allowed)?,
    })
}

impl ReducedDecoder<'_> {
    /// Sample one decode path against the received word.
    pub fn run(&self, word: &BitString, rng: &mut impl Rng) -> QuerySymbol {
        let t = self.model.target(self.target);
        let j = *self.allowed_first.sample(rng);
        let b = word.bit(j);
        let k = *t.second[&(j, b)].sample(rng);
        let b2 = word.bit(k);
        *t.output[&(j, b, k, b2)].sample(rng)
    }

    /// Exact probability of outputting `target_bit` on the word.
    pub fn exact_success(&self, word: &BitString, target_bit: u8) -> Fraction {
        let t = self.model.target(self.target);
        let want = QuerySymbol::from_bit(target_bit);
        let d1 = self.allowed_first.denom() as u128;
        let mut acc = Fraction::ZERO;
        for (jv, w1) in self.allowed_first.entries() {
            let j = *jv;
            let b = word.bit(j);
            let second = &t.second[&(j, b)];
            let d2 = second.denom() as u128;
            for (kv, w2) in second.entries() {
                let k = *kv;
                let b2 = word.bit(k);
                let out = &t.output[&(j, b, k, b2)];
                let w3 = out.weight_of(&want);
                if w3 > 0 {
                    acc = acc.add(Fraction::new(
                        *w1 as u128 * *w2 as u128 * w3 as u128,
                        d1 * d2 * out.denom() as u128,
                    ));
                }
            }
        }
        acc
    }

    /// Do all nonzero-probability paths on the word avoid `⊥`?
    pub fn never_bot_on(&self, word: &BitString) -> bool {
        let t = self.model.target(self.target);
        self.allowed_first.support().all(|&j| {
            let b = word.bit(j);
            t.second[&(j, b)].support().all(|&k| {
                let b2 = word.bit(k);
                t.output[&(j, b, k, b2)].weight_of(&QuerySymbol::Bot) == 0
            })
        })
    }
}
