//! Outer codes: pluggable weak Hamming relaxed locally decodable /
//! correctable codes driven through a query/answer session protocol.
//!
//! The concatenation decoder interposes block probing between outer queries,
//! so outer decoders run as sessions: the session yields a position to
//! query, the caller supplies the answer, and the session eventually
//! finishes with a bit or the abort symbol. A `⊥` answer forces the outcome
//! `⊥` immediately.
//!
//! Two instantiations are provided: a Hadamard code (a genuine weak Hamming
//! RLDC and RLCC with perfect completeness and advantage `1/2 - 2*delta_out`,
//! enumerable at desk scale) and the identity code as a test double.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{BitString, QuerySymbol};
use crate::error::{Error, Result};
use crate::rng;

/// Declared parameters of an outer code.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OuterCodeSpec {
    /// Message length.
    pub n: usize,
    /// Codeword length.
    pub k: usize,
    /// Query budget per decode session.
    pub q_out: usize,
    /// Hamming error tolerance (fraction of codeword positions).
    pub delta_out: f64,
    /// Advantage: success probability is at least 1/2 + eps_out.
    pub eps_out: f64,
    pub mode: OuterMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OuterMode {
    Rldc,
    Rlcc,
    Both,
}

/// One step of a decoder session.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SessionStep {
    /// Query the 1-based position and call `answer`.
    Query(usize),
    Done(QuerySymbol),
}

/// A single decode/correct attempt, driven query by query.
pub trait OuterSession {
    fn begin(&mut self) -> SessionStep;
    fn answer(&mut self, sym: QuerySymbol) -> SessionStep;
}

/// An outer code usable inside the concatenation construction.
pub trait OuterCode {
    fn spec(&self) -> OuterCodeSpec;
    fn encode(&self, x: &BitString) -> Result<BitString>;
    /// Session recovering message bit `i` (1-based).
    fn decode_session(&self, i: usize, seed: u64) -> Result<Box<dyn OuterSession>>;
    /// Session recovering codeword bit `pos` (1-based).
    fn correct_session(&self, pos: usize, seed: u64) -> Result<Box<dyn OuterSession>>;
}

/// Wraps a session, enforcing the query budget and the rule that a `⊥`
/// answer immediately forces outcome `⊥`. Records the query/answer log.
pub struct TrackedSession {
    inner: Box<dyn OuterSession>,
    budget: usize,
    pub issued: Vec<usize>,
    pub answers: Vec<QuerySymbol>,
    outcome: Option<QuerySymbol>,
}

impl TrackedSession {
    pub fn new(inner: Box<dyn OuterSession>, budget: usize) -> Self {
        TrackedSession {
            inner,
            budget,
            issued: Vec::new(),
            answers: Vec::new(),
            outcome: None,
        }
    }

    pub fn outcome(&self) -> Option<QuerySymbol> {
        self.outcome
    }

    fn admit(&mut self, step: SessionStep) -> SessionStep {
        match step {
            SessionStep::Query(pos) => {
                assert!(
                    self.issued.len() < self.budget,
                    "outer session exceeded query budget {}",
                    self.budget
                );
                self.issued.push(pos);
                step
            }
            SessionStep::Done(v) => {
                self.outcome = Some(v);
                step
            }
        }
    }

    pub fn begin(&mut self) -> SessionStep {
        let step = self.inner.begin();
        self.admit(step)
    }

    pub fn answer(&mut self, sym: QuerySymbol) -> SessionStep {
        self.answers.push(sym);
        if sym.is_bot() {
            // abort convention: a ⊥ answer ends the session with ⊥
            self.outcome = Some(QuerySymbol::Bot);
            return SessionStep::Done(QuerySymbol::Bot);
        }
        let step = self.inner.answer(sym);
        self.admit(step)
    }
}

/// Drive a session to completion against an oracle closure.
pub fn run_session(
    session: Box<dyn OuterSession>,
    budget: usize,
    mut oracle: impl FnMut(usize) -> QuerySymbol,
) -> QuerySymbol {
    let mut tracked = TrackedSession::new(session, budget);
    let mut step = tracked.begin();
    loop {
        match step {
            SessionStep::Query(pos) => {
                let ans = oracle(pos);
                step = tracked.answer(ans);
            }
            SessionStep::Done(v) => return v,
        }
    }
}

// ---------------------------------------------------------------------------
// Hadamard code
// ---------------------------------------------------------------------------

/// Hadamard code: position `a in {0,1}^n` (binary order) carries `<x, a> mod 2`.
///
/// The decoder for `x_i` samples uniform `a`, queries positions `a` and
/// `a XOR e_i`, and returns the XOR of the answers; under at most a
/// `delta_out` fraction of Hamming errors both queries are clean with
/// probability at least `1 - 2*delta_out`.
#[derive(Clone, Debug)]
pub struct HadamardCode {
    n: usize,
    delta_out: f64,
}

/// Desk-scale cap on the message length (codeword length `2^n`).
pub const HADAMARD_N_CAP: usize = 14;

impl HadamardCode {
    pub fn new(n: usize, delta_out: f64) -> Result<Self> {
        if n == 0 || n > HADAMARD_N_CAP {
            return Err(Error::InvalidParameter(format!(
                "hadamard message length {n} outside 1..={HADAMARD_N_CAP}"
            )));
        }
        if !(delta_out > 0.0 && delta_out < 0.25) {
            return Err(Error::InvalidParameter(format!(
                "hadamard delta_out = {delta_out} outside (0, 1/4)"
            )));
        }
        Ok(HadamardCode { n, delta_out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `1/2 - 2*delta_out`.
    pub fn eps_out(&self) -> f64 {
        0.5 - 2.0 * self.delta_out
    }

    /// Inner product `<x, a> mod 2` where `a` is the bit pattern of
    /// `pos - 1` (positions are 1-based, binary order).
    fn codeword_bit(x: &BitString, pos: usize) -> u8 {
        let n = x.len();
        let a = pos - 1;
        let mut acc = 0u8;
        for i in 1..=n {
            let a_i = ((a >> (n - i)) & 1) as u8;
            acc ^= x.bit(i) & a_i;
        }
        acc
    }

    /// Deterministic decode core: given internal randomness `a` (a position
    /// index in `0..2^n`), query `a` and `a XOR e_i`, XOR the answers.
    /// Exposed so tests can enumerate the decoder's randomness exhaustively.
    pub fn decode_with_randomness(
        &self,
        i: usize,
        a: usize,
        mut oracle: impl FnMut(usize) -> QuerySymbol,
    ) -> QuerySymbol {
        let e_i = 1usize << (self.n - i);
        let first = oracle(a + 1);
        let Some(b1) = first.as_bit() else {
            return QuerySymbol::Bot;
        };
        let second = oracle((a ^ e_i) + 1);
        let Some(b2) = second.as_bit() else {
            return QuerySymbol::Bot;
        };
        QuerySymbol::from_bit(b1 ^ b2)
    }

    /// Deterministic correct core: given randomness `r`, recover position
    /// `pos` as the XOR of positions `(pos-1) XOR r` and `r`.
    pub fn correct_with_randomness(
        &self,
        pos: usize,
        r: usize,
        mut oracle: impl FnMut(usize) -> QuerySymbol,
    ) -> QuerySymbol {
        let a = pos - 1;
        let first = oracle((a ^ r) + 1);
        let Some(b1) = first.as_bit() else {
            return QuerySymbol::Bot;
        };
        let second = oracle(r + 1);
        let Some(b2) = second.as_bit() else {
            return QuerySymbol::Bot;
        };
        QuerySymbol::from_bit(b1 ^ b2)
    }

    /// One-shot decode: sample `a` from the seed, run the deterministic core.
    pub fn decode(
        &self,
        i: usize,
        oracle: impl FnMut(usize) -> QuerySymbol,
        seed: u64,
    ) -> Result<QuerySymbol> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.n,
            });
        }
        let mut rng = rng::stream(seed);
        let a = rng.gen_range(0..(1usize << self.n));
        Ok(self.decode_with_randomness(i, a, oracle))
    }

    /// One-shot correct with seeded randomness.
    pub fn correct(
        &self,
        pos: usize,
        oracle: impl FnMut(usize) -> QuerySymbol,
        seed: u64,
    ) -> Result<QuerySymbol> {
        if pos == 0 || pos > (1usize << self.n) {
            return Err(Error::IndexOutOfRange {
                index: pos,
                bound: 1usize << self.n,
            });
        }
        let mut rng = rng::stream(seed);
        let r = rng.gen_range(0..(1usize << self.n));
        Ok(self.correct_with_randomness(pos, r, oracle))
    }
}

impl OuterCode for HadamardCode {
    fn spec(&self) -> OuterCodeSpec {
        OuterCodeSpec {
            n: self.n,
            k: 1usize << self.n,
            q_out: 2,
            delta_out: self.delta_out,
            eps_out: self.eps_out(),
            mode: OuterMode::Both,
        }
    }

    fn encode(&self, x: &BitString) -> Result<BitString> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.n,
            });
        }
        let k = 1usize << self.n;
        let mut out = BitString::zeros(k);
        for pos in 1..=k {
            out.set(pos, Self::codeword_bit(x, pos));
        }
        Ok(out)
    }

    fn decode_session(&self, i: usize, seed: u64) -> Result<Box<dyn OuterSession>> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.n,
            });
        }
        let mut rng = rng::stream(seed);
        let a = rng.gen_range(0..(1usize << self.n));
        let e_i = 1usize << (self.n - i);
        Ok(Box::new(XorPairSession::new(a + 1, (a ^ e_i) + 1)))
    }

    fn correct_session(&self, pos: usize, seed: u64) -> Result<Box<dyn OuterSession>> {
        let k = 1usize << self.n;
        if pos == 0 || pos > k {
            return Err(Error::IndexOutOfRange {
                index: pos,
                bound: k,
            });
        }
        let mut rng = rng::stream(seed);
        let r = rng.gen_range(0..k);
        Ok(Box::new(XorPairSession::new(((pos - 1) ^ r) + 1, r + 1)))
    }
}

/// Queries two positions and returns the XOR of the answers.
struct XorPairSession {
    first: usize,
    second: usize,
    state: u8,
    b1: u8,
}

impl XorPairSession {
    fn new(first: usize, second: usize) -> Self {
        XorPairSession {
            first,
            second,
            state: 0,
            b1: 0,
        }
    }
}

impl OuterSession for XorPairSession {
    fn begin(&mut self) -> SessionStep {
        self.state = 1;
        SessionStep::Query(self.first)
    }

    fn answer(&mut self, sym: QuerySymbol) -> SessionStep {
        let Some(b) = sym.as_bit() else {
            return SessionStep::Done(QuerySymbol::Bot);
        };
        match self.state {
            1 => {
                self.b1 = b;
                self.state = 2;
                SessionStep::Query(self.second)
            }
            2 => {
                self.state = 3;
                SessionStep::Done(QuerySymbol::from_bit(self.b1 ^ b))
            }
            _ => panic!("session already finished"),
        }
    }
}

// ---------------------------------------------------------------------------
// Identity code (test double)
// ---------------------------------------------------------------------------

/// The identity code: `k = n`, the decoder queries position `i` once and
/// returns the answer. `delta_out = 0`: no error tolerance is claimed.
#[derive(Clone, Copy, Debug)]
pub struct IdentityCode {
    n: usize,
}

impl IdentityCode {
    pub fn new(n: usize) -> Self {
        IdentityCode { n }
    }
}

impl OuterCode for IdentityCode {
    fn spec(&self) -> OuterCodeSpec {
        OuterCodeSpec {
            n: self.n,
            k: self.n,
            q_out: 1,
            delta_out: 0.0,
            eps_out: 0.5,
            mode: OuterMode::Both,
        }
    }

    fn encode(&self, x: &BitString) -> Result<BitString> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.n,
            });
        }
        Ok(x.clone())
    }

    fn decode_session(&self, i: usize, _seed: u64) -> Result<Box<dyn OuterSession>> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.n,
            });
        }
        Ok(Box::new(ReadOnceSession { pos: i }))
    }

    fn correct_session(&self, pos: usize, seed: u64) -> Result<Box<dyn OuterSession>> {
        self.decode_session(pos, seed)
    }
}

struct ReadOnceSession {
    pos: usize,
}

impl OuterSession for ReadOnceSession {
    fn begin(&mut self) -> SessionStep {
        SessionStep::Query(self.pos)
    }

    fn answer(&mut self, sym: QuerySymbol) -> SessionStep {
        SessionStep::Done(sym)
    }
}

/// Select an outer code by name, as used in experiment configs.
pub fn outer_by_name(name: &str, n: usize, delta_out: f64) -> Result<Box<dyn OuterCode>> {
    match name {
        "hadamard" => Ok(Box::new(HadamardCode::new(n, delta_out)?)),
        "identity" => Ok(Box::new(IdentityCode::new(n))),
        other => Err(Error::InvalidParameter(format!(
            "unknown outer code '{other}' (expected \"hadamard\" or \"identity\")"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn oracle_over(word: &BitString) -> impl FnMut(usize) -> QuerySymbol + '_ {
        move |pos| match word.get(pos) {
            Some(b) => QuerySymbol::from_bit(b),
            None => QuerySymbol::Bot,
        }
    }

    #[test]
    fn hadamard_encode_examples() {
        let code = HadamardCode::new(2, 0.2).unwrap();
        assert_eq!(code.encode(&bs("10")).unwrap(), bs("0011"));
        assert_eq!(code.encode(&bs("00")).unwrap(), bs("0000"));
        // linearity: C(x) XOR C(x') = C(x XOR x'), exhaustively at n=3
        let code3 = HadamardCode::new(3, 0.2).unwrap();
        for u in 0..8usize {
            for v in 0..8usize {
                let cu = code3.encode(&BitString::from_index(u, 3)).unwrap();
                let cv = code3.encode(&BitString::from_index(v, 3)).unwrap();
                let cxor = code3.encode(&BitString::from_index(u ^ v, 3)).unwrap();
                for pos in 1..=8 {
                    assert_eq!(cu.bit(pos) ^ cv.bit(pos), cxor.bit(pos));
                }
            }
        }
    }

    #[test]
    fn hadamard_perfect_completeness_exhaustive() {
        for n in 1..=6usize {
            let code = HadamardCode::new(n, 0.2).unwrap();
            for u in 0..(1usize << n) {
                let x = BitString::from_index(u, n);
                let cw = code.encode(&x).unwrap();
                for i in 1..=n {
                    for a in 0..(1usize << n) {
                        let got = code.decode_with_randomness(i, a, oracle_over(&cw));
                        assert_eq!(got, QuerySymbol::from_bit(x.bit(i)));
                    }
                }
                for r in 0..(1usize << n) {
                    for pos in 1..=(1usize << n) {
                        let got = code.correct_with_randomness(pos, r, oracle_over(&cw));
                        assert_eq!(got, QuerySymbol::from_bit(cw.bit(pos)));
                    }
                }
            }
        }
    }

    #[test]
    fn hadamard_single_corruption_success_rate() {
        // n = 3, one corrupted position: exactly 2 of the 8 randomness
        // choices touch it, so the success rate is 6/8 for every index.
        let code = HadamardCode::new(3, 0.2).unwrap();
        for u in 0..8usize {
            let x = BitString::from_index(u, 3);
            let cw = code.encode(&x).unwrap();
            for err in 1..=8usize {
                let mut w = cw.clone();
                w.flip(err);
                for i in 1..=3 {
                    let mut good = 0;
                    for a in 0..8usize {
                        if code.decode_with_randomness(i, a, oracle_over(&w))
                            == QuerySymbol::from_bit(x.bit(i))
                        {
                            good += 1;
                        }
                    }
                    assert_eq!(good, 6, "x={x} err={err} i={i}");
                }
            }
        }
    }

    #[test]
    fn hadamard_rlcc_single_corruption_success_rate() {
        let code = HadamardCode::new(3, 0.2).unwrap();
        let x = bs("101");
        let cw = code.encode(&x).unwrap();
        for err in 1..=8usize {
            let mut w = cw.clone();
            w.flip(err);
            for pos in 1..=8usize {
                let good = (0..8usize)
                    .filter(|&r| {
                        code.correct_with_randomness(pos, r, oracle_over(&w))
                            == QuerySymbol::from_bit(cw.bit(pos))
                    })
                    .count();
                // pos 1 reads the same position twice, so the flip cancels
                let expected = if pos == 1 { 8 } else { 6 };
                assert_eq!(good, expected, "err={err} pos={pos}");
            }
        }
    }

    // exact success probability (enumerating the internal randomness) under
    // every error set of size at most delta_out * 2^n stays >= 1 - 2*delta_out
    #[test]
    fn hadamard_relaxed_decoding_exact_bound() {
        let delta_out = 0.2f64;
        for n in 3..=4usize {
            let code = HadamardCode::new(n, delta_out).unwrap();
            let k = 1usize << n;
            let max_errors = (delta_out * k as f64).floor() as usize;
            let floor = 1.0 - 2.0 * delta_out;
            for u in 0..k {
                let x = BitString::from_index(u, n);
                let cw = code.encode(&x).unwrap();
                for errors in error_sets(k, max_errors) {
                    let mut w = cw.clone();
                    for &pos in &errors {
                        w.flip(pos);
                    }
                    for i in 1..=n {
                        let good = (0..k)
                            .filter(|&a| {
                                code.decode_with_randomness(i, a, oracle_over(&w))
                                    == QuerySymbol::from_bit(x.bit(i))
                            })
                            .count();
                        let rate = good as f64 / k as f64;
                        assert!(
                            rate + 1e-12 >= floor,
                            "decode n={n} u={u} i={i} {errors:?}: {rate}"
                        );
                    }
                    for pos in 1..=k {
                        let good = (0..k)
                            .filter(|&r| {
                                code.correct_with_randomness(pos, r, oracle_over(&w))
                                    == QuerySymbol::from_bit(cw.bit(pos))
                            })
                            .count();
                        let rate = good as f64 / k as f64;
                        assert!(
                            rate + 1e-12 >= floor,
                            "correct n={n} u={u} pos={pos}: {rate}"
                        );
                    }
                }
            }
        }
    }

    // all subsets of {1..k} with at most max_errors elements
    fn error_sets(k: usize, max_errors: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..max_errors {
            let mut next = Vec::new();
            for set in &frontier {
                let start = set.last().map_or(1, |&p| p + 1);
                for pos in start..=k {
                    let mut bigger = set.clone();
                    bigger.push(pos);
                    next.push(bigger);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    #[test]
    fn bot_answers_propagate() {
        let code = HadamardCode::new(3, 0.2).unwrap();
        let got = code.decode_with_randomness(1, 3, |_| QuerySymbol::Bot);
        assert_eq!(got, QuerySymbol::Bot);
        let got = code.correct_with_randomness(5, 2, |_| QuerySymbol::Bot);
        assert_eq!(got, QuerySymbol::Bot);
    }

    #[test]
    fn identity_code_behaviour() {
        let code = IdentityCode::new(4);
        assert_eq!(code.spec().q_out, 1);
        let x = bs("0110");
        assert_eq!(code.encode(&x).unwrap(), x);
        let session = code.decode_session(2, 0).unwrap();
        let got = run_session(session, 1, oracle_over(&x));
        assert_eq!(got, QuerySymbol::One);
        let session = code.decode_session(2, 0).unwrap();
        let got = run_session(session, 1, |_| QuerySymbol::Bot);
        assert_eq!(got, QuerySymbol::Bot);
    }

    #[test]
    #[should_panic(expected = "query budget")]
    fn budget_is_enforced() {
        // a 2-query session driven with budget 1 must panic on the 2nd query
        let code = HadamardCode::new(3, 0.2).unwrap();
        let session = code.decode_session(1, 7).unwrap();
        let word = code.encode(&bs("101")).unwrap();
        run_session(session, 1, oracle_over(&word));
    }

    #[test]
    fn sessions_are_seed_deterministic() {
        let code = HadamardCode::new(4, 0.2).unwrap();
        let x = bs("1011");
        let cw = code.encode(&x).unwrap();
        for seed in 0..20u64 {
            let s1 = code.decode_session(2, seed).unwrap();
            let s2 = code.decode_session(2, seed).unwrap();
            let mut log1 = Vec::new();
            let mut log2 = Vec::new();
            let mut o1 = oracle_over(&cw);
            let mut o2 = oracle_over(&cw);
            let r1 = run_session(s1, 2, |p| {
                log1.push(p);
                o1(p)
            });
            let r2 = run_session(s2, 2, |p| {
                log2.push(p);
                o2(p)
            });
            assert_eq!(log1, log2);
            assert_eq!(r1, r2);
        }
    }
}
