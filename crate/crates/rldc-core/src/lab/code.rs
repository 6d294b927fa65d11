//! Explicit truth-table codes: every codeword coordinate is a Boolean
//! function of the message, materialized as a bitset over all `2^n`
//! messages.
//!
//! Messages are indexed in binary order: message index `u` corresponds to
//! the word `BitString::from_index(u, n)`, so bit `i` (1-based) of message
//! `u` is bit `n - i` of `u`.

use std::fmt::Write as _;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Hard cap on message length for exhaustive evaluation.
pub const TRUTH_TABLE_N_CAP: usize = 16;
/// Generators with `2^n` coordinates stay below this message length.
pub const WIDE_GENERATOR_N_CAP: usize = 12;

/// One coordinate's truth table over all `2^n` messages.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordTable {
    words: Vec<u64>,
    len: usize,
}

impl CoordTable {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> u8) -> Self {
        let len = 1usize << n;
        let mut words = vec![0u64; len.div_ceil(64)];
        for u in 0..len {
            if f(u) != 0 {
                words[u / 64] |= 1u64 << (u % 64);
            }
        }
        CoordTable { words, len }
    }

    pub fn eval(&self, u: usize) -> u8 {
        ((self.words[u / 64] >> (u % 64)) & 1) as u8
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Is the table constant over the messages where `keep` returns true?
    pub fn constant_over(&self, mut keep: impl FnMut(usize) -> bool) -> bool {
        let mut seen: Option<u8> = None;
        for u in 0..self.len {
            if !keep(u) {
                continue;
            }
            let v = self.eval(u);
            match seen {
                None => seen = Some(v),
                Some(prev) if prev != v => return false,
                _ => {}
            }
        }
        true
    }
}

/// A code given by explicit coordinate truth tables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruthTableCode {
    n: usize,
    coords: Vec<CoordTable>,
}

impl TruthTableCode {
    pub fn new(n: usize, coords: Vec<CoordTable>) -> Result<Self> {
        if n > TRUTH_TABLE_N_CAP {
            return Err(Error::InvalidParameter(format!(
                "message length {n} exceeds the cap {TRUTH_TABLE_N_CAP}"
            )));
        }
        if coords.iter().any(|c| c.len() != 1usize << n) {
            return Err(Error::InvalidParameter(
                "coordinate table size does not match 2^n".into(),
            ));
        }
        Ok(TruthTableCode { n, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, j: usize) -> &CoordTable {
        &self.coords[j - 1]
    }

    /// Codeword bit `j` (1-based) of message index `u`.
    pub fn eval(&self, j: usize, u: usize) -> u8 {
        self.coords[j - 1].eval(u)
    }

    /// The full codeword of message index `u`.
    pub fn codeword(&self, u: usize) -> BitString {
        let mut out = BitString::zeros(self.m());
        for j in 1..=self.m() {
            out.set(j, self.eval(j, u));
        }
        out
    }

    /// Message bit `i` (1-based) of message index `u`.
    pub fn message_bit(&self, n: usize, i: usize, u: usize) -> u8 {
        debug_assert_eq!(n, self.n);
        ((u >> (self.n - i)) & 1) as u8
    }

    /// Bit `i` of message index `u` (convenience without the length).
    pub fn x_bit(&self, i: usize, u: usize) -> u8 {
        ((u >> (self.n - i)) & 1) as u8
    }

    /// Build from a named generator like `hadamard:3` or a literal listing.
    ///
    /// Supported generators: `identity:n`, `hadamard:n`, `hadamard+and:n`,
    /// `hadamard+or:n`, `hadamard+const:n`, `hadamard-punctured:n` (rows of
    /// Hamming weight >= 2).
    pub fn generator(spec: &str) -> Result<Self> {
        let (name, n_str) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("generator '{spec}' missing ':n' suffix")))?;
        let n: usize = n_str
            .parse()
            .map_err(|e| Error::Parse(format!("bad generator size '{n_str}': {e}")))?;
        if n == 0 {
            return Err(Error::InvalidParameter("generator needs n >= 1".into()));
        }
        let wide_ok = n <= WIDE_GENERATOR_N_CAP;
        match name {
            "identity" => {
                if n > TRUTH_TABLE_N_CAP {
                    return Err(Error::InvalidParameter(format!(
                        "identity:{n} exceeds the cap {TRUTH_TABLE_N_CAP}"
                    )));
                }
                let coords = (1..=n)
                    .map(|i| CoordTable::from_fn(n, |u| ((u >> (n - i)) & 1) as u8))
                    .collect();
                TruthTableCode::new(n, coords)
            }
            "hadamard" | "hadamard+and" | "hadamard+or" | "hadamard+const" => {
                if !wide_ok {
                    return Err(Error::InvalidParameter(format!(
                        "{name}:{n} exceeds the wide-generator cap {WIDE_GENERATOR_N_CAP}"
                    )));
                }
                let mut coords: Vec<CoordTable> = (0..1usize << n)
                    .map(|row| CoordTable::from_fn(n, |u| ((row & u).count_ones() & 1) as u8))
                    .collect();
                match name {
                    "hadamard+and" => {
                        coords.push(CoordTable::from_fn(n, |u| (u == (1usize << n) - 1) as u8));
                    }
                    "hadamard+or" => {
                        coords.push(CoordTable::from_fn(n, |u| (u != 0) as u8));
                    }
                    "hadamard+const" => {
                        coords.push(CoordTable::from_fn(n, |_| 1));
                    }
                    _ => {}
                }
                TruthTableCode::new(n, coords)
            }
            "hadamard-punctured" => {
                if !wide_ok {
                    return Err(Error::InvalidParameter(format!(
                        "{name}:{n} exceeds the wide-generator cap {WIDE_GENERATOR_N_CAP}"
                    )));
                }
                let coords: Vec<CoordTable> = (0..1usize << n)
                    .filter(|row| row.count_ones() >= 2)
                    .map(|row| CoordTable::from_fn(n, |u| ((row & u).count_ones() & 1) as u8))
                    .collect();
                TruthTableCode::new(n, coords)
            }
            other => Err(Error::Parse(format!("unknown generator '{other}'"))),
        }
    }

    /// Serialize as `n`, `m` headers and one `x bits` line per message.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n {}", self.n).unwrap();
        writeln!(out, "m {}", self.m()).unwrap();
        for u in 0..1usize << self.n {
            writeln!(
                out,
                "{} {}",
                BitString::from_index(u, self.n),
                self.codeword(u)
            )
            .unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let mut header = |name: &str| -> Result<usize> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing header '{name}'")))?;
            let (key, value) = line
                .split_once(' ')
                .ok_or_else(|| Error::Parse(format!("malformed header '{line}'")))?;
            if key != name {
                return Err(Error::Parse(format!("expected '{name}', found '{key}'")));
            }
            value
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad {name}: {e}")))
        };
        let n = header("n")?;
        let m = header("m")?;
        if n > TRUTH_TABLE_N_CAP {
            return Err(Error::InvalidParameter(format!(
                "message length {n} exceeds the cap {TRUTH_TABLE_N_CAP}"
            )));
        }
        let total = 1usize << n;
        let mut rows: Vec<Option<BitString>> = vec![None; total];
        for line in lines {
            let mut parts = line.split_whitespace();
            let (Some(xs), Some(ws)) = (parts.next(), parts.next()) else {
                return Err(Error::Parse(format!("malformed codeword line '{line}'")));
            };
            let x: BitString = xs.parse()?;
            if x.len() != n {
                return Err(Error::Parse(format!(
                    "message '{xs}' has length {} instead of {n}",
                    x.len()
                )));
            }
            let w: BitString = ws.parse()?;
            if w.len() != m {
                return Err(Error::Parse(format!(
                    "codeword for '{xs}' has length {} instead of {m}",
                    w.len()
                )));
            }
            let u = x.to_index();
            if rows[u].is_some() {
                return Err(Error::Parse(format!("duplicate message '{xs}'")));
            }
            rows[u] = Some(w);
        }
        if let Some(missing) = rows.iter().position(|r| r.is_none()) {
            return Err(Error::Parse(format!(
                "missing codeword for message {}",
                BitString::from_index(missing, n)
            )));
        }
        let rows: Vec<BitString> = rows.into_iter().map(|r| r.unwrap()).collect();
        let coords = (1..=m)
            .map(|j| CoordTable::from_fn(n, |u| rows[u].bit(j)))
            .collect();
        TruthTableCode::new(n, coords)
    }

    /// Load from a path or build from a generator spec (`name:n`).
    pub fn load(spec: &str) -> Result<Self> {
        if spec.contains(':') && !std::path::Path::new(spec).exists() {
            Self::generator(spec)
        } else {
            let text = std::fs::read_to_string(spec)?;
            Self::parse(&text)
        }
    }
}
