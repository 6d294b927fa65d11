//! Determinizing the output stage of a two-query decoder.
//!
//! A decoder that picks a random output function `f : {0,1}^2 -> {0,1,⊥}`
//! for a fixed query pair `(j, k)` can be replaced by one deterministic
//! function: on pairs achievable as `(C(x)_j, C(x)_k)` all support functions
//! must already agree (and not abort), and everywhere else the deterministic
//! function aborts. This keeps perfect completeness and can only move
//! outputs toward `⊥`, preserving relaxed decoding.

use crate::bits::QuerySymbol;
use crate::error::{Error, Result};

use super::code::TruthTableCode;
use super::model::Dist;

/// A decoding function as a truth table over `(y_j, y_k)`, indexed `2a + b`.
pub type DecodingFn = [QuerySymbol; 4];

pub fn decoding_fn_parse(s: &str) -> Result<DecodingFn> {
    let mut out = [QuerySymbol::Bot; 4];
    let chars: Vec<char> = s.chars().collect();
    if chars.len() != 4 {
        return Err(Error::Parse(format!(
            "decoding function '{s}' must have 4 symbols over 0/1/b"
        )));
    }
    for (slot, c) in chars.into_iter().enumerate() {
        out[slot] = match c {
            '0' => QuerySymbol::Zero,
            '1' => QuerySymbol::One,
            'b' | 'B' => QuerySymbol::Bot,
            other => {
                return Err(Error::Parse(format!(
                    "invalid symbol '{other}' in decoding function '{s}'"
                )))
            }
        };
    }
    Ok(out)
}

pub fn decoding_fn_display(f: &DecodingFn) -> String {
    f.iter()
        .map(|sym| match sym {
            QuerySymbol::Zero => '0',
            QuerySymbol::One => '1',
            QuerySymbol::Bot => 'b',
        })
        .collect()
}

/// The pairs `(C(x)_j, C(x)_k)` attained by some message, computed by
/// exhaustive enumeration. Indexed `2a + b`.
pub fn achievable_pairs(code: &TruthTableCode, j: usize, k: usize) -> [bool; 4] {
    let mut reach = [false; 4];
    for u in 0..1usize << code.n() {
        let a = code.eval(j, u);
        let b = code.eval(k, u);
        reach[(2 * a + b) as usize] = true;
    }
    reach
}

#[derive(Clone, Debug)]
pub struct DeterminizeReport {
    pub f_d: DecodingFn,
    pub achievable: [bool; 4],
}

/// Collapse a distribution over decoding functions into the deterministic
/// `f_D`: the unanimous value where the support agrees, `⊥` elsewhere.
///
/// Errors when the support functions disagree (or abort) on an achievable
/// pair, or fail to decode `x_i` there: both contradict perfect
/// completeness of the original decoder.
pub fn determinize(
    code: &TruthTableCode,
    i: usize,
    j: usize,
    k: usize,
    dist: &Dist<DecodingFn>,
) -> Result<DeterminizeReport> {
    let achievable = achievable_pairs(code, j, k);
    // completeness on achievable pairs: every support function must output
    // the message bit
    for u in 0..1usize << code.n() {
        let a = code.eval(j, u);
        let b = code.eval(k, u);
        let want = QuerySymbol::from_bit(code.x_bit(i, u));
        for f in dist.support() {
            let got = f[(2 * a + b) as usize];
            if got != want {
                return Err(Error::CompletenessViolation(format!(
                    "support function {} outputs {got} on achievable pair ({a}, {b}) \
                     where message {u} requires {want}",
                    decoding_fn_display(f)
                )));
            }
        }
    }
    let mut f_d = [QuerySymbol::Bot; 4];
    for slot in 0..4 {
        let mut values = dist.support().map(|f| f[slot]);
        let first = values.next().expect("distribution is non-empty");
        if values.all(|v| v == first) {
            f_d[slot] = first;
        } else {
            f_d[slot] = QuerySymbol::Bot;
        }
    }
    // unanimity on achievable pairs is guaranteed by the completeness check
    debug_assert!((0..4).all(|slot| !achievable[slot] || !f_d[slot].is_bot()));
    Ok(DeterminizeReport { f_d, achievable })
}
