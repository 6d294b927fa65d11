//! The buffered concatenation code: inner-coded outer bits separated by
//! zero buffers.
//!
//! A message `x` is first encoded by the outer code into `y` of length `k`;
//! each bit `y_j` becomes the inner codeword `C_in(j, y_j)` of length `t`,
//! and blocks are separated by `0^t` buffers:
//!
//! ```text
//!   C_in(1, y_1) 0^t C_in(2, y_2) 0^t ... 0^t C_in(k, y_k)          (RLDC)
//!   C_in(1, y_1) 0^t C_in(2, y_2) 0^t ... 0^t C_in(k, y_k) 0^t      (RLCC)
//! ```
//!
//! In RLCC mode the trailing buffer makes the buffers cover exactly half of
//! all positions, which is what gives the corrector its guaranteed success
//! rate on buffer positions.

use serde::{Deserialize, Serialize};

use crate::bits::{BitString, Interval};
use crate::error::{Error, Result};
use crate::inner::InnerCodebook;
use crate::outer::OuterCode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeMode {
    Rldc,
    Rlcc,
}

/// Derived parameters of a concatenation instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcatParams {
    /// Message length of the outer code.
    pub n: usize,
    /// Outer codeword length = number of inner blocks.
    pub k: usize,
    /// Inner codeword length (also the buffer length).
    pub t: usize,
    /// Total codeword length: `(2k-1)t` for RLDC, `2kt` for RLCC.
    pub m: usize,
    /// Number of sampled probe offsets per block, `ceil(8 ln(4/delta_out) / delta_in)`.
    pub d: usize,
    /// Achieved inner minimum normalized edit distance.
    pub delta_in: f64,
    /// Outer Hamming tolerance.
    pub delta_out: f64,
    /// Outer advantage.
    pub eps_out: f64,
    /// Overall insdel tolerance `delta_in * delta_out / 128` (edit budget is
    /// `delta * 2m`).
    pub delta: f64,
    /// Outer query budget per session.
    pub q_out: usize,
    /// Total oracle budget per decode: `(d+1) * q_out + 2`.
    pub q: usize,
    pub mode: CodeMode,
}

impl ConcatParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        k: usize,
        t: usize,
        q_out: usize,
        eps_out: f64,
        delta_in: f64,
        delta_out: f64,
        mode: CodeMode,
    ) -> Result<Self> {
        if !(delta_in > 0.0 && delta_in < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "delta_in = {delta_in} outside (0, 1/2)"
            )));
        }
        if !(delta_out > 0.0 && delta_out < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "delta_out = {delta_out} outside (0, 1/2)"
            )));
        }
        if k == 0 || t == 0 || q_out == 0 {
            return Err(Error::InvalidParameter(
                "k, t and q_out must be positive".into(),
            ));
        }
        let m = match mode {
            CodeMode::Rldc => (2 * k - 1) * t,
            CodeMode::Rlcc => 2 * k * t,
        };
        let d = (8.0 * (4.0 / delta_out).ln() / delta_in).ceil() as usize;
        Ok(ConcatParams {
            n,
            k,
            t,
            m,
            d,
            delta_in,
            delta_out,
            eps_out,
            delta: delta_in * delta_out / 128.0,
            q_out,
            q: (d + 1) * q_out + 2,
            mode,
        })
    }

    /// The full edit budget `delta * 2m`, rounded down to whole edits.
    pub fn edit_budget(&self) -> usize {
        (self.delta * 2.0 * self.m as f64).floor() as usize
    }
}

/// The interval `I_j = {2(j-1)t+1, ..., 2(j-1)t+t}` holding block `j`.
pub fn block_interval(j: usize, t: usize) -> Interval {
    assert!(j >= 1, "block index is 1-based");
    let start = 2 * (j - 1) * t + 1;
    Interval::new(start, start + t - 1).unwrap()
}

/// What a codeword position holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PositionKind {
    Buffer,
    /// Block `j` (1-based) at offset `offset` in `[t]`.
    Block {
        j: usize,
        offset: usize,
    },
}

/// Classify a position of the layout: buffer, or (block, offset).
pub fn classify_position(pos: usize, params: &ConcatParams) -> Result<PositionKind> {
    if pos == 0 || pos > params.m {
        return Err(Error::IndexOutOfRange {
            index: pos,
            bound: params.m,
        });
    }
    let t = params.t;
    let cell = (pos - 1) / t; // 0-based run of length t
    if cell.is_multiple_of(2) {
        let j = cell / 2 + 1;
        if j <= params.k {
            return Ok(PositionKind::Block {
                j,
                offset: pos - 2 * (j - 1) * t,
            });
        }
    }
    Ok(PositionKind::Buffer)
}

/// A concatenation code instance: parameters, inner codebook, outer code.
pub struct ConcatCode {
    pub params: ConcatParams,
    pub book: InnerCodebook,
    pub outer: Box<dyn OuterCode>,
}

impl ConcatCode {
    pub fn new(book: InnerCodebook, outer: Box<dyn OuterCode>, mode: CodeMode) -> Result<Self> {
        let delta_out = outer.spec().delta_out;
        Self::with_delta_out(book, outer, mode, delta_out)
    }

    /// Like [`ConcatCode::new`] but with an explicit `delta_out` overriding
    /// the outer code's own figure (needed for outer codes that declare
    /// `delta_out = 0`, like the identity test double).
    pub fn with_delta_out(
        book: InnerCodebook,
        outer: Box<dyn OuterCode>,
        mode: CodeMode,
        delta_out: f64,
    ) -> Result<Self> {
        let spec = outer.spec();
        if spec.k != book.k() {
            return Err(Error::InvalidParameter(format!(
                "outer codeword length {} does not match inner block count {}",
                spec.k,
                book.k()
            )));
        }
        let params = ConcatParams::new(
            spec.n,
            book.k(),
            book.t(),
            spec.q_out,
            spec.eps_out,
            book.delta_in(),
            delta_out,
            mode,
        )?;
        Ok(ConcatCode {
            params,
            book,
            outer,
        })
    }

    /// Encode a message: outer encode, then inner blocks with buffers.
    pub fn encode(&self, x: &BitString) -> Result<BitString> {
        if x.len() != self.params.n {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.params.n,
            });
        }
        let y = self.outer.encode(x)?;
        debug_assert_eq!(y.len(), self.params.k);
        let t = self.params.t;
        let mut out = BitString::new();
        for j in 1..=self.params.k {
            if j > 1 {
                out.extend_from(&BitString::zeros(t));
            }
            out.extend_from(self.book.encode(j, y.bit(j))?);
        }
        if self.params.mode == CodeMode::Rlcc {
            out.extend_from(&BitString::zeros(t));
        }
        debug_assert_eq!(out.len(), self.params.m);
        Ok(out)
    }

    /// Outer codeword for a message (the per-block nominal bits).
    pub fn outer_codeword(&self, x: &BitString) -> Result<BitString> {
        self.outer.encode(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner::build_codebook;
    use crate::outer::IdentityCode;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn identity_concat(k: usize, t: usize, mode: CodeMode) -> ConcatCode {
        let book = build_codebook(k, t, 0.1, 5).unwrap();
        ConcatCode::with_delta_out(book, Box::new(IdentityCode::new(k)), mode, 0.2).unwrap()
    }

    #[test]
    fn rldc_length_and_layout() {
        let code = identity_concat(3, 4, CodeMode::Rldc);
        assert_eq!(code.params.m, 20);
        let cw = code.encode(&bs("101")).unwrap();
        assert_eq!(cw.len(), 20);
        // block 2 restriction equals the inner codeword for y_2 = 0
        let window = cw.slice(block_interval(2, 4)).unwrap();
        assert_eq!(&window, code.book.encode(2, 0).unwrap());
    }

    #[test]
    fn rlcc_length_and_buffers() {
        let code = identity_concat(3, 4, CodeMode::Rlcc);
        assert_eq!(code.params.m, 24);
        let cw = code.encode(&bs("111")).unwrap();
        assert_eq!(cw.len(), 24);
        for pos in (5..=8).chain(13..=16).chain(21..=24) {
            assert_eq!(cw.bit(pos), 0, "pos {pos} should be buffer zero");
        }
    }

    #[test]
    fn block_interval_formula() {
        assert_eq!(block_interval(1, 4), Interval::new(1, 4).unwrap());
        assert_eq!(block_interval(2, 4), Interval::new(9, 12).unwrap());
        // consecutive intervals are separated by exactly t positions
        for j in 1..6 {
            let a = block_interval(j, 7);
            let b = block_interval(j + 1, 7);
            assert_eq!(b.start - a.end - 1, 7);
        }
    }

    #[test]
    fn classify_positions_exhaustively() {
        let code = identity_concat(3, 4, CodeMode::Rldc);
        assert_eq!(
            classify_position(5, &code.params).unwrap(),
            PositionKind::Buffer
        );
        assert_eq!(
            classify_position(10, &code.params).unwrap(),
            PositionKind::Block { j: 2, offset: 2 }
        );
        // agreement with the interval layout over every position
        for pos in 1..=code.params.m {
            let got = classify_position(pos, &code.params).unwrap();
            let by_layout = (1..=code.params.k)
                .find(|&j| block_interval(j, 4).contains(pos))
                .map(|j| PositionKind::Block {
                    j,
                    offset: pos - (block_interval(j, 4).start - 1),
                })
                .unwrap_or(PositionKind::Buffer);
            assert_eq!(got, by_layout, "pos {pos}");
        }
        assert!(classify_position(21, &code.params).is_err());
        assert!(classify_position(0, &code.params).is_err());
    }

    #[test]
    fn rlcc_buffers_cover_exactly_half() {
        let code = identity_concat(4, 6, CodeMode::Rlcc);
        let buffer_count = (1..=code.params.m)
            .filter(|&pos| {
                matches!(
                    classify_position(pos, &code.params).unwrap(),
                    PositionKind::Buffer
                )
            })
            .count();
        assert_eq!(buffer_count, code.params.m / 2);
    }

    #[test]
    fn params_validation() {
        assert!(ConcatParams::new(3, 3, 4, 1, 0.5, 0.0, 0.2, CodeMode::Rldc).is_err());
        assert!(ConcatParams::new(3, 3, 4, 1, 0.5, 0.1, 0.6, CodeMode::Rldc).is_err());
        let p = ConcatParams::new(3, 3, 4, 1, 0.5, 0.125, 0.2, CodeMode::Rldc).unwrap();
        assert_eq!(p.m, 20);
        assert_eq!(p.d, (8.0_f64 * 20.0_f64.ln() / 0.125).ceil() as usize);
        assert_eq!(p.q, (p.d + 1) + 2);
        assert!((p.delta - 0.125 * 0.2 / 128.0).abs() < 1e-15);
    }

    #[test]
    fn encode_checks_message_length() {
        let code = identity_concat(3, 4, CodeMode::Rldc);
        assert!(code.encode(&bs("10")).is_err());
    }
}
