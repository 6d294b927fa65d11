//! A desk-scale laboratory for relaxed local decoding under insertion-deletion
//! errors.
//!
//! The centerpiece is a buffered concatenation code: an outer Hamming code
//! (relaxed locally decodable or correctable) whose bits are re-encoded by an
//! inner insdel codebook, with runs of zeros separating the inner blocks. The
//! crate provides the encoder, the constant-query relaxed decoder and
//! corrector, corruption channels that stay within declared edit budgets, and
//! analysis routines that check the inequalities the decoder's guarantees rest
//! on (self-nonsimilarity, dangerous-block counting, per-block flip
//! probability, confidence amplification).
//!
//! A separate [`lab`] module treats small codes as explicit truth tables and
//! runs the structural analysis of two-query decoders with abort: fixable
//! coordinate sets, random restrictions, query-structure checks, the reduction
//! to standard local decoding, and determinization of output functions.

pub mod analysis;
pub mod bits;
pub mod channel;
pub mod concat;
pub mod decode;
pub mod error;
pub mod inner;
pub mod lab;
pub mod matching;
pub mod outer;
pub mod rng;

pub use bits::{BitString, Interval, QuerySymbol};
pub use error::{Error, Result};
