//! Truth-table codes and the structural analysis of two-query decoders
//! with abort: fixable sets, random restrictions, query-structure claims,
//! the reduction to never-abort decoding, and output determinization.

pub mod code;
pub mod determinize;
pub mod fixability;
pub mod model;

pub use code::{CoordTable, TruthTableCode};
pub use determinize::{
    achievable_pairs, decoding_fn_display, decoding_fn_parse, determinize, DecodingFn,
    DeterminizeReport,
};
pub use fixability::{
    compare_restricted_fixability, compute_fixability, restrict_code, sample_restriction,
    FixabilityProfile, RestrictedCode, Restriction, RestrictionComparison, RestrictionSample,
};
pub use model::{
    check_claims, check_completeness, conditional_flip, read_index_decoder, reduce_to_ldc,
    xor_pair_decoder, ClaimReport, CompletenessReport, Dist, Fraction, ReducedDecoder, TargetModel,
    TwoQueryDecoderModel,
};
