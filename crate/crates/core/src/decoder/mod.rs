//! Comparison-only recursive decoding and the exhaustive ML reference.

mod fda;
mod ml;
mod params;
mod quantize;
mod subdecoder;

use crate::channel::AntipodalWord;

pub use fda::{fda_decode, fda_decode_traced, SplitRecord};
pub use ml::{ml_decode, residual, MlDecoder, DEFAULT_ML_MAX_COLS};
pub use params::{delta_params, delta_range, rnd, DeltaParams};
pub use quantize::{quantize, Constellation, QuantizeResult};
pub use subdecoder::{
    left_decode, lr_decode, right_decode, sub_decode8, CountSplit, LeafCounts, LeafDecode,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub word: AntipodalWord,
    /// Quantizer comparisons for the fast decoder, hypotheses for ML.
    pub comparisons: u64,
}
