//! Recursive uniquely decodable (UD) ternary signature matrices for
//! overloaded synchronous CDMA.
//!
//! The crate covers the whole chain:
//!
//! * [`codebook`] builds the recursive `L x K` matrices over `{-1, 0, +1}`,
//!   certifies unique decodability by brute force and searches for the
//!   largest UD matrices of small length.
//! * [`channel`] spreads antipodal user data through a codebook and adds
//!   white Gaussian noise from a counter-based generator.
//! * [`decoder`] holds the comparison-only recursive fast decoder and an
//!   exhaustive maximum-likelihood reference.
//! * [`complexity`] evaluates the closed-form comparison counts and measures
//!   them by enumeration.
//! * [`harness`] runs Monte-Carlo BER sweeps and backs the `udcdma` CLI.
//!
//! Signal-processing code is generic over the real scalar through
//! [`Scalar`]; the aliases below fix it to `f64` or `f32`.

pub mod channel;
pub mod codebook;
pub mod complexity;
pub mod decoder;
mod error;
pub mod harness;
mod scalar;

pub use channel::{
    add_awgn, ebn0_to_sigma, spread, AntipodalWord, ChannelConfig, ChipVector, NoiseStream,
};
pub use codebook::{
    build_codebook, strip_first_row, verify_ud, TernaryCodebook, TernaryMatrix, UdWitness,
};
pub use decoder::{fda_decode, ml_decode, DecodeOutcome, MlDecoder};
pub use error::{Error, Result};
pub use scalar::Scalar;

/// Received/transmitted chip vector in double precision.
pub type ChipVector64 = ChipVector<f64>;
/// Received/transmitted chip vector in single precision.
pub type ChipVector32 = ChipVector<f32>;
/// Channel parameters in double precision.
pub type ChannelConfig64 = ChannelConfig<f64>;
/// Channel parameters in single precision.
pub type ChannelConfig32 = ChannelConfig<f32>;
