//! Monte-Carlo BER sweeps, result files and the `udcdma` command line.

pub mod ber;
mod cli;
pub mod config;
pub mod emit;

pub use ber::{
    crossing, run_ber_sweep, run_ber_sweep_in, trial_input, trial_word, wilson, BerCurve, BerPoint,
};
pub use cli::cli_main;
pub use config::{DecoderKind, SimConfig, SnrConvention, WORKERS_ENV};
pub use emit::{emit_results, OutputFormat, CSV_HEADER};
