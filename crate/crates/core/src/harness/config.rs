use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codebook::dimensions;
use crate::decoder::DEFAULT_ML_MAX_COLS;
use crate::{Error, Result};

/// Environment variable that overrides the worker count when none is given.
pub const WORKERS_ENV: &str = "UDCDMA_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    Fda,
    Ml,
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecoderKind::Fda => "fda",
            DecoderKind::Ml => "ml",
        })
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fda" => Ok(DecoderKind::Fda),
            "ml" => Ok(DecoderKind::Ml),
            other => Err(Error::Config(format!("unknown decoder '{other}'"))),
        }
    }
}

/// How grid values map to noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrConvention {
    /// Per-user `Eb/N0` in dB, `Eb = A^2 * mean column energy`, `N0 = 2 sigma^2`.
    Ebn0,
    /// Grid values are the per-chip noise standard deviation.
    RawSigma,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub level: u32,
    pub snr_grid: Vec<f64>,
    pub snr_convention: SnrConvention,
    pub trials_per_point: u64,
    pub rng_seed: u64,
    pub decoders: Vec<DecoderKind>,
    pub amplitude: f64,
    /// Threads used for trials; does not affect results.
    #[serde(skip)]
    pub workers: usize,
    /// Stop a point early once every decoder has this many bit errors.
    pub min_errors: Option<u64>,
}

impl SimConfig {
    pub fn new(level: u32, snr_grid: Vec<f64>, trials_per_point: u64, rng_seed: u64) -> Self {
        Self {
            level,
            snr_grid,
            snr_convention: SnrConvention::Ebn0,
            trials_per_point,
            rng_seed,
            decoders: vec![DecoderKind::Fda],
            amplitude: 1.0,
            workers: 0,
            min_errors: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.level < 2 {
            return Err(Error::Config(format!(
                "BER sweeps need level >= 2, got {}",
                self.level
            )));
        }
        if self.trials_per_point == 0 {
            return Err(Error::Config("trials per point must be >= 1".into()));
        }
        if self.decoders.is_empty() {
            return Err(Error::Config("at least one decoder is required".into()));
        }
        if self.snr_grid.is_empty() {
            return Err(Error::Config("SNR grid is empty".into()));
        }
        if self.snr_grid.iter().any(|v| v.is_nan()) {
            return Err(Error::Config("SNR grid contains NaN".into()));
        }
        if self.snr_convention == SnrConvention::RawSigma && self.snr_grid.iter().any(|&s| s < 0.0)
        {
            return Err(Error::Config("noise sigma must be >= 0".into()));
        }
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return Err(Error::Config("amplitude must be positive".into()));
        }
        let k = dimensions(self.level).1;
        if self.decoders.contains(&DecoderKind::Ml) && k > DEFAULT_ML_MAX_COLS {
            return Err(Error::Config(format!(
                "ML decoding of level {} needs 2^{k} hypotheses per trial; the bound is {DEFAULT_ML_MAX_COLS} users",
                self.level
            )));
        }
        Ok(())
    }

    /// Configured worker count, else the environment override, else all
    /// cores.
    pub fn resolved_workers(&self) -> usize {
        if self.workers > 0 {
            return self.workers;
        }
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .filter(|&w: &usize| w > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

/// Parses `a:step:b` into `a, a + step, ...` up to `b` inclusive.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Config(format!("expected start:step:stop, got '{s}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (a, step, b) = (nums[0], nums[1], nums[2]);
    if !step.is_finite() || step <= 0.0 || b < a || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(Error::Config(format!("range '{s}' has too many points")));
    }
    // index-based to avoid accumulating rounding
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}

/// Parses a comma-separated list of numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("'{v}' is not a number")))
        })
        .collect()
}
