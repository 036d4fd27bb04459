//! Synchronous BPSK spreading and additive white Gaussian noise.
//!
//! Noise is a pure function of `(seed, stream, trial)`: the three words key a
//! ChaCha8 generator, so trials can run on any thread in any order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::codebook::TernaryCodebook;
use crate::{Error, Result, Scalar};

/// User data word over `{-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AntipodalWord {
    bits: Vec<i8>,
}

impl AntipodalWord {
    pub fn new(bits: Vec<i8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b != 1 && b != -1) {
            return Err(Error::InvalidArgument(format!(
                "antipodal entry {b} is not +-1"
            )));
        }
        Ok(Self { bits })
    }

    /// Word number `index` among all `2^k` words. Index 0 is all `-1`, and
    /// the first user is the most significant bit, so indices follow
    /// lexicographic order.
    pub fn from_index(k: usize, index: u64) -> Self {
        let bits = (0..k)
            .map(|j| if index >> (k - 1 - j) & 1 == 1 { 1 } else { -1 })
            .collect();
        Self { bits }
    }

    pub fn to_index(&self) -> u64 {
        self.bits
            .iter()
            .fold(0, |acc, &b| acc << 1 | (b == 1) as u64)
    }

    pub fn bits(&self) -> &[i8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn negated(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| -b).collect(),
        }
    }

    /// Positions where the two words differ.
    pub fn hamming(&self, other: &Self) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Received or transmitted chips.
#[derive(Debug, Clone, PartialEq)]
pub struct ChipVector<T> {
    pub chips: Vec<T>,
}

impl<T: Scalar> ChipVector<T> {
    pub fn new(chips: Vec<T>) -> Result<Self> {
        if chips.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("chip values must be finite".into()));
        }
        Ok(Self { chips })
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig<T> {
    pub amplitude: T,
    /// Per-chip noise standard deviation.
    pub noise_sigma: T,
    pub rng_seed: u64,
}

impl<T: Scalar> ChannelConfig<T> {
    pub fn new(amplitude: T, noise_sigma: T, rng_seed: u64) -> Result<Self> {
        if !amplitude.is_finite() || amplitude <= T::zero() {
            return Err(Error::InvalidArgument(format!(
                "amplitude must be positive, got {amplitude}"
            )));
        }
        if !noise_sigma.is_finite() || noise_sigma < T::zero() {
            return Err(Error::InvalidArgument(format!(
                "noise sigma must be >= 0, got {noise_sigma}"
            )));
        }
        Ok(Self {
            amplitude,
            noise_sigma,
            rng_seed,
        })
    }
}

/// Coordinates of one noise realisation under a seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NoiseStream {
    pub stream: u64,
    pub trial: u64,
}

impl NoiseStream {
    pub fn new(stream: u64, trial: u64) -> Self {
        Self { stream, trial }
    }

    pub fn rng(&self, seed: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.stream.to_le_bytes());
        key[16..24].copy_from_slice(&self.trial.to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }

    /// Standard normal samples. Always drawn in `f64` so that `f32` and
    /// `f64` runs see the same realisation.
    pub fn standard_normals(&self, seed: u64, n: usize) -> Vec<f64> {
        let mut rng = self.rng(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }
}

/// Noiseless chips `A C x`.
pub fn spread<T: Scalar>(
    c: &TernaryCodebook,
    x: &AntipodalWord,
    amplitude: T,
) -> Result<ChipVector<T>> {
    let v: Vec<i32> = x.bits().iter().map(|&b| b as i32).collect();
    let prod = c.matrix().mul_vec(&v)?;
    Ok(ChipVector {
        chips: prod
            .into_iter()
            .map(|s| amplitude * T::of(s as f64))
            .collect(),
    })
}

/// Adds `N(0, sigma^2)` to every chip.
pub fn add_awgn<T: Scalar>(
    y: &ChipVector<T>,
    cfg: &ChannelConfig<T>,
    stream: NoiseStream,
) -> ChipVector<T> {
    if cfg.noise_sigma == T::zero() {
        return y.clone();
    }
    let noise = stream.standard_normals(cfg.rng_seed, y.len());
    ChipVector {
        chips: y
            .chips
            .iter()
            .zip(noise)
            .map(|(&c, n)| c + cfg.noise_sigma * T::of(n))
            .collect(),
    }
}

/// Per-chip sigma for a per-user `Eb/N0` in dB.
///
/// `Eb = A^2 w`, with `w` the mean squared column norm of the codebook, and
/// `N0 = 2 sigma^2`.
pub fn ebn0_to_sigma<T: Scalar>(ebn0_db: T, c: &TernaryCodebook, amplitude: T) -> T {
    let eb = amplitude * amplitude * T::of(c.mean_column_energy());
    let ratio = T::of(10.0).powf(ebn0_db / T::of(10.0));
    (eb / (T::of(2.0) * ratio)).sqrt()
}
