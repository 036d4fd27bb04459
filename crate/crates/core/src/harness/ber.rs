use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{DecoderKind, SimConfig, SnrConvention};
use crate::channel::{ebn0_to_sigma, spread, AntipodalWord, ChipVector, NoiseStream};
use crate::codebook::{build_codebook, TernaryCodebook};
use crate::decoder::{fda_decode, MlDecoder};
use crate::{Error, Result, Scalar};

/// Trials per batch when the early-stopping rule is active; batch edges are
/// fixed so the stopping point never depends on scheduling.
pub const STOP_BATCH: u64 = 10_000;

const DATA_STREAM: u64 = 0;
const NOISE_STREAM: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    /// Grid value in dB; absent in raw-sigma mode.
    pub snr_db: Option<f64>,
    pub sigma: f64,
    pub decoder: DecoderKind,
    pub trials: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub word_errors: u64,
    pub wer: f64,
    pub mean_comparisons: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerCurve {
    pub config: SimConfig,
    pub points: Vec<BerPoint>,
}

/// Wilson score interval at 95% confidence.
pub fn wilson(errors: u64, total: u64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054f64;
    let n = total as f64;
    let p = errors as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    (
        (centre - half).max(0.0).min(p),
        (centre + half).min(1.0).max(p),
    )
}

/// Transmitted word of trial `t`; the same at every grid point.
pub fn trial_word(seed: u64, k: usize, trial: u64) -> AntipodalWord {
    let mut rng = NoiseStream::new(DATA_STREAM, trial).rng(seed);
    let bits = (0..k)
        .map(|_| if rng.random::<bool>() { 1 } else { -1 })
        .collect();
    AntipodalWord::new(bits).expect("antipodal by construction")
}

/// Word and received vector of trial `t` at noise level `sigma`.
pub fn trial_input<T: Scalar>(
    seed: u64,
    codebook: &TernaryCodebook,
    amplitude: T,
    sigma: T,
    trial: u64,
) -> Result<(AntipodalWord, ChipVector<T>)> {
    let x = trial_word(seed, codebook.cols(), trial);
    let clean = spread(codebook, &x, amplitude)?;
    let noise = NoiseStream::new(NOISE_STREAM, trial).standard_normals(seed, clean.len());
    let y = ChipVector {
        chips: clean
            .chips
            .iter()
            .zip(noise)
            .map(|(&c, n)| c + sigma * T::of(n))
            .collect(),
    };
    Ok((x, y))
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    bit_errors: u64,
    word_errors: u64,
    comparisons: u64,
}

impl Counts {
    fn add(self, o: Self) -> Self {
        Self {
            bit_errors: self.bit_errors + o.bit_errors,
            word_errors: self.word_errors + o.word_errors,
            comparisons: self.comparisons + o.comparisons,
        }
    }
}

fn add_counts(a: Vec<Counts>, b: Vec<Counts>) -> Vec<Counts> {
    a.into_iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

struct Decoders {
    codebook: TernaryCodebook,
    ml: Option<MlDecoder>,
}

impl Decoders {
    fn run<T: Scalar>(
        &self,
        kind: DecoderKind,
        y: &ChipVector<T>,
        a: T,
    ) -> Result<(AntipodalWord, u64)> {
        let out = match kind {
            DecoderKind::Fda => fda_decode(&self.codebook, y, a)?,
            DecoderKind::Ml => self
                .ml
                .as_ref()
                .expect("built when requested")
                .decode(y, a)?,
        };
        Ok((out.word, out.comparisons))
    }
}

/// Monte-Carlo BER over the configured grid in `f64`.
pub fn run_ber_sweep(cfg: &SimConfig) -> Result<BerCurve> {
    run_ber_sweep_in::<f64>(cfg)
}

/// Monte-Carlo BER with the signal path in scalar type `T`.
///
/// Trial `t` sends the same word at every grid point and every decoder sees
/// the same noisy vector, so the decoders are compared on common random
/// numbers. Counters are integers summed per worker, so results do not
/// depend on the worker count.
pub fn run_ber_sweep_in<T: Scalar>(cfg: &SimConfig) -> Result<BerCurve> {
    cfg.validate()?;
    let codebook = build_codebook(cfg.level)?;
    let ml = if cfg.decoders.contains(&DecoderKind::Ml) {
        Some(MlDecoder::new(&codebook)?)
    } else {
        None
    };
    let dec = Decoders { codebook, ml };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.resolved_workers())
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let k = dec.codebook.cols();
    let amp = T::of(cfg.amplitude);

    let mut points = Vec::new();
    for &g in &cfg.snr_grid {
        let (snr_db, sigma) = match cfg.snr_convention {
            SnrConvention::Ebn0 => (Some(g), ebn0_to_sigma(g, &dec.codebook, cfg.amplitude)),
            SnrConvention::RawSigma => (None, g),
        };
        let sig = T::of(sigma);
        let trial = |t: u64| -> Result<Vec<Counts>> {
            let (x, y) = trial_input(cfg.rng_seed, &dec.codebook, amp, sig, t)?;
            cfg.decoders
                .iter()
                .map(|&d| {
                    let (w, comps) = dec.run(d, &y, amp)?;
                    let errs = w.hamming(&x) as u64;
                    Ok(Counts {
                        bit_errors: errs,
                        word_errors: (errs > 0) as u64,
                        comparisons: comps,
                    })
                })
                .collect()
        };
        let zero = || vec![Counts::default(); cfg.decoders.len()];
        let batch = |lo: u64, hi: u64| -> Result<Vec<Counts>> {
            pool.install(|| {
                (lo..hi)
                    .into_par_iter()
                    .map(trial)
                    .try_reduce(zero, |a, b| Ok(add_counts(a, b)))
            })
        };

        let (done, totals) = match cfg.min_errors {
            None => (cfg.trials_per_point, batch(0, cfg.trials_per_point)?),
            Some(target) => {
                let mut done = 0;
                let mut totals = zero();
                while done < cfg.trials_per_point {
                    let end = (done + STOP_BATCH).min(cfg.trials_per_point);
                    totals = add_counts(totals, batch(done, end)?);
                    done = end;
                    if totals.iter().all(|c| c.bit_errors >= target) {
                        break;
                    }
                }
                (done, totals)
            }
        };

        for (&d, c) in cfg.decoders.iter().zip(totals) {
            let bits = done * k as u64;
            let (ci_low, ci_high) = wilson(c.bit_errors, bits);
            points.push(BerPoint {
                snr_db,
                sigma,
                decoder: d,
                trials: done,
                bit_errors: c.bit_errors,
                ber: c.bit_errors as f64 / bits as f64,
                ci_low,
                ci_high,
                word_errors: c.word_errors,
                wer: c.word_errors as f64 / done as f64,
                mean_comparisons: c.comparisons as f64 / done as f64,
            });
        }
    }
    Ok(BerCurve {
        config: cfg.clone(),
        points,
    })
}

/// Grid value where `log10(ber)` crosses `log10(target)`, by linear
/// interpolation between the last point above and the first point at or
/// below the target.
pub fn crossing(points: &[(f64, f64)], target: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let ((x0, b0), (x1, b1)) = (w[0], w[1]);
        if b0 > target && b1 <= target && b1 > 0.0 {
            let (l0, l1, lt) = (b0.log10(), b1.log10(), target.log10());
            Some(x0 + (x1 - x0) * (l0 - lt) / (l0 - l1))
        } else {
            None
        }
    })
}
