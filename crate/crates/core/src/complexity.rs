//! Average comparison counts of the fast decoder: closed forms in exact
//! arithmetic and measurement by enumeration.
//!
//! Writing `K = K_i` and `K' = K_{i-1}`, the closed form is
//!
//! ```text
//! T_i  = (G_i + H_i + U_i T'_{i-1}) / 2^(K-1)
//! T'_j = (2^(K_j - 1) T_j - G_j) / (2^(K_j - 1) - 1)
//! ```
//!
//! where `G` counts first-quantizer comparisons over half of the inputs, `H`
//! the second quantizer and `U` the number of sub-decoder calls. `T'` is the
//! cost of a sub-decoder that is handed its count instead of quantizing it.
//!
//! The published constant term of `U_i` is `4 (2^(2^i - 1) - 2)`. Counting
//! sub-decoder calls directly gives `4 (2^(K') - 2)` instead, and only that
//! value makes the closed form equal the exhaustive average of the decoder.
//! [`UTerm`] selects between the two.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{spread, AntipodalWord};
use crate::codebook::{build_codebook, dimensions, TernaryCodebook};
use crate::decoder::{fda_decode, Constellation};
use crate::{Error, Result};

/// Largest `K` enumerated exhaustively.
pub const EXHAUSTIVE_MAX_COLS: usize = 17;

/// Published level-2 comparison total over all 256 words.
pub const PUBLISHED_T2_TOTAL: u64 = 1500;

/// Published per-`n` level-2 comparison totals, `n = 0..=8`.
pub const PUBLISHED_CENSUS: [u64; 9] = [1, 25, 144, 289, 488, 369, 155, 28, 1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UTerm {
    /// `4 (2^(2^i - 1) - 2)`, as published.
    Published,
    /// `4 (2^(K_{i-1}) - 2)`.
    Counted,
}

/// Level-2 inputs to the recursion plus the choice of `U` constant.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticModel {
    /// Average comparisons at level 2.
    pub t2: BigRational,
    /// First-quantizer comparisons at level 2 over half of the inputs.
    pub g2: BigUint,
    pub u_term: UTerm,
}

impl AnalyticModel {
    /// `T_2 = 1500/256` with the published `U`.
    pub fn published() -> Self {
        Self {
            t2: ratio(PUBLISHED_T2_TOTAL, 256),
            g2: enumerated_g2(),
            u_term: UTerm::Published,
        }
    }

    /// `T_2` measured on this crate's decoder with the counted `U`; equals
    /// the exhaustive average at every level by construction.
    pub fn measured() -> Self {
        let c = build_codebook(2).expect("level 2 builds");
        let e = enumerate(&c).expect("level 2 enumerates");
        Self {
            t2: e.exact_mean(),
            g2: enumerated_g2(),
            u_term: UTerm::Counted,
        }
    }
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn big(v: &BigUint) -> BigInt {
    BigInt::from(v.clone())
}

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e
}

fn binomials(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for k in 1..=n {
        let next = &row[k - 1] * BigUint::from(n + 1 - k) / BigUint::from(k);
        row.push(next);
    }
    row
}

fn check_level(i: u32) -> Result<()> {
    if !(3..=12).contains(&i) {
        return Err(Error::InvalidArgument(format!(
            "closed forms need 3 <= level <= 12, got {i}"
        )));
    }
    Ok(())
}

/// First-quantizer comparisons over the inputs with at most `K_{i-1}` entries
/// of `-1`.
pub fn analytic_g(i: u32) -> Result<BigUint> {
    check_level(i)?;
    let k = dimensions(i).1;
    let kp = dimensions(i - 1).1;
    let c = binomials(k);
    Ok((0..=kp).map(|j| &c[j] * BigUint::from(j + 1)).sum())
}

/// Half of the first-quantizer comparisons over all 256 level-2 words.
pub fn enumerated_g2() -> BigUint {
    let q = Constellation {
        lo: -8,
        hi: 8,
        step: 2,
    };
    let total: u64 = (0..256u64)
        .map(|w| {
            let ones = w.count_ones() as i64;
            q.quantize((2 * ones - 8) as f64).comparisons as u64
        })
        .sum();
    BigUint::from(total / 2)
}

/// Second-quantizer comparisons.
pub fn analytic_h(i: u32) -> Result<BigUint> {
    check_level(i)?;
    let kp = dimensions(i - 1).1;
    let c = binomials(kp);
    let mut s = BigUint::zero();
    for j in 1..=kp {
        let mid = &c[(j - 1).div_ceil(2)];
        s += mid * mid * BigUint::from(j + 1);
        for k in 0..=(j - 1) / 2 {
            s += BigUint::from(2u32) * &c[k] * &c[j - k] * BigUint::from(2 * k + 1);
        }
        if j >= 2 {
            for k in 0..=(j - 2) / 2 {
                s += BigUint::from(2u32) * &c[k] * &c[j - k - 1] * BigUint::from(2 * k + 2);
            }
        }
    }
    Ok(s)
}

/// Sub-decoder calls.
pub fn analytic_u(i: u32, term: UTerm) -> Result<BigUint> {
    check_level(i)?;
    let kp = dimensions(i - 1).1;
    let c = binomials(kp);
    let mut s = BigUint::zero();
    for j in 2..=kp {
        let mid = &c[(j - 1).div_ceil(2)];
        let mut t = mid * mid;
        for k in 1..=(j - 1) / 2 {
            t += BigUint::from(2u32) * &c[k] * &c[j - k];
        }
        for k in 1..=(j.saturating_sub(2)) / 2 {
            t += BigUint::from(2u32) * &c[k] * &c[j - k - 1];
        }
        s += BigUint::from(2u32) * t;
    }
    let exponent = match term {
        UTerm::Published => (1u32 << i) - 1,
        UTerm::Counted => kp as u32,
    };
    Ok(BigUint::from(4u32) * (pow2(exponent) - BigUint::from(2u32)) + s)
}

/// `T'_{j}`: average cost once the first quantizer is skipped.
fn t_hat(t: &BigRational, g: &BigUint, level: u32) -> BigRational {
    let half = pow2(dimensions(level).1 as u32 - 1);
    let num = BigRational::from_integer(big(&half)) * t - BigRational::from_integer(big(g));
    num / BigRational::from_integer(big(&half) - BigInt::one())
}

/// Exact average comparisons at level `i >= 2` under `model`, with the
/// intermediate `T'_{i-1}`.
pub fn analytic_t_exact(
    i: u32,
    model: &AnalyticModel,
) -> Result<(BigRational, Option<BigRational>)> {
    if i == 2 {
        return Ok((model.t2.clone(), None));
    }
    check_level(i)?;
    let (prev, _) = analytic_t_exact(i - 1, model)?;
    let g_prev = if i == 3 {
        model.g2.clone()
    } else {
        analytic_g(i - 1)?
    };
    let hat = t_hat(&prev, &g_prev, i - 1);
    let g = analytic_g(i)?;
    let h = analytic_h(i)?;
    let u = analytic_u(i, model.u_term)?;
    let num = BigRational::from_integer(big(&(g + h))) + BigRational::from_integer(big(&u)) * &hat;
    let den = pow2(dimensions(i).1 as u32 - 1);
    Ok((num / BigRational::from_integer(big(&den)), Some(hat)))
}

/// Published-model average as a float.
pub fn analytic_t(i: u32) -> Result<f64> {
    Ok(to_f64(&analytic_t_exact(i, &AnalyticModel::published())?.0))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SampleMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

/// Comparison totals of noiseless fast decodes, grouped by the number `n` of
/// `-1` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    /// Words decoded per `n`.
    pub words: Vec<u64>,
    /// Comparisons spent per `n`.
    pub comparisons: Vec<u64>,
    /// Decodes that did not return the transmitted word.
    pub failures: u64,
}

impl Enumeration {
    fn new(k: usize) -> Self {
        Self {
            words: vec![0; k + 1],
            comparisons: vec![0; k + 1],
            failures: 0,
        }
    }

    fn merge(mut self, o: Self) -> Self {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a += b;
        }
        for (a, b) in self.comparisons.iter_mut().zip(&o.comparisons) {
            *a += b;
        }
        self.failures += o.failures;
        self
    }

    pub fn total_words(&self) -> u64 {
        self.words.iter().sum()
    }

    pub fn total_comparisons(&self) -> u64 {
        self.comparisons.iter().sum()
    }

    pub fn exact_mean(&self) -> BigRational {
        ratio(self.total_comparisons(), self.total_words())
    }

    pub fn mean(&self) -> f64 {
        self.total_comparisons() as f64 / self.total_words() as f64
    }
}

fn tally(c: &TernaryCodebook, x: &AntipodalWord, acc: &mut Enumeration) -> Result<()> {
    let y = spread(c, x, 1.0f64)?;
    let out = fda_decode(c, &y, 1.0)?;
    let n = x.bits().iter().filter(|&&b| b == -1).count();
    acc.words[n] += 1;
    acc.comparisons[n] += out.comparisons;
    acc.failures += (out.word != *x) as u64;
    Ok(())
}

/// Decodes every noiseless word of `c`.
pub fn enumerate(c: &TernaryCodebook) -> Result<Enumeration> {
    let k = c.cols();
    if k > EXHAUSTIVE_MAX_COLS {
        return Err(Error::TooLarge {
            what: "exhaustive comparison census (users)",
            size: k,
            bound: EXHAUSTIVE_MAX_COLS,
            cost: 2f64.powi(k as i32),
        });
    }
    let total = 1u64 << k;
    let chunk = 1u64 << k.saturating_sub(6);
    (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|b| {
            let mut acc = Enumeration::new(k);
            for i in b * chunk..((b + 1) * chunk).min(total) {
                tally(c, &AntipodalWord::from_index(k, i), &mut acc)?;
            }
            Ok(acc)
        })
        .try_reduce(|| Enumeration::new(k), |a, b| Ok(a.merge(b)))
}

/// Decodes `count` uniformly drawn noiseless words. Word `t` depends only on
/// `(seed, t)`.
pub fn sample(c: &TernaryCodebook, count: u64, seed: u64) -> Result<Enumeration> {
    let k = c.cols();
    (0..count)
        .into_par_iter()
        .fold(
            || Ok(Enumeration::new(k)),
            |acc: Result<Enumeration>, t| {
                let mut acc = acc?;
                let mut rng =
                    ChaCha8Rng::seed_from_u64(seed ^ t.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let bits = (0..k)
                    .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                    .collect();
                tally(c, &AntipodalWord::new(bits)?, &mut acc)?;
                Ok(acc)
            },
        )
        .try_reduce(|| Enumeration::new(k), |a, b| Ok(a.merge(b)))
}

/// Mean comparisons per noiseless decode.
pub fn empirical_avg_comparisons(c: &TernaryCodebook, mode: SampleMode) -> Result<f64> {
    Ok(match mode {
        SampleMode::Exhaustive => enumerate(c)?.mean(),
        SampleMode::Sampled { count, seed } => sample(c, count, seed)?.mean(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportMode {
    Analytic,
    Empirical,
    Both,
}

/// Closed-form and measured averages for one level. Exact integers are
/// serialized as decimal strings.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexityReport {
    pub level: u32,
    #[serde(serialize_with = "opt_decimal")]
    pub g: Option<BigUint>,
    #[serde(serialize_with = "opt_decimal")]
    pub h: Option<BigUint>,
    #[serde(serialize_with = "opt_decimal")]
    pub u: Option<BigUint>,
    #[serde(serialize_with = "opt_decimal")]
    pub u_counted: Option<BigUint>,
    /// Published model.
    pub t: Option<f64>,
    pub t_hat_prev: Option<f64>,
    /// Measured level-2 cost with the counted `U`.
    pub t_measured_model: Option<f64>,
    pub empirical_t: Option<f64>,
    /// Exact measured mean as `num/den`.
    pub empirical_exact: Option<String>,
    pub sample_mode: Option<SampleMode>,
    pub ml_hypotheses: String,
}

fn opt_decimal<S: serde::Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_str_radix(10)),
        None => s.serialize_none(),
    }
}

pub fn complexity_report(
    level: u32,
    mode: ReportMode,
    sample_mode: SampleMode,
) -> Result<ComplexityReport> {
    if level < 2 {
        return Err(Error::InvalidArgument(format!(
            "complexity needs level >= 2, got {level}"
        )));
    }
    let k = dimensions(level).1;
    let mut r = ComplexityReport {
        level,
        g: None,
        h: None,
        u: None,
        u_counted: None,
        t: None,
        t_hat_prev: None,
        t_measured_model: None,
        empirical_t: None,
        empirical_exact: None,
        sample_mode: None,
        ml_hypotheses: (BigUint::one() << k).to_str_radix(10),
    };
    if matches!(mode, ReportMode::Analytic | ReportMode::Both) {
        let published = analytic_t_exact(level, &AnalyticModel::published())?;
        r.t = Some(to_f64(&published.0));
        r.t_hat_prev = published.1.as_ref().map(to_f64);
        r.t_measured_model = Some(to_f64(
            &analytic_t_exact(level, &AnalyticModel::measured())?.0,
        ));
        if level == 2 {
            r.g = Some(enumerated_g2());
        } else {
            r.g = Some(analytic_g(level)?);
            r.h = Some(analytic_h(level)?);
            r.u = Some(analytic_u(level, UTerm::Published)?);
            r.u_counted = Some(analytic_u(level, UTerm::Counted)?);
        }
    }
    if matches!(mode, ReportMode::Empirical | ReportMode::Both) {
        let c = build_codebook(level)?;
        let e = match sample_mode {
            SampleMode::Exhaustive => enumerate(&c)?,
            SampleMode::Sampled { count, seed } => sample(&c, count, seed)?,
        };
        r.empirical_t = Some(e.mean());
        let m = e.exact_mean();
        r.empirical_exact = Some(format!("{}/{}", m.numer(), m.denom()));
        r.sample_mode = Some(sample_mode);
    }
    Ok(r)
}
