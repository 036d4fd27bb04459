use super::DecodeOutcome;
use crate::channel::{AntipodalWord, ChipVector};
use crate::codebook::TernaryCodebook;
use crate::{Error, Result, Scalar};

/// Largest number of users the exhaustive decoder accepts.
pub const DEFAULT_ML_MAX_COLS: usize = 17;

/// Exhaustive maximum-likelihood decoder with all `2^K` noiseless chip
/// vectors tabulated up front.
///
/// Hypothesis `i` is [`AntipodalWord::from_index`]`(K, i)`, so scanning in
/// index order and keeping the first strict minimum breaks ties toward the
/// lexicographically smallest word. Partial distances are abandoned once they
/// exceed the best full distance, which cannot change the result.
#[derive(Debug, Clone)]
pub struct MlDecoder {
    k: usize,
    l: usize,
    codewords: Vec<i8>,
}

impl MlDecoder {
    pub fn new(c: &TernaryCodebook) -> Result<Self> {
        Self::with_bound(c, DEFAULT_ML_MAX_COLS)
    }

    pub fn with_bound(c: &TernaryCodebook, max_cols: usize) -> Result<Self> {
        let (k, l) = (c.cols(), c.rows());
        if k > max_cols || k > 30 {
            return Err(Error::TooLarge {
                what: "ML hypothesis count (users)",
                size: k,
                bound: max_cols,
                cost: 2f64.powi(k as i32) * l as f64,
            });
        }
        let m = c.matrix();
        let mut codewords = vec![0i8; l << k];
        // index 0 is all -1
        for (r, w) in codewords[..l].iter_mut().enumerate() {
            *w = -m.row(r).iter().map(|&v| v as i32).sum::<i32>() as i8;
        }
        for i in 1..1usize << k {
            let low = i.trailing_zeros() as usize;
            let user = k - 1 - low;
            let prev = i & (i - 1);
            for r in 0..l {
                codewords[i * l + r] = codewords[prev * l + r] + 2 * m.get(r, user);
            }
        }
        Ok(Self { k, l, codewords })
    }

    pub fn users(&self) -> usize {
        self.k
    }

    pub fn hypotheses(&self) -> u64 {
        1 << self.k
    }

    /// Noiseless chips of hypothesis `index` at unit amplitude.
    pub fn codeword(&self, index: u64) -> &[i8] {
        let i = index as usize;
        &self.codewords[i * self.l..(i + 1) * self.l]
    }

    pub fn decode<T: Scalar>(&self, y: &ChipVector<T>, amplitude: T) -> Result<DecodeOutcome> {
        if y.len() != self.l {
            return Err(Error::InvalidArgument(format!(
                "received vector has {} chips, codebook has {} rows",
                y.len(),
                self.l
            )));
        }
        if amplitude.is_nan() || amplitude <= T::zero() {
            return Err(Error::InvalidArgument("amplitude must be positive".into()));
        }
        let ys: Vec<T> = y.chips.iter().map(|&v| v / amplitude).collect();
        let mut best = T::infinity();
        let mut best_idx = 0usize;
        for (i, cw) in self.codewords.chunks_exact(self.l).enumerate() {
            let mut d = T::zero();
            for (&yv, &c) in ys.iter().zip(cw) {
                let e = yv - T::of(c as f64);
                d = d + e * e;
                if d > best {
                    break;
                }
            }
            if d < best {
                best = d;
                best_idx = i;
            }
        }
        Ok(DecodeOutcome {
            word: AntipodalWord::from_index(self.k, best_idx as u64),
            comparisons: self.hypotheses(),
        })
    }
}

/// One-shot exhaustive decode; prefer [`MlDecoder`] for repeated use.
pub fn ml_decode<T: Scalar>(
    c: &TernaryCodebook,
    y: &ChipVector<T>,
    amplitude: T,
) -> Result<DecodeOutcome> {
    MlDecoder::new(c)?.decode(y, amplitude)
}

/// `||y - A C x||^2`.
pub fn residual<T: Scalar>(
    c: &TernaryCodebook,
    y: &ChipVector<T>,
    x: &AntipodalWord,
    amplitude: T,
) -> Result<T> {
    let v: Vec<i32> = x.bits().iter().map(|&b| b as i32).collect();
    let cx = c.matrix().mul_vec(&v)?;
    Ok(y.chips.iter().zip(cx).fold(T::zero(), |acc, (&yv, s)| {
        let e = yv - amplitude * T::of(s as f64);
        acc + e * e
    }))
}
