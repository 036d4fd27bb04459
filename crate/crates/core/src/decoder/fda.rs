use super::quantize::Constellation;
use super::subdecoder::{sub_decode8, CountSplit};
use super::DecodeOutcome;
use crate::channel::{AntipodalWord, ChipVector};
use crate::codebook::{dimensions, TernaryCodebook};
use crate::{Error, Result, Scalar};

/// One split performed by the recursion, outermost first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitRecord {
    pub level: u32,
    pub split: CountSplit,
    /// Decoded middle (level >= 3) or fifth (level 2) entry.
    pub middle: i8,
}

/// Recursive fast decoder.
///
/// The first chip gives the number `n` of `-1` entries and the second one
/// how they divide between the two halves. The halves are then decoded as
/// codewords of the previous level, with their first chip replaced by the
/// now-known count, down to the `4 x 8` seed. Only quantizer comparisons are
/// counted. The second and later calls never re-quantize a known count.
pub fn fda_decode<T: Scalar>(
    c: &TernaryCodebook,
    y: &ChipVector<T>,
    amplitude: T,
) -> Result<DecodeOutcome> {
    fda_decode_traced(c, y, amplitude, None)
}

/// [`fda_decode`] that also records every count split.
pub fn fda_decode_traced<T: Scalar>(
    c: &TernaryCodebook,
    y: &ChipVector<T>,
    amplitude: T,
    trace: Option<&mut Vec<SplitRecord>>,
) -> Result<DecodeOutcome> {
    let level = c.level();
    if level < 2 || dimensions(level) != (c.rows(), c.cols()) {
        return Err(Error::InvalidArgument(format!(
            "fast decoding needs a recursive codebook of level >= 2, got level {level} ({}x{})",
            c.rows(),
            c.cols()
        )));
    }
    if y.len() != c.rows() {
        return Err(Error::InvalidArgument(format!(
            "received vector has {} chips, codebook has {} rows",
            y.len(),
            c.rows()
        )));
    }
    if amplitude.is_nan() || amplitude <= T::zero() {
        return Err(Error::InvalidArgument("amplitude must be positive".into()));
    }
    let ys: Vec<T> = y.chips.iter().map(|&v| v / amplitude).collect();
    let k = c.cols() as i64;
    let q = Constellation {
        lo: -k,
        hi: k,
        step: 2,
    }
    .quantize(ys[0]);
    let mut comparisons = q.comparisons as u64;
    let mut bits = Vec::with_capacity(c.cols());
    if q.z.abs() == k {
        bits.resize(c.cols(), q.z.signum() as i8);
    } else {
        let n = ((k - q.z) / 2) as u32;
        let mut sink = Vec::new();
        let trace = trace.unwrap_or(&mut sink);
        decode_known(level, &ys, n, &mut comparisons, &mut bits, trace)?;
    }
    Ok(DecodeOutcome {
        word: AntipodalWord::new(bits)?,
        comparisons,
    })
}

/// Widths of the two halves whose difference the second chip measures.
fn half_widths(level: u32) -> (i64, i64) {
    match level {
        2 => (4, 3),
        _ => {
            let half = dimensions(level - 1).1 as i64;
            (half, half)
        }
    }
}

/// Largest value of `2 (n_near - n_far)` over splits of `n` with at most
/// one `-1` outside the two halves.
fn extreme(n: i64, near: i64) -> i64 {
    let a = near.min(n);
    2 * (a - (n - 1 - a).max(0))
}

fn decode_known<T: Scalar>(
    level: u32,
    y: &[T],
    n: u32,
    comparisons: &mut u64,
    out: &mut Vec<i8>,
    trace: &mut Vec<SplitRecord>,
) -> Result<()> {
    let k = dimensions(level).1;
    if n == 0 || n as usize == k {
        out.extend(std::iter::repeat_n(if n == 0 { 1 } else { -1 }, k));
        return Ok(());
    }
    let (wl, wr) = half_widths(level);
    let ni = n as i64;
    // y2 - (wl - wr) = 2 (n_r - n_l)
    let stat = y[1] - T::of((wl - wr) as f64);
    let grid = Constellation {
        lo: -extreme(ni, wl),
        hi: extreme(ni, wr),
        step: 2,
    };
    let q = grid.quantize(stat);
    *comparisons += q.comparisons as u64;
    let t = 2 * ni - q.z;
    let n_l = t.div_euclid(4).clamp(0, wl) as u32;
    let n_r = (4 * ni - t).div_euclid(4).clamp(0, wr) as u32;
    let split = CountSplit { n, n_l, n_r };

    if level == 2 {
        let leaf = sub_decode8(y, split)?;
        *comparisons += leaf.comparisons as u64;
        trace.push(SplitRecord {
            level,
            split,
            middle: leaf.word[4],
        });
        out.extend_from_slice(&leaf.word);
        return Ok(());
    }
    let middle = if n > n_l + n_r { -1 } else { 1 };
    trace.push(SplitRecord {
        level,
        split,
        middle,
    });
    let half_l = y.len() / 2;
    let head = |count: u32| T::of((wl - 2 * count as i64) as f64);
    let mut yl = Vec::with_capacity(half_l);
    yl.push(head(n_l));
    yl.extend_from_slice(&y[2..=half_l]);
    let mut yr = Vec::with_capacity(half_l);
    yr.push(head(n_r));
    yr.extend_from_slice(&y[half_l + 1..]);
    decode_known(level - 1, &yl, n_l, comparisons, out, trace)?;
    out.push(middle);
    decode_known(level - 1, &yr, n_r, comparisons, out, trace)
}
