//! Leaf decoder for the `4 x 8` seed.
//!
//! With `b_j = (1 - x_j) / 2` the rows of the seed give
//!
//! ```text
//! (y3 - 1) / 2 = -(b1 + b2) + b4 - b6 + b8
//!  y4 / 2      = -b1 + b4 + b6 - b8
//! ```
//!
//! The counts below are named after the roles they play in those sums:
//! `m1 = b1 + b2`, `m11 = b1`, `m2 = b4`, `m3 = b3`, `k1 = b6`, `k2 = b8`,
//! `k3 = b7`.

use super::params::{delta_params, delta_range};
use super::quantize::Constellation;
use crate::{Error, Result, Scalar};

/// Numbers of `-1` entries in the whole word and in its two halves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountSplit {
    pub n: u32,
    pub n_l: u32,
    pub n_r: u32,
}

/// Per-position counts of `-1` entries in a seed word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LeafCounts {
    /// Positions 1 and 2.
    pub m1: u32,
    /// Position 4.
    pub m2: u32,
    /// Position 3.
    pub m3: u32,
    /// Position 1.
    pub m11: u32,
    /// Position 6.
    pub k1: u32,
    /// Position 8.
    pub k2: u32,
    /// Position 7.
    pub k3: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeafDecode {
    pub word: [i8; 8],
    pub counts: LeafCounts,
    pub comparisons: u32,
}

/// Splits `v` into `(floor(v/2), v mod 2)` and the remainder of `total`.
fn split3(v: i64, total: u32) -> (u32, u32, u32) {
    let hi = v.div_euclid(2);
    let lo = v - 2 * hi;
    let rest = total as i64 - hi - lo;
    (hi.max(0) as u32, lo.max(0) as u32, rest.max(0) as u32)
}

fn m11_rule<T: Scalar>(h: T, m1: u32, m2: u32, k1: u32, k2: u32) -> u32 {
    match m1 {
        0 => 0,
        2 => 1,
        _ => {
            let t = h - T::of(k1 as f64) - T::of(m2 as f64) + T::of(k2 as f64);
            if t >= T::of(-0.5) {
                0
            } else {
                1
            }
        }
    }
}

fn stats<T: Scalar>(y: &[T]) -> (T, T) {
    let two = T::of(2.0);
    ((y[2] - T::one()) / two, y[3] / two)
}

/// Recovers `(k1, k2, k3)` once the left counts are known.
pub fn right_decode<T: Scalar>(y: &[T], n_r: u32, m1: u32, m2: u32) -> (u32, u32, u32, u32) {
    let (s3, _) = stats(y);
    let stat = s3 - T::of(m2 as f64) + T::of(m1 as f64);
    let q = Constellation {
        lo: -1,
        hi: 1,
        step: 1,
    }
    .quantize(stat);
    let (k2, k3, k1) = split3(q.z + n_r as i64, n_r);
    (k1, k2, k3, q.comparisons)
}

/// Recovers `(m1, m2, m3, m11)` once the right counts are known.
pub fn left_decode<T: Scalar>(y: &[T], n_l: u32, k1: u32, k2: u32) -> (LeafCounts, u32) {
    let (s3, h) = stats(y);
    let (dmin, dmax) = delta_range(n_l);
    let off = k2 as i64 - k1 as i64;
    let q = Constellation {
        lo: off + dmin,
        hi: off + dmax,
        step: 1,
    }
    .quantize(s3);
    let (m2, m3, m1) = split3(q.z - off + n_l as i64, n_l);
    let m11 = m11_rule(h, m1, m2, k1, k2);
    (
        LeafCounts {
            m1,
            m2,
            m3,
            m11,
            k1,
            k2,
            ..Default::default()
        },
        q.comparisons,
    )
}

/// Recovers all seven counts from `n_l` and `n_r` alone by trying every
/// split of the third-row statistic that the quantizer leaves open and
/// keeping the one most consistent with the fourth row.
pub fn lr_decode<T: Scalar>(y: &[T], n_l: u32, n_r: u32) -> (LeafCounts, u32) {
    let (s3, h) = stats(y);
    let (dmin, dmax) = delta_range(n_l);
    let grid = Constellation {
        lo: dmin - 1,
        hi: dmax + 1,
        step: 1,
    };
    let q = grid.quantize(s3);
    let zeta_lo = grid.len() as u32 - q.zeta + 1;
    let p = delta_params(n_l, zeta_lo);

    let mut best = LeafCounts::default();
    let mut d3 = T::of(10f64.exp());
    for delta3 in (-1 + p.beta_min)..=(-1 + p.beta_max) {
        let (m2, m3, m1) = split3(q.z - delta3 + n_l as i64, n_l);
        let (k2, k3, k1) = split3(delta3 + n_r as i64, n_r);
        let m11 = m11_rule(h, m1, m2, k1, k2);
        let d =
            (h + T::of(m11 as f64) - T::of(m2 as f64) - T::of(k1 as f64) + T::of(k2 as f64)).abs();
        if d < d3 {
            d3 = d;
            best = LeafCounts {
                m1,
                m2,
                m3,
                m11,
                k1,
                k2,
                k3,
            };
        }
    }
    (best, q.comparisons)
}

/// Decodes a seed word from its chips once `n`, `n_l` and `n_r` are known.
///
/// Only `y[2]` and `y[3]` are read; `y[0]` and `y[1]` were consumed when
/// the counts were found.
pub fn sub_decode8<T: Scalar>(y: &[T], split: CountSplit) -> Result<LeafDecode> {
    let CountSplit { n, n_l, n_r } = split;
    if y.len() != 4 || n_l > 4 || n_r > 3 || n < n_l + n_r || n > n_l + n_r + 1 {
        return Err(Error::InvalidArgument(format!(
            "inconsistent leaf input: len={} n={n} n_l={n_l} n_r={n_r}",
            y.len()
        )));
    }
    let left_known = match n_l {
        0 => Some(LeafCounts::default()),
        4 => Some(LeafCounts {
            m1: 2,
            m2: 1,
            m3: 1,
            m11: 1,
            ..Default::default()
        }),
        _ => None,
    };
    let right_known = match n_r {
        0 => Some((0, 0, 0)),
        3 => Some((1, 1, 1)),
        _ => None,
    };
    let (counts, comparisons) = match (left_known, right_known) {
        (Some(l), Some((k1, k2, k3))) => (LeafCounts { k1, k2, k3, ..l }, 0),
        (Some(l), None) => {
            let (k1, k2, k3, c) = right_decode(y, n_r, l.m1, l.m2);
            (LeafCounts { k1, k2, k3, ..l }, c)
        }
        (None, Some((k1, k2, k3))) => {
            let (l, c) = left_decode(y, n_l, k1, k2);
            (LeafCounts { k3, ..l }, c)
        }
        (None, None) => lr_decode(y, n_l, n_r),
    };
    let c = counts;
    let b = [
        c.m11,
        c.m1.saturating_sub(c.m11),
        c.m3,
        c.m2,
        n - n_l - n_r,
        c.k1,
        c.k3,
        c.k2,
    ];
    let mut word = [0i8; 8];
    for (w, &bit) in word.iter_mut().zip(&b) {
        *w = if bit >= 1 { -1 } else { 1 };
    }
    Ok(LeafDecode {
        word,
        counts,
        comparisons,
    })
}
