use rayon::prelude::*;

use super::TernaryMatrix;
use crate::{Error, Result};

/// Largest column count [`verify_ud`] enumerates (`3^17 / 2` candidates).
pub const DEFAULT_UD_MAX_COLS: usize = 17;

/// Result of an exhaustive unique-decodability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UdWitness {
    pub verdict: bool,
    /// Lexicographically first `d != 0` with `M d = 0` and leading nonzero
    /// entry `+1`; `None` iff `verdict`.
    pub counterexample: Option<Vec<i8>>,
}

/// Decides whether `M d = 0` has no nonzero solution `d` over `{-1, 0, +1}`.
pub fn verify_ud(m: &TernaryMatrix) -> Result<UdWitness> {
    verify_ud_bounded(m, DEFAULT_UD_MAX_COLS)
}

/// Same as [`verify_ud`] with an explicit bound on the number of columns.
///
/// Candidates are walked in lexicographic order (`-1 < 0 < +1`, first
/// coordinate most significant) with the first nonzero coordinate fixed to
/// `+1`. The walk is split into chunks that run in parallel, and the
/// earliest hit in that order is returned regardless of scheduling.
pub fn verify_ud_bounded(m: &TernaryMatrix, max_cols: usize) -> Result<UdWitness> {
    let k = m.cols();
    if k > max_cols {
        return Err(Error::TooLarge {
            what: "verify_ud column count",
            size: k,
            bound: max_cols,
            cost: (3f64.powi(k as i32) - 1.0) / 2.0,
        });
    }
    let cols: Vec<Vec<(usize, i32)>> = (0..k)
        .map(|c| {
            (0..m.rows())
                .filter(|&r| m.get(r, c) != 0)
                .map(|r| (r, m.get(r, c) as i32))
                .collect()
        })
        .collect();

    // d = (0, ..., 0, +1, suffix). More leading zeros sort first, so the
    // walk starts at p = K-1.
    for p in (0..k).rev() {
        let suffix = k - p - 1;
        let split = suffix.min(6);
        let chunks = 3usize.pow(split as u32);
        let hit = (0..chunks).into_par_iter().find_map_first(|chunk| {
            let mut digits = vec![0i8; suffix];
            let mut rem = chunk;
            for i in (0..split).rev() {
                digits[i] = (rem % 3) as i8 - 1;
                rem /= 3;
            }
            for d in digits.iter_mut().skip(split) {
                *d = -1;
            }
            scan(&cols, m.rows(), p, &mut digits, split)
        });
        if let Some(suffix) = hit {
            let mut d = vec![0i8; k];
            d[p] = 1;
            d[p + 1..].copy_from_slice(&suffix);
            return Ok(UdWitness {
                verdict: false,
                counterexample: Some(d),
            });
        }
    }
    Ok(UdWitness {
        verdict: true,
        counterexample: None,
    })
}

/// Running value of `M d` with a count of its nonzero rows.
struct Acc {
    v: Vec<i32>,
    nonzero: usize,
}

impl Acc {
    #[inline]
    fn add(&mut self, col: &[(usize, i32)], times: i32) {
        for &(r, s) in col {
            let old = self.v[r];
            let new = old + times * s;
            self.v[r] = new;
            self.nonzero = self.nonzero + (new != 0) as usize - (old != 0) as usize;
        }
    }
}

/// Odometer over `digits[free..]`, starting from the given state. Returns the
/// first suffix for which the sum vanishes.
fn scan(
    cols: &[Vec<(usize, i32)>],
    rows: usize,
    p: usize,
    digits: &mut [i8],
    free: usize,
) -> Option<Vec<i8>> {
    let mut acc = Acc {
        v: vec![0; rows],
        nonzero: 0,
    };
    acc.add(&cols[p], 1);
    for (j, &d) in digits.iter().enumerate() {
        if d != 0 {
            acc.add(&cols[p + 1 + j], d as i32);
        }
    }
    loop {
        if acc.nonzero == 0 {
            return Some(digits.to_vec());
        }
        let mut j = digits.len();
        loop {
            if j == free {
                return None;
            }
            j -= 1;
            let col = &cols[p + 1 + j];
            if digits[j] < 1 {
                digits[j] += 1;
                acc.add(col, 1);
                break;
            }
            digits[j] = -1;
            acc.add(col, -2);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::build_codebook;

    fn m(rows: &[&[i8]]) -> TernaryMatrix {
        TernaryMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn equal_columns_fail_with_first_witness() {
        let w = verify_ud(&m(&[&[1, 1], &[1, 1]])).unwrap();
        assert!(!w.verdict);
        assert_eq!(w.counterexample, Some(vec![1, -1]));
    }

    #[test]
    fn all_four_length_two_columns_are_not_ud() {
        let w = verify_ud(&m(&[&[0, 1, 1, 1], &[1, 0, -1, 1]])).unwrap();
        assert!(!w.verdict);
        let d = w.counterexample.unwrap();
        let prod = m(&[&[0, 1, 1, 1], &[1, 0, -1, 1]])
            .mul_vec(&d.iter().map(|&v| v as i32).collect::<Vec<_>>())
            .unwrap();
        assert_eq!(prod, vec![0, 0]);
    }

    #[test]
    fn zero_column_is_its_own_witness() {
        let w = verify_ud(&m(&[&[1, 0, 1]])).unwrap();
        assert_eq!(w.counterexample, Some(vec![0, 1, 0]));
    }

    #[test]
    fn small_levels_are_ud() {
        for level in 1..=2 {
            assert!(
                verify_ud(build_codebook(level).unwrap().matrix())
                    .unwrap()
                    .verdict
            );
        }
    }

    #[test]
    fn refuses_over_bound() {
        let c = build_codebook(2).unwrap();
        match verify_ud_bounded(c.matrix(), 7) {
            Err(Error::TooLarge {
                size: 8, bound: 7, ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    /// Reference enumeration: every d in plain lexicographic order.
    fn naive_first(m: &TernaryMatrix) -> Option<Vec<i8>> {
        let k = m.cols();
        for idx in 0..3usize.pow(k as u32) {
            let mut rem = idx;
            let mut d = vec![0i8; k];
            for i in (0..k).rev() {
                d[i] = (rem % 3) as i8 - 1;
                rem /= 3;
            }
            if d.iter().find(|&&v| v != 0) != Some(&1) {
                continue;
            }
            let prod = m
                .mul_vec(&d.iter().map(|&v| v as i32).collect::<Vec<_>>())
                .unwrap();
            if prod.iter().all(|&v| v == 0) {
                return Some(d);
            }
        }
        None
    }

    #[test]
    fn matches_naive_enumeration_on_small_matrices() {
        let mut state = 0x9e37_79b9_u64;
        for _ in 0..300 {
            let rows = 1 + (state % 3) as usize;
            let cols = 1 + (state / 7 % 8) as usize;
            let entries: Vec<Vec<i8>> = (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| {
                            state = state
                                .wrapping_mul(6364136223846793005)
                                .wrapping_add(1442695040888963407);
                            ((state >> 33) % 3) as i8 - 1
                        })
                        .collect()
                })
                .collect();
            let mat = TernaryMatrix::from_rows(&entries).unwrap();
            let w = verify_ud(&mat).unwrap();
            assert_eq!(w.counterexample, naive_first(&mat), "{entries:?}");
            assert_eq!(w.verdict, w.counterexample.is_none());
        }
    }
}
