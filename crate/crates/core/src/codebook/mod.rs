//! Recursive ternary signature matrices.
//!
//! Level 1 is the `2 x 3` matrix, level 2 the `4 x 8` seed and every level
//! `i >= 3` is assembled from the previous one with its first row removed:
//!
//! ```text
//!   [ +1 ... +1   +1   +1 ... +1 ]
//!   [ +1 ... +1    0   -1 ... -1 ]
//!   [    Ĉ         0      0      ]
//!   [    0         0      Ĉ      ]
//! ```
//!
//! so `L_i = 2 L_{i-1}` and `K_i = 2 K_{i-1} + 1`.

mod search;
mod ud;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use search::{max_ud_columns, sign_classes, FtSearchResult};
pub use ud::{verify_ud, verify_ud_bounded, UdWitness, DEFAULT_UD_MAX_COLS};

/// Highest level [`build_codebook`] accepts. Level 10 is already
/// `1024 x 2303` entries.
pub const DEFAULT_MAX_LEVEL: u32 = 10;

/// Dense matrix over `{-1, 0, +1}`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TernaryMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i8>,
}

impl TernaryMatrix {
    /// Builds a matrix from row slices. Every row must have the same length
    /// and every entry must be `-1`, `0` or `+1`.
    pub fn from_rows<R: AsRef<[i8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.is_empty() || cols == 0 {
            return Err(Error::InvalidArgument("matrix must be non-empty".into()));
        }
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !(-1..=1).contains(*v)) {
                return Err(Error::InvalidArgument(format!(
                    "entry {v} in row {i} is not ternary"
                )));
            }
            entries.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Builds a matrix from its columns.
    pub fn from_columns<C: AsRef<[i8]>>(columns: &[C]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        let transposed: Vec<Vec<i8>> = (0..rows)
            .map(|r| {
                columns
                    .iter()
                    .map(|c| c.as_ref().get(r).copied().unwrap_or(i8::MAX))
                    .collect()
            })
            .collect();
        Self::from_rows(&transposed)
    }

    fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i8 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    fn set(&mut self, r: usize, c: usize, v: i8) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<i8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Squared Euclidean norm of every column (its number of nonzeros).
    pub fn column_energies(&self) -> Vec<u32> {
        (0..self.cols)
            .map(|c| (0..self.rows).filter(|&r| self.get(r, c) != 0).count() as u32)
            .collect()
    }

    /// For each row, the `(column, sign)` pairs of its nonzero entries.
    pub fn row_supports(&self) -> Vec<Vec<(usize, i8)>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(|(c, v)| (c, *v))
                    .collect()
            })
            .collect()
    }

    /// Exact integer product `M v`.
    pub fn mul_vec(&self, v: &[i32]) -> Result<Vec<i32>> {
        if v.len() != self.cols {
            return Err(Error::InvalidArgument(format!(
                "vector has length {}, matrix has {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(&a, &b)| a as i32 * b).sum())
            .collect())
    }

    /// Same matrix with column `c` negated.
    pub fn negate_column(&self, c: usize) -> Self {
        let mut out = self.clone();
        for r in 0..self.rows {
            out.set(r, c, -self.get(r, c));
        }
        out
    }

    /// One row per line, entries comma-separated, no header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// A level of the recursive construction together with its matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryCodebook {
    level: u32,
    matrix: TernaryMatrix,
}

#[derive(Serialize, Deserialize)]
struct CodebookJson {
    level: u32,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<i8>>,
}

impl TernaryCodebook {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Number of chips `L`.
    pub fn rows(&self) -> usize {
        self.matrix.rows
    }

    /// Number of users `K`.
    pub fn cols(&self) -> usize {
        self.matrix.cols
    }

    pub fn matrix(&self) -> &TernaryMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> TernaryMatrix {
        self.matrix
    }

    /// Mean squared column norm, i.e. the average signature energy per user.
    pub fn mean_column_energy(&self) -> f64 {
        let e = self.matrix.column_energies();
        e.iter().map(|&v| v as f64).sum::<f64>() / e.len() as f64
    }

    pub fn to_csv(&self) -> String {
        self.matrix.to_csv()
    }

    /// `{"level":i,"rows":L,"cols":K,"entries":[[...],...]}`
    pub fn to_json(&self) -> String {
        let doc = CodebookJson {
            level: self.level,
            rows: self.rows(),
            cols: self.cols(),
            entries: self.matrix.to_rows(),
        };
        serde_json::to_string(&doc).expect("codebook serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: CodebookJson = serde_json::from_str(s)?;
        let matrix = TernaryMatrix::from_rows(&doc.entries)?;
        if matrix.rows != doc.rows || matrix.cols != doc.cols {
            return Err(Error::InvalidArgument(
                "declared shape does not match entries".into(),
            ));
        }
        Ok(Self {
            level: doc.level,
            matrix,
        })
    }
}

/// `(L_i, K_i)` for a level, without building the matrix.
pub fn dimensions(level: u32) -> (usize, usize) {
    match level {
        1 => (2, 3),
        _ => {
            let (mut l, mut k) = (4usize, 8usize);
            for _ in 2..level {
                l *= 2;
                k = 2 * k + 1;
            }
            (l, k)
        }
    }
}

const LEVEL1: [[i8; 3]; 2] = [[1, 1, 1], [1, 0, -1]];

const LEVEL2: [[i8; 8]; 4] = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 0, -1, -1, -1],
    [1, 1, 0, -1, 0, 1, 0, -1],
    [1, 0, 0, -1, 0, -1, 0, 1],
];

/// Builds the level-`level` codebook, refusing levels above
/// [`DEFAULT_MAX_LEVEL`].
pub fn build_codebook(level: u32) -> Result<TernaryCodebook> {
    build_codebook_bounded(level, DEFAULT_MAX_LEVEL)
}

pub fn build_codebook_bounded(level: u32, max_level: u32) -> Result<TernaryCodebook> {
    if level < 1 || level > max_level {
        return Err(Error::InvalidArgument(format!(
            "level must be in 1..={max_level}, got {level}"
        )));
    }
    let matrix = match level {
        1 => TernaryMatrix::from_rows(&LEVEL1)?,
        2 => TernaryMatrix::from_rows(&LEVEL2)?,
        _ => {
            let prev = build_codebook_bounded(level - 1, max_level)?;
            let hat = strip_first_row(prev.matrix())?;
            extend(&hat)
        }
    };
    Ok(TernaryCodebook { level, matrix })
}

fn extend(hat: &TernaryMatrix) -> TernaryMatrix {
    let half_k = hat.cols;
    let half_l = hat.rows + 1;
    let (l, k) = (2 * half_l, 2 * half_k + 1);
    let mut m = TernaryMatrix::zeros(l, k);
    for c in 0..k {
        m.set(0, c, 1);
    }
    for c in 0..half_k {
        m.set(1, c, 1);
        m.set(1, half_k + 1 + c, -1);
    }
    for r in 0..hat.rows {
        for c in 0..half_k {
            let v = hat.get(r, c);
            m.set(2 + r, c, v);
            m.set(1 + half_l + r, half_k + 1 + c, v);
        }
    }
    m
}

/// Drops the first row; order of the remaining rows is kept.
pub fn strip_first_row(m: &TernaryMatrix) -> Result<TernaryMatrix> {
    if m.rows < 2 {
        return Err(Error::InvalidArgument(
            "cannot strip the only row of a matrix".into(),
        ));
    }
    Ok(TernaryMatrix {
        rows: m.rows - 1,
        cols: m.cols,
        entries: m.entries[m.cols..].to_vec(),
    })
}
