use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::TernaryMatrix;
use crate::{Error, Result};

/// Outcome of the exhaustive search for the widest UD matrix of a given
/// length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FtSearchResult {
    pub length: usize,
    pub max_columns: usize,
    /// Lexicographically first column set of maximum size.
    pub exemplar: TernaryMatrix,
    /// Search-tree nodes expanded, summed over workers.
    pub nodes: u64,
}

/// Nonzero ternary columns of length `l` whose first nonzero entry is `+1`,
/// in lexicographic order with `-1 < 0 < +1`.
pub fn sign_classes(l: usize) -> Vec<Vec<i8>> {
    let total = 3usize.pow(l as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0i8; l];
            for i in (0..l).rev() {
                v[i] = (idx % 3) as i8 - 1;
                idx /= 3;
            }
            v
        })
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

/// Largest `k` with `3^k <= (2k+1)^l`: a UD set of `k` columns has `3^k`
/// distinct ternary combinations, all inside the box `[-k, k]^l`.
fn counting_bound(l: usize) -> usize {
    let mut k = 1;
    while 3f64.powi(k as i32 + 1) <= ((2 * k + 3) as f64).powi(l as i32) {
        k += 1;
    }
    k
}

struct Grid {
    centre: usize,
    offsets: Vec<isize>,
}

/// Sum-set `V(S) = { sum e_s s : e in {-1,0,1}^S }` kept both as a list and
/// as a bitmap over the box `[-B, B]^l`.
struct SumSet {
    list: Vec<u32>,
    mark: Vec<u64>,
}

impl SumSet {
    #[inline]
    fn contains(&self, idx: usize) -> bool {
        self.mark[idx >> 6] >> (idx & 63) & 1 == 1
    }

    #[inline]
    fn insert(&mut self, idx: usize) {
        self.mark[idx >> 6] |= 1 << (idx & 63);
        self.list.push(idx as u32);
    }

    fn truncate(&mut self, len: usize) {
        for &idx in &self.list[len..] {
            let idx = idx as usize;
            self.mark[idx >> 6] &= !(1 << (idx & 63));
        }
        self.list.truncate(len);
    }
}

struct Search<'a> {
    grid: &'a Grid,
    global_best: &'a AtomicUsize,
    best: usize,
    best_set: Vec<usize>,
    path: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    /// Adds `c` to the current set if it keeps the set UD. Returns the
    /// previous sum-set length for undoing.
    fn extend(&self, set: &mut SumSet, c: usize) -> usize {
        let len = set.list.len();
        let off = self.grid.offsets[c];
        for i in 0..len {
            let v = set.list[i] as isize;
            for w in [v + off, v - off] {
                let w = w as usize;
                if !set.contains(w) {
                    set.insert(w);
                }
            }
        }
        len
    }

    /// `feasible` holds candidates after the last chosen column that are not
    /// in the current sum-set; only those can extend the set.
    fn dfs(&mut self, set: &mut SumSet, feasible: &[usize]) {
        self.nodes += 1;
        let depth = self.path.len();
        if depth > self.best {
            self.best = depth;
            self.best_set = self.path.clone();
            self.global_best.fetch_max(depth, Ordering::Relaxed);
        }
        for (i, &c) in feasible.iter().enumerate() {
            let reach = depth + feasible.len() - i;
            if reach <= self.best || reach < self.global_best.load(Ordering::Relaxed) {
                break;
            }
            let undo = self.extend(set, c);
            let next: Vec<usize> = feasible[i + 1..]
                .iter()
                .copied()
                .filter(|&d| {
                    !set.contains((self.grid.centre as isize + self.grid.offsets[d]) as usize)
                })
                .collect();
            self.path.push(c);
            self.dfs(set, &next);
            self.path.pop();
            set.truncate(undo);
        }
    }
}

/// Exhaustive search for `f_t(l)`, the maximum number of columns of a UD
/// ternary matrix with `l` rows.
///
/// Depth-first extension in lexicographic order over [`sign_classes`]. A
/// column `c` can join a UD set `S` iff `c` is not a ternary combination of
/// `S`, so each node carries the sum-set of its columns and the list of
/// candidates still compatible with it; branches that cannot beat the best
/// set found so far are cut. First-level branches run in parallel and share
/// only the best size, so the result does not depend on scheduling.
pub fn max_ud_columns(l: usize) -> Result<FtSearchResult> {
    if !(2..=4).contains(&l) {
        return Err(Error::Unsupported(format!(
            "max_ud_columns supports lengths 2..=4, got {l}"
        )));
    }
    let classes = sign_classes(l);
    let bound = counting_bound(l);
    let radix = 2 * bound + 1;
    let cells = radix.pow(l as u32);
    let centre = (cells - 1) / 2;
    let offsets: Vec<isize> = classes
        .iter()
        .map(|c| {
            c.iter()
                .rev()
                .fold(0isize, |acc, &v| acc * radix as isize + v as isize)
        })
        .collect();
    let grid = Grid { centre, offsets };
    let global_best = AtomicUsize::new(0);

    let branches: Vec<(usize, Vec<usize>, u64)> = (0..classes.len())
        .into_par_iter()
        .map(|first| {
            let mut set = SumSet {
                list: Vec::with_capacity(1 << 12),
                mark: vec![0; cells / 64 + 1],
            };
            set.insert(centre);
            let mut search = Search {
                grid: &grid,
                global_best: &global_best,
                best: 0,
                best_set: Vec::new(),
                path: Vec::new(),
                nodes: 0,
            };
            search.extend(&mut set, first);
            search.path.push(first);
            let rest: Vec<usize> = (first + 1..classes.len()).collect();
            search.dfs(&mut set, &rest);
            (search.best, search.best_set, search.nodes)
        })
        .collect();

    let nodes = branches.iter().map(|b| b.2).sum();
    let max_columns = branches.iter().map(|b| b.0).max().unwrap_or(0);
    // Branches are cut only when strictly worse than another branch, so the
    // earliest branch reaching the maximum holds the lexicographic first set.
    let best_set = &branches
        .iter()
        .find(|b| b.0 == max_columns)
        .expect("non-empty")
        .1;
    let columns: Vec<&Vec<i8>> = best_set.iter().map(|&i| &classes[i]).collect();
    let exemplar = TernaryMatrix::from_columns(&columns)?;
    Ok(FtSearchResult {
        length: l,
        max_columns,
        exemplar,
        nodes,
    })
}
