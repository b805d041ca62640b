//! Label matching: classic trace maximization, truematch and the truematch
//! heuristic.
//!
//! All three methods align the *column* solution to the *row* solution of a
//! matching table. [`MatchResult::perm`] acts on column labels: relabeling
//! the second solution with it yields [`MatchResult::matched_table`].
//!
//! Every method starts by shuffling rows and columns at random, so that
//! co-optimal alignments are picked uniformly while the assignment solver
//! itself stays deterministic.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::assignment::{solve_assignment, Permutation, Sense};
use crate::crosstab::{residuals, MatchingTable};
use crate::error::{Error, Result};
use crate::labels::{apply_permutation, LabelVector};
use crate::matrix::SquareMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MatchMethod {
    /// Maximize the trace of raw counts.
    Tracemax,
    /// Maximize the trace of signed chi-squared residuals (Hungarian method).
    Truematch,
    /// Greedy truematch: repeatedly take the cell with the largest residual
    /// of the remaining subtable.
    TruematchHeuristic,
}

impl MatchMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Tracemax => "tracemax",
            Self::Truematch => "truematch",
            Self::TruematchHeuristic => "truematch-heuristic",
        }
    }
}

impl fmt::Display for MatchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for MatchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tracemax" => Ok(Self::Tracemax),
            "truematch" => Ok(Self::Truematch),
            "truematch-heuristic" => Ok(Self::TruematchHeuristic),
            other => Err(Error::InvalidArgument(format!("unknown match method {other:?}"))),
        }
    }
}

/// One matched row/column pair of the original table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchedPair {
    pub row: usize,
    pub col: usize,
    /// Signed residual of the cell in the unmatched table.
    pub residual: f64,
    pub count: u64,
}

/// The random draws a matching consumed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SeedTrace {
    /// Shuffled row `i` is original row `row_shuffle[i]`.
    pub row_shuffle: Vec<usize>,
    /// Shuffled column `j` is original column `col_shuffle[j]`.
    pub col_shuffle: Vec<usize>,
    /// Heuristic only: index chosen among tied target cells, per step.
    pub target_picks: Vec<usize>,
    /// Random keys ordering pairs with equal residuals.
    pub pair_keys: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub method: MatchMethod,
    /// Relabeling of the column solution.
    pub perm: Permutation,
    /// Matched pairs, non-increasing by residual.
    pub pairs: Vec<MatchedPair>,
    pub table_before: MatchingTable,
    /// Counts of `(a, perm(b))`.
    pub matched_table: MatchingTable,
    /// Order in which the matching reports its rows. Truematch and the
    /// heuristic work on the randomly shuffled table and report in that
    /// order; trace maximization reports in the original order.
    pub row_order: Vec<usize>,
    pub seed_trace: SeedTrace,
    /// Number of cell residuals evaluated while matching.
    pub residuals_computed: usize,
}

impl MatchResult {
    /// Matched table with rows, and their aligned columns, in
    /// [`row_order`](Self::row_order).
    pub fn presented_table(&self) -> MatchingTable {
        self.matched_table.reorder(&self.row_order)
    }

    /// Relabels the column solution with [`perm`](Self::perm).
    pub fn align(&self, b: &LabelVector) -> Result<LabelVector> {
        apply_permutation(b, &self.perm)
    }

    /// Sum of the unmatched table's signed residuals over the matched cells.
    pub fn residual_trace(&self) -> f64 {
        self.pairs.iter().map(|p| p.residual).sum()
    }
}

/// Matches the column solution of `t` to its row solution.
pub fn match_table<R: Rng + ?Sized>(t: &MatchingTable, method: MatchMethod, rng: &mut R) -> MatchResult {
    match method {
        MatchMethod::Tracemax => match_tracemax(t, rng),
        MatchMethod::Truematch => match_truematch(t, rng),
        MatchMethod::TruematchHeuristic => match_truematch_heuristic(t, rng),
    }
}

/// Permutation maximizing the trace of raw counts.
pub fn match_tracemax<R: Rng + ?Sized>(t: &MatchingTable, rng: &mut R) -> MatchResult {
    let mut trace = SeedTrace::default();
    let (rows, cols) = shuffle_axes(t.k(), rng, &mut trace);
    let shuffled = t.select(&rows, &cols);
    let score = shuffled.counts().map(|n| n as f64);
    let row_to_col = solve_in_shuffled_frame(&score, &rows, &cols);
    let identity = (0..t.k()).collect();
    finish(MatchMethod::Tracemax, t, row_to_col, identity, trace, t.k() * t.k(), rng)
}

/// Truematch: shuffle rows and columns, transform counts to signed
/// residuals, maximize their trace, order pairs by residual.
pub fn match_truematch<R: Rng + ?Sized>(t: &MatchingTable, rng: &mut R) -> MatchResult {
    let mut trace = SeedTrace::default();
    let (rows, cols) = shuffle_axes(t.k(), rng, &mut trace);
    let shuffled = t.select(&rows, &cols);
    let score = residuals(&shuffled).signed;
    let row_to_col = solve_in_shuffled_frame(&score, &rows, &cols);
    finish(MatchMethod::Truematch, t, row_to_col, rows, trace, t.k() * t.k(), rng)
}

/// Truematch heuristic: while at least two rows and two columns remain,
/// recompute residuals on the remaining subtable, match the cell that is
/// largest by residual, then by count, then at random, and drop its row
/// and column. The last row and column are matched to each other.
pub fn match_truematch_heuristic<R: Rng + ?Sized>(t: &MatchingTable, rng: &mut R) -> MatchResult {
    let k = t.k();
    let mut trace = SeedTrace::default();
    let (rows, cols) = shuffle_axes(k, rng, &mut trace);
    let shuffled = t.select(&rows, &cols);

    let mut remaining_rows: Vec<usize> = (0..k).collect();
    let mut remaining_cols: Vec<usize> = (0..k).collect();
    let mut row_to_col = vec![0; k];
    let mut computed = 0;
    while remaining_rows.len() >= 2 && remaining_cols.len() >= 2 {
        let sub = subtable(&shuffled, &remaining_rows, &remaining_cols);
        let s = residuals(&sub).signed;
        computed += remaining_rows.len() * remaining_cols.len();

        let mut best: Vec<(usize, usize)> = Vec::new();
        let mut best_key = (f64::NEG_INFINITY, 0u64);
        for (ri, &r) in remaining_rows.iter().enumerate() {
            for (ci, &c) in remaining_cols.iter().enumerate() {
                let key = (s.get(ri, ci), shuffled.get(r, c));
                match key.0.total_cmp(&best_key.0).then(key.1.cmp(&best_key.1)) {
                    Ordering::Greater => {
                        best_key = key;
                        best.clear();
                        best.push((ri, ci));
                    }
                    Ordering::Equal => best.push((ri, ci)),
                    Ordering::Less => {}
                }
            }
        }
        let pick = if best.len() > 1 {
            let i = rng.random_range(0..best.len());
            trace.target_picks.push(i);
            i
        } else {
            0
        };
        let (ri, ci) = best[pick];
        row_to_col[remaining_rows[ri]] = remaining_cols[ci];
        remaining_rows.remove(ri);
        remaining_cols.remove(ci);
    }
    if let (Some(&r), Some(&c)) = (remaining_rows.first(), remaining_cols.first()) {
        row_to_col[r] = c;
    }

    let mut original = vec![0; k];
    for (i, &j) in row_to_col.iter().enumerate() {
        original[rows[i]] = cols[j];
    }
    finish(MatchMethod::TruematchHeuristic, t, original, rows, trace, computed, rng)
}

/// Residual evaluations the heuristic performs on a K×K table:
/// `K² + (K−1)² + … + 2²`.
pub fn heuristic_residual_count(k: usize) -> usize {
    if k < 2 {
        0
    } else {
        k * (k + 1) * (2 * k + 1) / 6 - 1
    }
}

fn shuffle_axes<R: Rng + ?Sized>(k: usize, rng: &mut R, trace: &mut SeedTrace) -> (Vec<usize>, Vec<usize>) {
    let mut rows: Vec<usize> = (0..k).collect();
    let mut cols: Vec<usize> = (0..k).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    trace.row_shuffle = rows.clone();
    trace.col_shuffle = cols.clone();
    (rows, cols)
}

/// Maximizes `score` (given in the shuffled frame) and maps the assignment
/// back to original row and column indices.
fn solve_in_shuffled_frame(score: &SquareMatrix<f64>, rows: &[usize], cols: &[usize]) -> Vec<usize> {
    let assignment =
        solve_assignment(score, Sense::Maximize).expect("counts and residuals are finite");
    let mut row_to_col = vec![0; rows.len()];
    for (i, &j) in assignment.as_slice().iter().enumerate() {
        row_to_col[rows[i]] = cols[j];
    }
    row_to_col
}

fn subtable(t: &MatchingTable, rows: &[usize], cols: &[usize]) -> MatchingTable {
    let k = rows.len();
    debug_assert_eq!(k, cols.len());
    MatchingTable::from_counts(SquareMatrix::from_fn(k, |r, c| t.get(rows[r], cols[c])))
}

fn finish<R: Rng + ?Sized>(
    method: MatchMethod,
    t: &MatchingTable,
    row_to_col: Vec<usize>,
    row_order: Vec<usize>,
    mut trace: SeedTrace,
    residuals_computed: usize,
    rng: &mut R,
) -> MatchResult {
    let row_to_col = Permutation::new(row_to_col).expect("matching is a bijection");
    let perm = row_to_col.inverse();
    let s = residuals(t).signed;

    let keys: Vec<u64> = (0..t.k()).map(|_| rng.random()).collect();
    let mut pairs: Vec<(MatchedPair, u64)> = row_to_col
        .as_slice()
        .iter()
        .enumerate()
        .map(|(row, &col)| {
            let pair = MatchedPair {
                row,
                col,
                residual: s.get(row, col),
                count: t.get(row, col),
            };
            (pair, keys[row])
        })
        .collect();
    pairs.sort_by(|(a, ka), (b, kb)| b.residual.total_cmp(&a.residual).then(ka.cmp(kb)));
    trace.pair_keys = keys;

    MatchResult {
        method,
        matched_table: t.permute_columns(&perm),
        perm,
        pairs: pairs.into_iter().map(|(p, _)| p).collect(),
        table_before: t.clone(),
        row_order,
        seed_trace: trace,
        residuals_computed,
    }
}
