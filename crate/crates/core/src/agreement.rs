//! Agreement indices between two crisp solutions, computed from their
//! matching table.
//!
//! Rand and adjusted Rand depend only on which cases are co-clustered, so
//! they ignore label permutations. The diagonal fraction and Cohen's kappa
//! read the diagonal and so depend on how the solutions were matched.

use serde::Serialize;

use crate::crosstab::MatchingTable;
use crate::error::{Error, Result};

/// All four indices of one table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Agreement {
    pub diagonal: f64,
    pub kappa: f64,
    pub rand: f64,
    pub crand: f64,
}

impl Agreement {
    pub fn of(t: &MatchingTable) -> Result<Self> {
        Ok(Self {
            diagonal: diagonal_fraction(t)?,
            kappa: cohen_kappa(t)?,
            rand: rand_index(t)?,
            crand: adjusted_rand(t)?,
        })
    }
}

/// Fraction of cases on the main diagonal.
pub fn diagonal_fraction(t: &MatchingTable) -> Result<f64> {
    if t.total() == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(t.trace() as f64 / t.total() as f64)
}

/// Cohen's kappa `(p_o − p_e) / (1 − p_e)`.
///
/// Chance agreement is certain (`p_e = 1`) only when every case sits in one
/// diagonal cell, so kappa is 1 there.
pub fn cohen_kappa(t: &MatchingTable) -> Result<f64> {
    let n = t.total();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let n2 = n as u128 * n as u128;
    let chance: u128 = t
        .row_sums()
        .iter()
        .zip(t.col_sums())
        .map(|(&r, &c)| r as u128 * c as u128)
        .sum();
    // p_o − p_e = (trace·N − chance) / N², 1 − p_e = (N² − chance) / N²
    let observed = t.trace() as u128 * n as u128;
    if chance == n2 {
        return Ok(1.0);
    }
    let num = observed as i128 - chance as i128;
    let den = n2 as i128 - chance as i128;
    Ok(num as f64 / den as f64)
}

fn pairs(n: u64) -> u128 {
    let n = n as u128;
    n * n.saturating_sub(1) / 2
}

struct PairCounts {
    total: u128,
    cells: u128,
    rows: u128,
    cols: u128,
}

fn pair_counts(t: &MatchingTable) -> Result<PairCounts> {
    if t.total() < 2 {
        return Err(Error::InvalidArgument(format!(
            "pair-counting indices need at least 2 cases, got {}",
            t.total()
        )));
    }
    Ok(PairCounts {
        total: pairs(t.total()),
        cells: t.counts().as_slice().iter().map(|&n| pairs(n)).sum(),
        rows: t.row_sums().iter().map(|&n| pairs(n)).sum(),
        cols: t.col_sums().iter().map(|&n| pairs(n)).sum(),
    })
}

/// Rand index: share of case pairs on which both solutions agree about
/// being together or apart.
pub fn rand_index(t: &MatchingTable) -> Result<f64> {
    let p = pair_counts(t)?;
    let agree = p.total as i128 + 2 * p.cells as i128 - p.rows as i128 - p.cols as i128;
    Ok(agree as f64 / p.total as f64)
}

/// Hubert–Arabie adjusted Rand index. Returns 0 when the index is undefined
/// (both solutions trivial).
pub fn adjusted_rand(t: &MatchingTable) -> Result<f64> {
    let p = pair_counts(t)?;
    // Scale numerator and denominator by 2·C(N,2) to stay integral:
    // (cells − rows·cols/total) / (½(rows + cols) − rows·cols/total)
    let product = p.rows as i128 * p.cols as i128;
    let num = 2 * (p.cells as i128 * p.total as i128 - product);
    let den = (p.rows as i128 + p.cols as i128) * p.total as i128 - 2 * product;
    if den == 0 {
        return Ok(0.0);
    }
    Ok(num as f64 / den as f64)
}
