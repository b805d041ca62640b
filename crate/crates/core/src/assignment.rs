//! Linear sum assignment on square score matrices.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// Bijection on `0..k`; `perm[k]` is the image of `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &m in &mapping {
            if m >= mapping.len() || seen[m] {
                return Err(Error::NotAPermutation(mapping));
            }
            seen[m] = true;
        }
        Ok(Self(mapping))
    }

    pub fn identity(k: usize) -> Self {
        Self((0..k).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<usize> {
        self.0.get(i).copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &m) in self.0.iter().enumerate() {
            inv[m] = i;
        }
        Self(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        Self(other.0.iter().map(|&m| self.0[m]).collect())
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|m| m + 1).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Objective `Σ_k score[k][perm(k)]`.
pub fn objective(score: &SquareMatrix<f64>, perm: &Permutation) -> f64 {
    perm.as_slice()
        .iter()
        .enumerate()
        .map(|(r, &c)| score.get(r, c))
        .sum()
}

fn check_finite(score: &SquareMatrix<f64>) -> Result<()> {
    let k = score.k();
    for r in 0..k {
        for c in 0..k {
            if !score.get(r, c).is_finite() {
                return Err(Error::NonFinite { row: r, col: c });
            }
        }
    }
    Ok(())
}

/// Hungarian method with row/column potentials (shortest augmenting paths),
/// O(K³). Returns the row-to-column assignment. Deterministic: equal
/// candidates are resolved towards the lowest column index.
pub fn solve_assignment(score: &SquareMatrix<f64>, sense: Sense) -> Result<Permutation> {
    check_finite(score)?;
    let n = score.k();
    if n == 0 {
        return Ok(Permutation::identity(0));
    }
    let cost = |r: usize, c: usize| match sense {
        Sense::Minimize => score.get(r, c),
        Sense::Maximize => -score.get(r, c),
    };

    // One-based bookkeeping; index 0 is the virtual root column.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut min_slack = vec![f64::INFINITY; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        min_slack.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < min_slack[j] {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    Permutation::new(assignment)
}

pub const BRUTE_FORCE_MAX_K: usize = 8;

/// Exhaustive search over all K! assignments. Among co-optimal assignments
/// the lexicographically smallest is returned.
pub fn brute_force_assignment(score: &SquareMatrix<f64>, sense: Sense) -> Result<Permutation> {
    let k = score.k();
    if k > BRUTE_FORCE_MAX_K {
        return Err(Error::TooLargeForBruteForce {
            k,
            max: BRUTE_FORCE_MAX_K,
        });
    }
    check_finite(score)?;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for cand in (0..k).permutations(k) {
        let value: f64 = cand.iter().enumerate().map(|(r, &c)| score.get(r, c)).sum();
        let better = match &best {
            None => true,
            Some((b, _)) => match sense {
                Sense::Minimize => value < *b,
                Sense::Maximize => value > *b,
            },
        };
        if better {
            best = Some((value, cand));
        }
    }
    Permutation::new(best.map(|(_, p)| p).unwrap_or_default())
}
