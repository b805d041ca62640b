//! Simulation of bagged two-cluster models under a fictitious clusterer of
//! given reliability and skew, plus the outlier matching scenario.
//!
//! The fictitious clusterer sees the true class of each case. With
//! reliability `kappa` it reports the class; otherwise it guesses from the
//! class marginals. Aggregating many bootstrap rounds of it shows how a
//! matcher treats skewed cluster sizes: a chance-neutral matcher keeps the
//! uncertainty tied to `kappa`, trace maximization lets it fall with skew.

mod models;
mod outlier;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::crosstab::MatchingTable;
use crate::error::{Error, Result};
use crate::labels::LabelVector;
use crate::matching::{match_table, MatchMethod};
use crate::mmcc::{cic_stats, majority_of, ProbMatrix, VoteMatrix};
use crate::seeded_rng;

pub use models::{PlantedPartition, PlantedScenario};
pub use outlier::{outlier_scenario, OutcomeRow, OutlierSummary};

/// Redraws allowed per round before a cell is declared degenerate.
pub const REDRAW_BUDGET: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub n: usize,
    /// Fraction of class 1 in the population.
    pub p: f64,
    /// Reliability of the fictitious clusterer.
    pub kappa: f64,
    pub rounds: usize,
    /// Enforce the exact class sizes in every clustering.
    pub fixed: bool,
    pub matcher: MatchMethod,
    pub seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            n: 100,
            p: 0.5,
            kappa: 1.0,
            rounds: 1000,
            fixed: false,
            matcher: MatchMethod::Truematch,
            seed: crate::cli::DEFAULT_SEED,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidArgument(format!("p must lie in (0, 1), got {}", self.p)));
        }
        if !(0.0..=1.0).contains(&self.kappa) {
            return Err(Error::InvalidArgument(format!("kappa must lie in [0, 1], got {}", self.kappa)));
        }
        if self.rounds < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 rounds, got {}", self.rounds)));
        }
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 cases, got {}", self.n)));
        }
        Ok(())
    }

    /// Number of class-1 cases in the population.
    pub fn ones(&self) -> usize {
        (self.p * self.n as f64).round() as usize
    }

    /// True classes: zeros first, then `ones()` ones.
    pub fn population(&self) -> Vec<usize> {
        let ones = self.ones();
        let mut x = vec![0; self.n - ones];
        x.extend(std::iter::repeat_n(1, ones));
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellResult {
    pub p: f64,
    pub kappa: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "CIC")]
    pub cic: f64,
    /// The final majority assignment uses fewer than two clusters, or a
    /// round ran out of redraws.
    pub degenerate: bool,
    pub fixed: bool,
    pub matcher: MatchMethod,
    pub seed: u64,
}

/// Two-class clusterer that recognizes the true class with reliability
/// `kappa` and otherwise guesses with the population marginals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FictitiousClusterer {
    /// Population fraction of class 1.
    pub p: f64,
    pub kappa: f64,
}

impl FictitiousClusterer {
    /// Probability of reporting the true class, for class 0 and class 1.
    pub fn p_identify(&self) -> [f64; 2] {
        [
            self.kappa + (1.0 - self.kappa) * (1.0 - self.p),
            self.kappa + (1.0 - self.kappa) * self.p,
        ]
    }

    /// Clusters cases with the given true classes (0 or 1).
    pub fn assign<R: Rng + ?Sized>(&self, classes: &[usize], rng: &mut R) -> Vec<usize> {
        let p_id = self.p_identify();
        classes
            .iter()
            .map(|&c| {
                if rng.random::<f64>() < p_id[c] {
                    c
                } else {
                    1 - c
                }
            })
            .collect()
    }
}

/// Applies the fictitious clusterer to a whole two-class population, taking
/// `p` from the population itself.
pub fn fictitious_cluster<R: Rng + ?Sized>(x: &LabelVector, kappa: f64, rng: &mut R) -> Result<LabelVector> {
    if x.k() > 2 {
        return Err(Error::InvalidArgument(format!("expected two classes, got {}", x.k())));
    }
    let p = x.counts().get(1).copied().unwrap_or(0) as f64 / x.len() as f64;
    let labels = FictitiousClusterer { p, kappa }.assign(x.as_slice(), rng);
    LabelVector::new(labels, 2)
}

/// Moves uniformly chosen members of the oversized class to the other class
/// until the class sizes equal `target`.
pub fn enforce_sizes<R: Rng + ?Sized>(c: &[usize], target: [usize; 2], rng: &mut R) -> Result<Vec<usize>> {
    if target[0] + target[1] != c.len() {
        return Err(Error::InvalidArgument(format!(
            "target sizes {target:?} do not sum to {}",
            c.len()
        )));
    }
    if let Some(&bad) = c.iter().find(|&&l| l > 1) {
        return Err(Error::LabelOutOfRange { label: bad, k: 2 });
    }
    let ones = c.iter().filter(|&&l| l == 1).count();
    let mut out = c.to_vec();
    let (from, excess) = if ones > target[1] {
        (1, ones - target[1])
    } else {
        (0, target[1] - ones)
    };
    if excess == 0 {
        return Ok(out);
    }
    let members: Vec<usize> = (0..c.len()).filter(|&i| c[i] == from).collect();
    for pick in index::sample(rng, members.len(), excess) {
        out[members[pick]] = 1 - from;
    }
    Ok(out)
}

fn distinct_two(labels: &[usize]) -> bool {
    labels.iter().any(|&l| l != labels[0])
}

/// Aggregates `cfg.rounds` accepted bootstrap rounds of the fictitious
/// clusterer into a vote matrix and summarizes it.
///
/// Each round clusters the distinct in-bag cases, aligns them to the current
/// majority estimate of the in-bag cases that already hold votes, and adds
/// one vote per in-bag case. Out-of-bag cases get no vote. A resample whose
/// clustering or majority estimate has a single class is redrawn.
pub fn simulate_cell(cfg: &SimulationConfig) -> Result<CellResult> {
    simulate_cell_observed(cfg, |_| {})
}

/// An accepted round, as seen right after its votes were added.
#[derive(Debug)]
pub struct AcceptedRound<'a> {
    pub round: usize,
    /// Distinct in-bag cases, ascending.
    pub cases: &'a [usize],
    /// Fictitious clustering of `cases`, before alignment.
    pub clustered: &'a [usize],
    /// Majority estimate the clustering was aligned to (absent in round 0),
    /// for the in-bag cases that already held votes.
    pub majority: Option<&'a [usize]>,
    pub votes: &'a VoteMatrix,
}

/// [`simulate_cell`] with a callback after every accepted round.
pub fn simulate_cell_observed(
    cfg: &SimulationConfig,
    mut observe: impl FnMut(&AcceptedRound<'_>),
) -> Result<CellResult> {
    cfg.validate()?;
    let mut rng = seeded_rng(cfg.seed);
    let n = cfg.n;
    let x = cfg.population();
    let clusterer = FictitiousClusterer {
        p: cfg.ones() as f64 / n as f64,
        kappa: cfg.kappa,
    };

    let mut votes = VoteMatrix::new(n, 2);
    let mut in_bag = vec![false; n];
    let mut exhausted = false;
    'rounds: for round in 0..cfg.rounds {
        let mut attempts = 0;
        loop {
            if attempts == REDRAW_BUDGET {
                exhausted = true;
                break 'rounds;
            }
            attempts += 1;

            in_bag.fill(false);
            for _ in 0..n {
                in_bag[rng.random_range(0..n)] = true;
            }
            let cases: Vec<usize> = (0..n).filter(|&i| in_bag[i]).collect();
            let classes: Vec<usize> = cases.iter().map(|&i| x[i]).collect();
            let mut clustered = clusterer.assign(&classes, &mut rng);
            if cfg.fixed {
                // the in-bag true class sizes, so a perfect clusterer is left alone
                let ones = classes.iter().filter(|&&c| c == 1).count();
                clustered = enforce_sizes(&clustered, [cases.len() - ones, ones], &mut rng)?;
            }
            if !distinct_two(&clustered) {
                continue;
            }

            if round == 0 {
                votes.add_partial_round(&cases, &clustered)?;
                observe(&AcceptedRound {
                    round,
                    cases: &cases,
                    clustered: &clustered,
                    majority: None,
                    votes: &votes,
                });
                break;
            }

            let (voted, voted_clustered): (Vec<usize>, Vec<usize>) = cases
                .iter()
                .zip(&clustered)
                .filter(|(&i, _)| votes.row_sum(i) > 0)
                .map(|(&i, &l)| (i, l))
                .unzip();
            if voted.is_empty() {
                continue;
            }
            let current = majority_of(&votes, &voted, &mut rng)?;
            if !distinct_two(&current) {
                continue;
            }
            let t = MatchingTable::from_labels(&current, &voted_clustered, 2)?;
            let perm = match_table(&t, cfg.matcher, &mut rng).perm;
            let aligned: Vec<usize> = clustered
                .iter()
                .map(|&l| perm.get(l).expect("two-cluster permutation"))
                .collect();
            votes.add_partial_round(&cases, &aligned)?;
            observe(&AcceptedRound {
                round,
                cases: &cases,
                clustered: &clustered,
                majority: Some(&current),
                votes: &votes,
            });
            break;
        }
    }

    let probs = ProbMatrix::from_voted_rows(&votes);
    let stats = cic_stats(&probs);
    let voted: Vec<usize> = (0..n).filter(|&i| votes.row_sum(i) > 0).collect();
    let majority = majority_of(&votes, &voted, &mut rng)?;
    let degenerate = exhausted || majority.is_empty() || !distinct_two(&majority);
    Ok(CellResult {
        p: cfg.p,
        kappa: cfg.kappa,
        h: stats.h,
        i: stats.i,
        cic: stats.cic,
        degenerate,
        fixed: cfg.fixed,
        matcher: cfg.matcher,
        seed: cfg.seed,
    })
}

/// Seed of grid cell `(p_index, kappa_index)`.
pub fn cell_seed(seed: u64, p_index: usize, kappa_index: usize) -> u64 {
    seed ^ (((p_index as u64) << 32) | kappa_index as u64)
}

/// Runs one cell per `(p, kappa)` pair in row-major order (p outer).
/// Cells of a row run in parallel; `on_row` sees each completed row in
/// order.
pub fn grid_sweep_with(
    p_values: &[f64],
    kappa_values: &[f64],
    defaults: &SimulationConfig,
    mut on_row: impl FnMut(&[CellResult]) -> Result<()>,
) -> Result<Vec<CellResult>> {
    if p_values.is_empty() || kappa_values.is_empty() {
        return Err(Error::InvalidArgument("empty parameter grid".into()));
    }
    let mut all = Vec::with_capacity(p_values.len() * kappa_values.len());
    for (ip, &p) in p_values.iter().enumerate() {
        let row = kappa_values
            .par_iter()
            .enumerate()
            .map(|(ik, &kappa)| {
                simulate_cell(&SimulationConfig {
                    p,
                    kappa,
                    seed: cell_seed(defaults.seed, ip, ik),
                    ..*defaults
                })
            })
            .collect::<Result<Vec<_>>>()?;
        on_row(&row)?;
        all.extend(row);
    }
    Ok(all)
}

pub fn grid_sweep(p_values: &[f64], kappa_values: &[f64], defaults: &SimulationConfig) -> Result<Vec<CellResult>> {
    grid_sweep_with(p_values, kappa_values, defaults, |_| Ok(()))
}

/// Header of the grid CSV.
pub const GRID_HEADER: &str = "p,kappa,H,I,CIC,degenerate,fixed,matcher,seed";

impl CellResult {
    /// One CSV record matching [`GRID_HEADER`].
    pub fn csv_record(&self) -> String {
        format!(
            "{},{},{:.6},{:.6},{:.6},{},{},{},{}",
            self.p, self.kappa, self.h, self.i, self.cic, self.degenerate, self.fixed, self.matcher, self.seed
        )
    }
}
