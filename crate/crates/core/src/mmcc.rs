//! Multiple match cluster count (MMCC): bagging for crisp clusterers.
//!
//! Each round clusters a bootstrap resample, aligns the resulting complete
//! label vector to the current majority estimate and adds one vote per case.
//! Row-normalizing the vote matrix gives per-case membership probabilities.
//! With a chance-neutral matcher, unjustified cluster splits spread their
//! votes across columns and the probabilities become fuzzy.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use crate::crosstab::MatchingTable;
use crate::error::{Error, Result};
use crate::labels::LabelVector;
use crate::matching::{match_table, MatchMethod};

/// N×K vote counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteMatrix {
    n: usize,
    k: usize,
    votes: Vec<u64>,
    total_rounds: usize,
}

impl VoteMatrix {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            votes: vec![0; n * k],
            total_rounds: 0,
        }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        let mut votes = Vec::with_capacity(n * k);
        for row in rows {
            if row.len() != k {
                return Err(Error::InvalidArgument("ragged vote matrix".into()));
            }
            votes.extend(row);
        }
        let total_rounds = votes
            .chunks(k.max(1))
            .map(|r| r.iter().sum::<u64>() as usize)
            .max()
            .unwrap_or(0);
        Ok(Self {
            n,
            k,
            votes,
            total_rounds,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn total_rounds(&self) -> usize {
        self.total_rounds
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.votes[i * self.k..(i + 1) * self.k]
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.row(i).iter().sum()
    }

    pub fn total_votes(&self) -> u64 {
        self.votes.iter().sum()
    }

    /// One vote for every case: case `i` votes for `labels[i]`.
    pub fn add_round(&mut self, labels: &[usize]) -> Result<()> {
        if labels.len() != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: labels.len(),
            });
        }
        self.check_labels(labels)?;
        for (i, &l) in labels.iter().enumerate() {
            self.votes[i * self.k + l] += 1;
        }
        self.total_rounds += 1;
        Ok(())
    }

    /// One vote for each listed case only.
    pub fn add_partial_round(&mut self, cases: &[usize], labels: &[usize]) -> Result<()> {
        if cases.len() != labels.len() {
            return Err(Error::LengthMismatch {
                left: cases.len(),
                right: labels.len(),
            });
        }
        self.check_labels(labels)?;
        if let Some(&bad) = cases.iter().find(|&&i| i >= self.n) {
            return Err(Error::InvalidArgument(format!("case {bad} out of range")));
        }
        for (&i, &l) in cases.iter().zip(labels) {
            self.votes[i * self.k + l] += 1;
        }
        self.total_rounds += 1;
        Ok(())
    }

    fn check_labels(&self, labels: &[usize]) -> Result<()> {
        match labels.iter().find(|&&l| l >= self.k) {
            Some(&l) => Err(Error::LabelOutOfRange { label: l, k: self.k }),
            None => Ok(()),
        }
    }
}

/// Row-stochastic N×K membership probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbMatrix {
    n: usize,
    k: usize,
    probs: Vec<f64>,
}

impl ProbMatrix {
    /// Divides each row by its vote count. Every row needs at least one vote.
    pub fn from_votes(c: &VoteMatrix) -> Result<Self> {
        if let Some(row) = (0..c.n()).find(|&i| c.row_sum(i) == 0) {
            return Err(Error::EmptyVoteRow { row });
        }
        Ok(Self::normalize_rows(c, (0..c.n()).collect()))
    }

    /// Like [`from_votes`](Self::from_votes), skipping rows without votes.
    pub fn from_voted_rows(c: &VoteMatrix) -> Self {
        Self::normalize_rows(c, (0..c.n()).filter(|&i| c.row_sum(i) > 0).collect())
    }

    fn normalize_rows(c: &VoteMatrix, rows: Vec<usize>) -> Self {
        let mut probs = Vec::with_capacity(rows.len() * c.k());
        for &i in &rows {
            let sum = c.row_sum(i) as f64;
            probs.extend(c.row(i).iter().map(|&v| v as f64 / sum));
        }
        Self {
            n: rows.len(),
            k: c.k(),
            probs,
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        let mut probs = Vec::with_capacity(n * k);
        for (i, row) in rows.into_iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if row.len() != k || (sum - 1.0).abs() > 1e-9 || row.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::InvalidArgument(format!("row {i} is not a probability vector")));
            }
            probs.extend(row);
        }
        Ok(Self { n, k, probs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.probs[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.probs.chunks(self.k.max(1))
    }

    pub fn column_means(&self) -> Vec<f64> {
        let mut q = vec![0.0; self.k];
        for row in self.rows() {
            for (qc, p) in q.iter_mut().zip(row) {
                *qc += p;
            }
        }
        q.iter_mut().for_each(|v| *v /= self.n as f64);
        q
    }

    /// Largest absolute elementwise difference.
    pub fn max_abs_diff(&self, other: &ProbMatrix) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with one row per case and columns `p1..pK`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<String> = (1..=self.k).map(|c| format!("p{c}")).collect();
        w.write_record(&header).expect("writing to memory");
        for row in self.rows() {
            w.write_record(row.iter().map(|p| format!("{p:.6}")))
                .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
    }
}

/// Summary statistics of a membership probability matrix, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CicStats {
    /// Model uncertainty: mean row entropy.
    #[serde(rename = "H")]
    pub h: f64,
    /// Relative model complexity: `(2^entropy(q) − 1) / N`, `q` the column means.
    #[serde(rename = "RMC")]
    pub rmc: f64,
    /// Model information: `entropy(q) − H`.
    #[serde(rename = "I")]
    pub i: f64,
    /// Cluster information criterion: `I − H`.
    #[serde(rename = "CIC")]
    pub cic: f64,
}

fn entropy_bits(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

pub fn cic_stats(p: &ProbMatrix) -> CicStats {
    if p.n() == 0 {
        return CicStats {
            h: 0.0,
            rmc: 0.0,
            i: 0.0,
            cic: 0.0,
        };
    }
    let h = p.rows().map(entropy_bits).sum::<f64>() / p.n() as f64;
    let marginal = entropy_bits(&p.column_means());
    let rmc = (marginal.exp2() - 1.0) / p.n() as f64;
    let i = marginal - h;
    CicStats {
        h,
        rmc,
        i,
        cic: i - h,
    }
}

/// Row-wise argmax of the votes; ties are broken uniformly at random.
pub fn majority_labels<R: Rng + ?Sized>(c: &VoteMatrix, rng: &mut R) -> Result<LabelVector> {
    let cases: Vec<usize> = (0..c.n()).collect();
    let labels = majority_of(c, &cases, rng)?;
    LabelVector::new(labels, c.k())
}

/// Majority labels of the listed cases only.
pub fn majority_of<R: Rng + ?Sized>(c: &VoteMatrix, cases: &[usize], rng: &mut R) -> Result<Vec<usize>> {
    let mut tied = Vec::with_capacity(c.k());
    cases
        .iter()
        .map(|&i| {
            let row = c.row(i);
            let max = *row.iter().max().unwrap_or(&0);
            if max == 0 {
                return Err(Error::EmptyVoteRow { row: i });
            }
            tied.clear();
            tied.extend(row.iter().enumerate().filter(|(_, &v)| v == max).map(|(l, _)| l));
            Ok(if tied.len() == 1 {
                tied[0]
            } else {
                tied[rng.random_range(0..tied.len())]
            })
        })
        .collect()
}

/// A crisp base clusterer: fit on a resample, predict all cases.
pub trait BaseClusterer<T> {
    type Model;

    /// Fits a `k`-cluster model to the resampled cases `sample` (indices
    /// into `data`, with repetitions).
    fn fit<R: Rng + ?Sized>(&self, data: &[T], sample: &[usize], k: usize, rng: &mut R) -> Result<Self::Model>;

    /// Labels in `0..k` for every case of `data`.
    fn predict(&self, model: &Self::Model, data: &[T]) -> Vec<usize>;
}

/// Stop once no probability moved by more than `tolerance` over the last
/// `window` rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarlyStop {
    pub window: usize,
    pub tolerance: f64,
}

impl Default for EarlyStop {
    fn default() -> Self {
        Self {
            window: 50,
            tolerance: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmccConfig {
    pub k: usize,
    /// Round budget, including the first unmatched round.
    pub rounds: usize,
    pub matcher: MatchMethod,
    pub early_stop: Option<EarlyStop>,
}

impl MmccConfig {
    pub fn new(k: usize, rounds: usize, matcher: MatchMethod) -> Self {
        Self {
            k,
            rounds,
            matcher,
            early_stop: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MmccOutput {
    pub votes: VoteMatrix,
    pub probs: ProbMatrix,
    pub rounds_run: usize,
}

impl MmccOutput {
    pub fn stats(&self) -> CicStats {
        cic_stats(&self.probs)
    }
}

/// Runs MMCC on `data`.
///
/// The first resample votes as predicted. Every later resample is aligned
/// to the current row-wise majority of the votes before voting.
pub fn mmcc_run<T, B, R>(data: &[T], base: &B, cfg: &MmccConfig, rng: &mut R) -> Result<MmccOutput>
where
    B: BaseClusterer<T>,
    R: Rng + ?Sized,
{
    let n = data.len();
    let k = cfg.k;
    if cfg.rounds < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 rounds, got {}", cfg.rounds)));
    }
    if k == 0 || n < k {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= N, got k={k}, N={n}")));
    }

    let mut votes = VoteMatrix::new(n, k);
    let mut snapshot: Option<ProbMatrix> = None;
    let mut rounds_run = 0;
    for round in 0..cfg.rounds {
        let sample: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let model = base.fit(data, &sample, k, rng)?;
        let predicted = base.predict(&model, data);
        if predicted.len() != n {
            return Err(Error::Clusterer(format!(
                "predicted {} labels for {n} cases",
                predicted.len()
            )));
        }
        let predicted = LabelVector::new(predicted, k)?;

        let vote = if round == 0 {
            predicted
        } else {
            let current = majority_labels(&votes, rng)?;
            let t = MatchingTable::from_labels(current.as_slice(), predicted.as_slice(), k)?;
            match_table(&t, cfg.matcher, rng).align(&predicted)?
        };
        votes.add_round(vote.as_slice())?;
        rounds_run += 1;

        if let Some(stop) = cfg.early_stop {
            if stop.window > 0 && rounds_run % stop.window == 0 {
                let now = ProbMatrix::from_votes(&votes)?;
                let settled = snapshot
                    .as_ref()
                    .is_some_and(|prev| prev.max_abs_diff(&now) < stop.tolerance);
                snapshot = Some(now);
                if settled {
                    break;
                }
            }
        }
    }
    let probs = ProbMatrix::from_votes(&votes)?;
    Ok(MmccOutput {
        votes,
        probs,
        rounds_run,
    })
}

/// Lloyd's k-means on the resample, nearest-centroid prediction for all
/// cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LloydClusterer {
    pub iterations: usize,
}

impl LloydClusterer {
    pub fn new(iterations: usize) -> Self {
        Self { iterations }
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = squared_distance(point, centroid);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

impl BaseClusterer<Vec<f64>> for LloydClusterer {
    type Model = Vec<Vec<f64>>;

    fn fit<R: Rng + ?Sized>(&self, data: &[Vec<f64>], sample: &[usize], k: usize, rng: &mut R) -> Result<Self::Model> {
        let mut distinct: Vec<usize> = Vec::new();
        for &i in sample {
            if !distinct.iter().any(|&j| data[j] == data[i]) {
                distinct.push(i);
            }
        }
        if distinct.len() < k {
            return Err(Error::Clusterer(format!(
                "{k} clusters requested but the resample has {} distinct points",
                distinct.len()
            )));
        }
        let mut centroids: Vec<Vec<f64>> = distinct
            .choose_multiple(rng, k)
            .map(|&i| data[i].clone())
            .collect();

        let dim = centroids[0].len();
        let mut assignment = vec![usize::MAX; sample.len()];
        for _ in 0..self.iterations {
            let mut changed = false;
            for (slot, &i) in assignment.iter_mut().zip(sample) {
                let c = nearest(&data[i], &centroids);
                if *slot != c {
                    *slot = c;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
            let mut sums = vec![vec![0.0; dim]; k];
            let mut sizes = vec![0usize; k];
            for (&c, &i) in assignment.iter().zip(sample) {
                sizes[c] += 1;
                for (s, x) in sums[c].iter_mut().zip(&data[i]) {
                    *s += x;
                }
            }
            for ((centroid, sum), &size) in centroids.iter_mut().zip(sums).zip(&sizes) {
                // empty clusters keep their previous centroid
                if size > 0 {
                    *centroid = sum.into_iter().map(|s| s / size as f64).collect();
                }
            }
        }
        Ok(centroids)
    }

    fn predict(&self, model: &Self::Model, data: &[Vec<f64>]) -> Vec<usize> {
        data.iter().map(|p| nearest(p, model)).collect()
    }
}
