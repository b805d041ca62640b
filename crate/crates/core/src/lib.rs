//! Chance-neutral matching of crisp cluster solutions.
//!
//! Matching two clusterings by maximizing the diagonal of their contingency
//! table aligns partitions even when they are unrelated: with unequal cluster
//! sizes the big cells dominate and random agreement looks like structure.
//! This crate matches on signed chi-squared residuals instead, breaks every
//! tie at random, and builds the surrounding machinery on top of that:
//!
//! * [`labels`]: label vectors, parsing and relabeling
//! * [`crosstab`]: matching tables and their signed residual transform
//! * [`assignment`]: an O(K³) Hungarian solver plus an exhaustive oracle
//! * [`matching`]: trace maximization, truematch and the truematch heuristic
//! * [`agreement`]: diagonal fraction, Cohen's kappa, Rand and adjusted Rand
//! * [`mmcc`]: the multiple-match cluster count bagging loop and its statistics
//! * [`simulate`]: fictitious clusterers, skew/reliability grids, the outlier scenario
//! * [`cli`]: the command implementations behind the `truematch` binary

pub mod agreement;
pub mod assignment;
pub mod cli;
pub mod crosstab;
mod error;
pub mod labels;
pub mod matching;
mod matrix;
pub mod mmcc;
pub mod simulate;

pub use error::{Error, Result};
pub use matrix::SquareMatrix;

pub use agreement::{adjusted_rand, cohen_kappa, diagonal_fraction, rand_index, Agreement};
pub use assignment::{brute_force_assignment, solve_assignment, Permutation, Sense};
pub use crosstab::{crosstab, residuals, MatchingTable, ResidualMatrix};
pub use labels::{apply_permutation, canonical_pair, parse_labels, LabelMapping, LabelVector};
pub use matching::{match_table, MatchMethod, MatchResult, MatchedPair};
pub use mmcc::{cic_stats, majority_labels, mmcc_run, BaseClusterer, CicStats, MmccConfig, ProbMatrix, VoteMatrix};

/// The random stream used throughout the crate. Seeded streams are portable
/// across platforms, which keeps every stochastic output reproducible.
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Builds a [`SeededRng`] from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
