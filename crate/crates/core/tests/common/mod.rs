//! Property suites shared by the `properties` and `acceptance` targets.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use truematch::{
    adjusted_rand, cic_stats, match_table, rand_index, residuals, seeded_rng, MatchMethod, MatchingTable, Permutation,
    ProbMatrix, SquareMatrix, VoteMatrix,
};

pub type Suite = fn(&mut TestRunner) -> Result<(), String>;

pub const SUITES: [(&str, Suite); 5] = [
    ("residual invariants", residual_invariants),
    ("matcher equivariance", matcher_equivariance),
    ("rand/ARI relabeling invariance", pair_index_invariance),
    ("P̂ row-stochastic", prob_rows_stochastic),
    ("H/RMC bounds and column symmetry", cic_bounds),
];

/// Deterministic runner so failures reproduce.
pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn table() -> impl Strategy<Value = MatchingTable> {
    (1usize..7).prop_flat_map(|k| {
        prop::collection::vec(0u64..30, k * k)
            .prop_map(move |cells| MatchingTable::from_counts(SquareMatrix::from_fn(k, |r, c| cells[r * k + c])))
    })
}

fn table_and_perm() -> impl Strategy<Value = (MatchingTable, Vec<usize>)> {
    table().prop_flat_map(|t| {
        let k = t.k();
        (Just(t), Just((0..k).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
}

pub fn residual_invariants(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&table_and_perm(), |(t, order)| {
            let k = t.k();
            let r = residuals(&t);
            let n = t.total() as f64;
            if t.total() > 0 {
                let mut total = 0.0;
                for i in 0..k {
                    let row: f64 = r.expected.row(i).iter().sum();
                    let col: f64 = (0..k).map(|j| r.expected.get(j, i)).sum();
                    prop_assert!((row - t.row_sums()[i] as f64).abs() <= 1e-9 * n);
                    prop_assert!((col - t.col_sums()[i] as f64).abs() <= 1e-9 * n);
                    total += row;
                }
                prop_assert!((total - n).abs() <= 1e-9 * n);
            }
            let mut sum = 0.0;
            let mut independent = true;
            for i in 0..k {
                for j in 0..k {
                    let (d, s) = (r.dev.get(i, j), r.signed.get(i, j));
                    prop_assert!(d >= 0.0);
                    let diff = t.get(i, j) as f64 - r.expected.get(i, j);
                    prop_assert_eq!(s, diff.signum() * d * (diff != 0.0) as u8 as f64);
                    independent &= diff.abs() < 1e-9;
                    sum += d;
                }
            }
            prop_assert!(close(r.chi2, sum, 1e-9));
            prop_assert_eq!(r.chi2 < 1e-9, independent);

            let conj = residuals(&t.reorder(&order));
            for i in 0..k {
                for j in 0..k {
                    prop_assert!(close(conj.signed.get(i, j), r.signed.get(order[i], order[j]), 1e-12));
                }
            }

            if k == 2 && r.chi2 > 0.0 {
                let s = &r.signed;
                let pattern = [s.get(0, 0), s.get(0, 1), s.get(1, 0), s.get(1, 1)].map(f64::signum);
                prop_assert!(pattern == [1.0, -1.0, -1.0, 1.0] || pattern == [-1.0, 1.0, 1.0, -1.0], "{pattern:?}");
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn matcher_equivariance(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(table_and_perm(), any::<u64>()), |((t, rho), seed)| {
            let relabeled = t.permute_columns(&Permutation::new(rho).map_err(|e| TestCaseError::fail(e.to_string()))?);
            for method in [MatchMethod::Tracemax, MatchMethod::Truematch, MatchMethod::TruematchHeuristic] {
                let x = match_table(&t, method, &mut seeded_rng(seed));
                let y = match_table(&relabeled, method, &mut seeded_rng(seed));
                prop_assert_eq!(&x.matched_table, &t.permute_columns(&x.perm));
                prop_assert_eq!(&y.matched_table, &relabeled.permute_columns(&y.perm));
                match method {
                    MatchMethod::Tracemax => prop_assert_eq!(x.matched_table.trace(), y.matched_table.trace()),
                    MatchMethod::Truematch => prop_assert!(close(x.residual_trace(), y.residual_trace(), 1e-9)),
                    MatchMethod::TruematchHeuristic => {}
                }
                for w in x.pairs.windows(2) {
                    prop_assert!(w[0].residual >= w[1].residual);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn labelings() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>)> {
    (1usize..6, 2usize..60).prop_flat_map(|(k, n)| {
        let perm = Just((0..k).collect::<Vec<_>>()).prop_shuffle();
        (
            prop::collection::vec(0..k, n),
            prop::collection::vec(0..k, n),
            perm.clone(),
            perm,
        )
    })
}

pub fn pair_index_invariance(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&labelings(), |(a, b, ra, rb)| {
            let k = ra.len();
            let base = MatchingTable::from_labels(&a, &b, k).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let a2: Vec<usize> = a.iter().map(|&l| ra[l]).collect();
            let b2: Vec<usize> = b.iter().map(|&l| rb[l]).collect();
            for (x, y) in [(&a2, &b), (&a, &b2), (&a2, &b2)] {
                let t = MatchingTable::from_labels(x, y, k).map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert_eq!(rand_index(&t).unwrap(), rand_index(&base).unwrap());
                prop_assert_eq!(adjusted_rand(&t).unwrap(), adjusted_rand(&base).unwrap());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn votes() -> impl Strategy<Value = VoteMatrix> {
    (1usize..30, 1usize..6).prop_flat_map(|(n, k)| {
        (
            prop::collection::vec(prop::collection::vec(0u64..20, k), n),
            prop::collection::vec(0..k, n),
        )
            .prop_map(|(mut rows, bump)| {
                for (row, c) in rows.iter_mut().zip(bump) {
                    row[c] += 1;
                }
                VoteMatrix::from_rows(rows).expect("rectangular")
            })
    })
}

pub fn prob_rows_stochastic(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&votes(), |c| {
            let p = ProbMatrix::from_votes(&c).map_err(|e| TestCaseError::fail(e.to_string()))?;
            for row in p.rows() {
                prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
                prop_assert!(row.iter().all(|&x| (0.0..=1.0).contains(&x)));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn cic_bounds(runner: &mut TestRunner) -> Result<(), String> {
    let strategy = votes().prop_flat_map(|c| {
        let k = c.k();
        (Just(c), Just((0..k).collect::<Vec<_>>()).prop_shuffle())
    });
    runner
        .run(&strategy, |(c, sigma)| {
            let p = ProbMatrix::from_votes(&c).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let (n, k) = (p.n() as f64, p.k() as f64);
            let s = cic_stats(&p);
            prop_assert!(s.h >= 0.0 && s.h <= k.log2() + 1e-9, "H {}", s.h);
            prop_assert!(s.rmc >= -1e-12 && s.rmc <= (k - 1.0) / n + 1e-9, "RMC {}", s.rmc);
            prop_assert!(close(s.cic, s.i - s.h, 1e-12));

            let shuffled = p.rows().map(|row| sigma.iter().map(|&j| row[j]).collect()).collect();
            let q = cic_stats(&ProbMatrix::from_rows(shuffled).map_err(|e| TestCaseError::fail(e.to_string()))?);
            for (x, y) in [(s.h, q.h), (s.rmc, q.rmc), (s.i, q.i), (s.cic, q.cic)] {
                prop_assert!(close(x, y, 1e-9));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}
