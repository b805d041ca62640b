//! Matching tables and the signed chi-squared residual transform.

use serde::Serialize;

use crate::assignment::Permutation;
use crate::error::{Error, Result};
use crate::labels::LabelVector;
use crate::matrix::SquareMatrix;

/// K×K contingency table of two crisp solutions: rows index the first
/// solution's labels, columns the second's.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingTable {
    counts: SquareMatrix<u64>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
}

impl MatchingTable {
    pub fn from_counts(counts: SquareMatrix<u64>) -> Self {
        let k = counts.k();
        let mut row_sums = vec![0; k];
        let mut col_sums = vec![0; k];
        for (r, row_sum) in row_sums.iter_mut().enumerate() {
            for (c, col_sum) in col_sums.iter_mut().enumerate() {
                let n = counts.get(r, c);
                *row_sum += n;
                *col_sum += n;
            }
        }
        let total = row_sums.iter().sum();
        Self {
            counts,
            row_sums,
            col_sums,
            total,
        }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        Ok(Self::from_counts(SquareMatrix::from_rows(rows)?))
    }

    /// Cross-tabulates two raw zero-based label slices over `k` labels.
    pub fn from_labels(a: &[usize], b: &[usize], k: usize) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        let mut counts = SquareMatrix::zeros(k);
        for (&r, &c) in a.iter().zip(b) {
            if r >= k || c >= k {
                return Err(Error::LabelOutOfRange { label: r.max(c), k });
            }
            counts.set(r, c, counts.get(r, c) + 1);
        }
        Ok(Self::from_counts(counts))
    }

    pub fn k(&self) -> usize {
        self.counts.k()
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts.get(row, col)
    }

    pub fn counts(&self) -> &SquareMatrix<u64> {
        &self.counts
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn trace(&self) -> u64 {
        (0..self.k()).map(|i| self.get(i, i)).sum()
    }

    /// Table of `(a, perm(b))`: column `l` moves to column `perm(l)`.
    pub fn permute_columns(&self, perm: &Permutation) -> Self {
        let inv = perm.inverse();
        let rows: Vec<usize> = (0..self.k()).collect();
        Self::from_counts(self.counts.select(&rows, inv.as_slice()))
    }

    /// Entry `(r, c)` of the result is entry `(rows[r], cols[c])` of `self`.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_counts(self.counts.select(rows, cols))
    }

    /// Same-ordered rows and columns: the table as seen after relabeling
    /// both solutions with `order`.
    pub fn reorder(&self, order: &[usize]) -> Self {
        self.select(order, order)
    }
}

/// Cross-tabulates two label vectors. The table is square over the larger of
/// the two label spaces; missing clusters show up as zero rows or columns.
pub fn crosstab(a: &LabelVector, b: &LabelVector) -> Result<MatchingTable> {
    let k = a.k().max(b.k());
    MatchingTable::from_labels(a.as_slice(), b.as_slice(), k)
}

/// Independence-model expectations and residuals of a matching table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualMatrix {
    /// `n_k · n_l / N`
    pub expected: SquareMatrix<f64>,
    /// `(n − n̂)² / n̂`, zero where `n̂` is zero
    pub dev: SquareMatrix<f64>,
    /// `sign(n − n̂) · dev`
    pub signed: SquareMatrix<f64>,
    pub chi2: f64,
}

/// Transforms counts into signed normalized squared deviations from the
/// independence model. Cells in an empty row or column are match-neutral
/// (deviation 0).
pub fn residuals(t: &MatchingTable) -> ResidualMatrix {
    let k = t.k();
    let total = t.total() as f64;
    let mut expected = SquareMatrix::zeros(k);
    let mut dev = SquareMatrix::zeros(k);
    let mut signed = SquareMatrix::zeros(k);
    let mut chi2 = 0.0;
    if t.total() == 0 {
        return ResidualMatrix {
            expected,
            dev,
            signed,
            chi2,
        };
    }
    for r in 0..k {
        for c in 0..k {
            let e = t.row_sums()[r] as f64 * t.col_sums()[c] as f64 / total;
            expected.set(r, c, e);
            if e > 0.0 {
                let diff = t.get(r, c) as f64 - e;
                let d = diff * diff / e;
                dev.set(r, c, d);
                let s = if diff > 0.0 {
                    d
                } else if diff < 0.0 {
                    -d
                } else {
                    0.0
                };
                signed.set(r, c, s);
                chi2 += d;
            }
        }
    }
    ResidualMatrix {
        expected,
        dev,
        signed,
        chi2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(rows: Vec<Vec<u64>>) -> MatchingTable {
        MatchingTable::from_rows(rows).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    /// Independent hand route: per-cell formula written out directly.
    fn oracle_signed(n: f64, row: f64, col: f64, total: f64) -> f64 {
        let e = row * col / total;
        let d = (n - e).powi(2) / e;
        if n >= e {
            d
        } else {
            -d
        }
    }

    #[test]
    fn outlier_crosstabs() {
        let mut a = vec![0; 100];
        a[99] = 1;
        let t = crosstab(
            &LabelVector::new(a.clone(), 2).unwrap(),
            &LabelVector::new(a.clone(), 2).unwrap(),
        )
        .unwrap();
        assert_eq!(t.counts().to_rows(), vec![vec![99, 0], vec![0, 1]]);

        let mut b = vec![0; 100];
        b[0] = 1;
        let t = crosstab(
            &LabelVector::new(a, 2).unwrap(),
            &LabelVector::new(b, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(t.counts().to_rows(), vec![vec![98, 1], vec![1, 0]]);
    }

    #[test]
    fn self_crosstab_is_identity() {
        let v = LabelVector::from_labels(vec![0, 1, 2]).unwrap();
        let t = crosstab(&v, &v).unwrap();
        assert_eq!(
            t.counts().to_rows(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
    }

    #[test]
    fn crosstab_length_mismatch() {
        let a = LabelVector::from_labels(vec![0, 1]).unwrap();
        let b = LabelVector::from_labels(vec![0]).unwrap();
        assert!(matches!(crosstab(&a, &b), Err(Error::LengthMismatch { .. })));
        assert!(matches!(
            MatchingTable::from_labels(&[0, 3], &[0, 0], 2),
            Err(Error::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn residuals_of_mismatched_outlier_table() {
        let r = residuals(&table(vec![vec![98, 1], vec![1, 0]]));
        let expected = [[98.01, 0.99], [0.99, 0.01]];
        let signed = [
            [oracle_signed(98.0, 99.0, 99.0, 100.0), oracle_signed(1.0, 99.0, 1.0, 100.0)],
            [oracle_signed(1.0, 1.0, 99.0, 100.0), oracle_signed(0.0, 1.0, 1.0, 100.0)],
        ];
        // frozen from the oracle above
        let frozen = [[-1.0203040506070809e-6, 1.0101010101010101e-4], [1.0101010101010101e-4, -0.01]];
        for r_ in 0..2 {
            for c in 0..2 {
                assert!(close(r.expected.get(r_, c), expected[r_][c], 1e-12));
                assert!(close(r.signed.get(r_, c), signed[r_][c], 1e-9));
                assert!(close(r.signed.get(r_, c), frozen[r_][c], 1e-6));
            }
        }
    }

    #[test]
    fn residuals_of_matched_outlier_table() {
        let r = residuals(&table(vec![vec![99, 0], vec![0, 1]]));
        let frozen = [[0.01, -0.99], [-0.99, 98.01]];
        for (i, row) in frozen.iter().enumerate() {
            for (j, &want) in row.iter().enumerate() {
                assert!(close(r.signed.get(i, j), want, 1e-9));
            }
        }
        assert!(close(r.chi2, 100.0, 1e-12));
    }

    #[test]
    fn balanced_diagonal_is_symmetric() {
        let r = residuals(&table(vec![vec![7, 0], vec![0, 7]]));
        assert!(r.signed.get(0, 0) > 0.0 && r.signed.get(1, 1) > 0.0);
        assert!(r.signed.get(0, 1) < 0.0 && r.signed.get(1, 0) < 0.0);
        assert_eq!(r.signed.get(0, 0), r.signed.get(1, 1));
        assert_eq!(r.signed.get(0, 1), r.signed.get(1, 0));
    }

    #[test]
    fn zero_marginals_are_neutral() {
        let r = residuals(&table(vec![vec![3, 2, 0], vec![1, 4, 0], vec![0, 0, 0]]));
        for i in 0..3 {
            assert_eq!(r.dev.get(2, i), 0.0);
            assert_eq!(r.dev.get(i, 2), 0.0);
            assert_eq!(r.signed.get(i, 2), 0.0);
        }
        assert!(r.chi2.is_finite());
    }

    #[test]
    fn independent_table_has_zero_chi2() {
        let r = residuals(&table(vec![vec![2, 4], vec![3, 6]]));
        assert_eq!(r.chi2, 0.0);
        assert!(r.signed.as_slice().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn permute_columns_moves_column_l_to_perm_l() {
        let t = table(vec![vec![98, 1], vec![1, 0]]);
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert_eq!(
            t.permute_columns(&swap).counts().to_rows(),
            vec![vec![1, 98], vec![0, 1]]
        );
        let t = table(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let moved = t.permute_columns(&p);
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(moved.get(r, p.get(c).unwrap()), t.get(r, c));
            }
        }
    }

    fn square_counts() -> impl Strategy<Value = Vec<Vec<u64>>> {
        (1usize..6).prop_flat_map(|k| {
            prop::collection::vec(prop::collection::vec(0u64..60, k), k)
        })
    }

    proptest! {
        #[test]
        fn expected_counts_preserve_marginals(rows in square_counts()) {
            let t = table(rows);
            prop_assume!(t.total() > 0);
            let r = residuals(&t);
            let n = t.total() as f64;
            let k = t.k();
            let mut grand = 0.0;
            for i in 0..k {
                let row: f64 = (0..k).map(|c| r.expected.get(i, c)).sum();
                let col: f64 = (0..k).map(|c| r.expected.get(c, i)).sum();
                prop_assert!((row - t.row_sums()[i] as f64).abs() <= 1e-9 * n);
                prop_assert!((col - t.col_sums()[i] as f64).abs() <= 1e-9 * n);
                grand += row;
            }
            prop_assert!((grand - n).abs() <= 1e-9 * n);
        }

        #[test]
        fn chi2_is_sum_of_deviations(rows in square_counts()) {
            let t = table(rows);
            let r = residuals(&t);
            let sum: f64 = r.dev.as_slice().iter().sum();
            prop_assert!((sum - r.chi2).abs() <= 1e-9 * r.chi2.abs().max(1.0));
            for (d, s) in r.dev.as_slice().iter().zip(r.signed.as_slice()) {
                prop_assert!(*d >= 0.0);
                prop_assert_eq!(d.abs(), s.abs());
            }
            let independent = (0..t.k()).all(|i| (0..t.k()).all(|j| {
                t.get(i, j) as f64 == r.expected.get(i, j)
            }));
            prop_assert_eq!(r.chi2 == 0.0, independent || t.total() == 0);
        }

        #[test]
        fn residuals_commute_with_conjugation(rows in square_counts(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let t = table(rows);
            let mut order: Vec<usize> = (0..t.k()).collect();
            order.shuffle(&mut crate::seeded_rng(seed));
            let direct = residuals(&t.reorder(&order)).signed;
            let conj = residuals(&t).signed.select(&order, &order);
            prop_assert_eq!(direct, conj);
        }

        #[test]
        fn two_by_two_sign_pattern(a in 0u64..50, b in 0u64..50, c in 0u64..50, d in 0u64..50) {
            let r = residuals(&table(vec![vec![a, b], vec![c, d]])).signed;
            let signs: Vec<i8> = r.as_slice().iter()
                .map(|&s| if s > 1e-12 { 1 } else if s < -1e-12 { -1 } else { 0 })
                .collect();
            prop_assert!(
                signs == [1, -1, -1, 1] || signs == [-1, 1, 1, -1] || signs.iter().all(|&s| s == 0),
                "pattern {:?}", signs
            );
        }
    }
}
