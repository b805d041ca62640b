use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::agreement::Agreement;
use crate::crosstab::MatchingTable;
use crate::error::{Error, Result};
use crate::matching::{match_table, MatchMethod};

const CASES: usize = 100;

/// One distinct matched table and how often it came up.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeRow {
    pub table: Vec<Vec<u64>>,
    pub fraction: f64,
    pub agreement: Agreement,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutlierSummary {
    pub matcher: MatchMethod,
    pub runs: usize,
    pub n: usize,
    /// Mean matched table as fractions of all cases.
    pub expected_table: [[f64; 2]; 2],
    /// Mean of each agreement index over runs.
    pub expected: Agreement,
    /// Share of runs where both solutions flagged the same case.
    pub random_match_rate: f64,
    /// Distinct matched tables, most frequent first.
    pub outcomes: Vec<OutcomeRow>,
}

/// Two clusterings of 100 cases that each flag one uniformly chosen case as
/// an outlier (label 1) and everything else as normal (label 0), matched
/// with `matcher`. Tables are recorded in the row order the matcher
/// reports.
pub fn outlier_scenario<R: Rng + ?Sized>(runs: usize, matcher: MatchMethod, rng: &mut R) -> Result<OutlierSummary> {
    if runs == 0 {
        return Err(Error::InvalidArgument("need at least one run".into()));
    }
    let mut sum_table = [[0u64; 2]; 2];
    let mut sum = Agreement {
        diagonal: 0.0,
        kappa: 0.0,
        rand: 0.0,
        crand: 0.0,
    };
    let mut coincidences = 0usize;
    let mut seen: BTreeMap<Vec<u64>, usize> = BTreeMap::new();

    let mut a = vec![0usize; CASES];
    let mut b = vec![0usize; CASES];
    for _ in 0..runs {
        let first = rng.random_range(0..CASES);
        let second = rng.random_range(0..CASES);
        a.fill(0);
        b.fill(0);
        a[first] = 1;
        b[second] = 1;
        coincidences += (first == second) as usize;

        let t = MatchingTable::from_labels(&a, &b, 2)?;
        let shown = match_table(&t, matcher, rng).presented_table();
        for (r, row) in sum_table.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell += shown.get(r, c);
            }
        }
        let ag = Agreement::of(&shown)?;
        sum.diagonal += ag.diagonal;
        sum.kappa += ag.kappa;
        sum.rand += ag.rand;
        sum.crand += ag.crand;
        *seen.entry(shown.counts().as_slice().to_vec()).or_default() += 1;
    }

    let runs_f = runs as f64;
    let denom = runs_f * CASES as f64;
    let expected_table = sum_table.map(|row| row.map(|c| c as f64 / denom));
    let mut outcomes = seen
        .into_iter()
        .map(|(cells, count)| {
            let table = MatchingTable::from_rows(cells.chunks(2).map(<[u64]>::to_vec).collect())?;
            Ok(OutcomeRow {
                table: table.counts().to_rows(),
                fraction: count as f64 / runs_f,
                agreement: Agreement::of(&table)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    outcomes.sort_by(|x, y| y.fraction.total_cmp(&x.fraction));

    Ok(OutlierSummary {
        matcher,
        runs,
        n: CASES,
        expected_table,
        expected: Agreement {
            diagonal: sum.diagonal / runs_f,
            kappa: sum.kappa / runs_f,
            rand: sum.rand / runs_f,
            crand: sum.crand / runs_f,
        },
        random_match_rate: coincidences as f64 / runs_f,
        outcomes,
    })
}
