// How the choice of matching moves the diagonal but not the pair indices.
//
// `cargo run --example agreement_indices`

use std::error::Error;

use truematch::{match_table, seeded_rng, Agreement, MatchMethod, MatchingTable};

fn show(name: &str, t: &MatchingTable) -> Result<(), Box<dyn Error>> {
    let a = Agreement::of(t)?;
    println!(
        "{name:<22} {:?}  diagonal {:.3}  kappa {:+.4}  rand {:.4}  adjusted rand {:+.4}",
        t.counts(),
        a.diagonal,
        a.kappa,
        a.rand,
        a.crand
    );
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // Two solutions flag different cases as outliers: no real agreement.
    let unrelated = MatchingTable::from_rows(vec![vec![98, 1], vec![1, 0]])?;
    show("as clustered", &unrelated)?;
    let swapped = match_table(&unrelated, MatchMethod::Truematch, &mut seeded_rng(0));
    show("after truematch", &swapped.matched_table)?;

    // Both flag the same case.
    let same = MatchingTable::from_rows(vec![vec![99, 0], vec![0, 1]])?;
    show("coinciding outliers", &same)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
