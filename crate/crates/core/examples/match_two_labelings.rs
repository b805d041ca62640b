// Aligns the labels of one clustering to another with each matcher.
//
// `cargo run --example match_two_labelings`

use std::error::Error;

use truematch::{crosstab, match_table, residuals, seeded_rng, LabelVector, MatchMethod};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // Two 3-cluster solutions of 12 cases. B found the same groups under
    // other names, except that it merged two cases into the wrong group.
    let a = LabelVector::from_labels(vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2])?;
    let b = LabelVector::from_labels(vec![2, 2, 2, 1, 0, 0, 0, 0, 1, 1, 1, 0])?;
    let t = crosstab(&a, &b)?;
    println!("matching table (rows A, columns B): {:?}", t.counts());

    let r = residuals(&t);
    println!("signed residuals: {:?}", r.signed);
    println!("chi2 = {:.3}", r.chi2);

    for method in [MatchMethod::Tracemax, MatchMethod::Truematch, MatchMethod::TruematchHeuristic] {
        let result = match_table(&t, method, &mut seeded_rng(1));
        let aligned = result.align(&b)?;
        println!(
            "{method:>20}: perm {:?}  matched {:?}  aligned B {:?}",
            result.perm.to_one_based(),
            result.matched_table.counts(),
            aligned.to_one_based()
        );
    }

    // Relabeling B does not change what gets matched.
    let shuffled = LabelVector::from_labels(b.as_slice().iter().map(|&l| (l + 1) % 3).collect())?;
    let again = match_table(&crosstab(&a, &shuffled)?, MatchMethod::Truematch, &mut seeded_rng(1));
    assert_eq!(again.align(&shuffled)?, match_table(&t, MatchMethod::Truematch, &mut seeded_rng(1)).align(&b)?);
    println!("relabeled B aligns to the same labels");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
