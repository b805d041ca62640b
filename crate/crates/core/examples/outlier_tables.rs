// Two clusterings that each flag one random case as an outlier.
//
// Trace maximization reports 98% agreement on such pure noise; truematch
// pushes the expected diagonal toward zero.
//
// `cargo run --example outlier_tables -- [runs]`

use std::error::Error;

use truematch::simulate::outlier_scenario;
use truematch::{seeded_rng, MatchMethod};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let runs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    for matcher in [MatchMethod::Tracemax, MatchMethod::Truematch] {
        let s = outlier_scenario(runs, matcher, &mut seeded_rng(2007))?;
        println!("{matcher}, {runs} runs");
        for row in s.expected_table {
            println!("    {:6.2}% {:6.2}%", row[0] * 100.0, row[1] * 100.0);
        }
        println!(
            "  expected diagonal {:.3}, kappa {:+.3}, rand {:.3}, adjusted rand {:+.3}",
            s.expected.diagonal, s.expected.kappa, s.expected.rand, s.expected.crand
        );
        for o in &s.outcomes {
            println!("  {:5.1}% of runs: {:?}", o.fraction * 100.0, o.table);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
