// Planted cluster models of 100 cases, aggregated over 1000 resamples with
// each matcher.
//
// `cargo run --release --example consensus_vs_mmcc`

use std::error::Error;

use truematch::simulate::PlantedScenario;
use truematch::{mmcc_run, seeded_rng, MatchMethod, MmccConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("{:<26} {:>20} {:>6} {:>6} {:>7} {:>7}", "model", "matcher", "H", "RMC", "I", "CIC");
    for matcher in [MatchMethod::Truematch, MatchMethod::TruematchHeuristic, MatchMethod::Tracemax] {
        for scenario in PlantedScenario::ALL {
            let model = scenario.model();
            let cases = vec![(); model.n()];
            let cfg = MmccConfig::new(model.k(), 1000, matcher);
            let s = mmcc_run(&cases, &model, &cfg, &mut seeded_rng(7))?.stats();
            println!(
                "{:<26} {:>20} {:6.3} {:6.3} {:7.3} {:7.3}",
                scenario.name(),
                matcher.as_str(),
                s.h,
                s.rmc,
                s.i,
                s.cic
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
