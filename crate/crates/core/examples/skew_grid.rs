// A small skew/reliability grid of the fictitious two-class clusterer,
// printed as CSV.
//
// `cargo run --release --example skew_grid`

use std::error::Error;

use truematch::simulate::{grid_sweep_with, SimulationConfig, GRID_HEADER};
use truematch::MatchMethod;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let ps = [0.5, 0.7, 0.9];
    let kappas = [0.0, 0.5, 1.0];
    println!("{GRID_HEADER}");
    for matcher in [MatchMethod::Truematch, MatchMethod::Tracemax] {
        let defaults = SimulationConfig {
            rounds: 200,
            matcher,
            ..Default::default()
        };
        grid_sweep_with(&ps, &kappas, &defaults, |row| {
            for cell in row {
                println!("{}", cell.csv_record());
            }
            Ok(())
        })?;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
