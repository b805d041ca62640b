// Bagged k-means with vote aggregation on structured and unstructured data.
//
// `cargo run --release --example mmcc_blobs`

use std::error::Error;

use rand::Rng;
use truematch::mmcc::LloydClusterer;
use truematch::{mmcc_run, seeded_rng, MatchMethod, MmccConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut rng = seeded_rng(3);
    let blobs: Vec<Vec<f64>> = (0..60)
        .map(|i| {
            let centre = if i < 30 { 0.0 } else { 8.0 };
            vec![centre + rng.random::<f64>(), rng.random::<f64>()]
        })
        .collect();
    let uniform: Vec<Vec<f64>> = (0..60).map(|_| vec![rng.random::<f64>() * 10.0]).collect();

    let base = LloydClusterer::new(50);
    for (name, data) in [("two blobs", &blobs), ("uniform noise", &uniform)] {
        for k in [2, 3] {
            for matcher in [MatchMethod::Truematch, MatchMethod::Tracemax] {
                let out = mmcc_run(data, &base, &MmccConfig::new(k, 200, matcher), &mut seeded_rng(11))?;
                let s = out.stats();
                println!(
                    "{name:<14} K={k} {matcher:<9} H {:.3}  RMC {:.3}  I {:+.3}  CIC {:+.3}",
                    s.h, s.rmc, s.i, s.cic
                );
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
