// The Hungarian solver against exhaustive search.
//
// `cargo run --example assignment_solver`

use std::error::Error;

use rand::Rng;
use truematch::assignment::objective;
use truematch::{brute_force_assignment, seeded_rng, solve_assignment, Sense, SquareMatrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cost = SquareMatrix::from_rows(vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]])?;
    let best = solve_assignment(&cost, Sense::Minimize)?;
    println!("cost {cost:?}");
    println!("minimum {} with rows -> cols {:?}", objective(&cost, &best), best.as_slice());

    let mut rng = seeded_rng(42);
    for k in 2..=7 {
        let score = SquareMatrix::from_fn(k, |_, _| rng.random_range(-100..=100) as f64);
        let fast = objective(&score, &solve_assignment(&score, Sense::Maximize)?);
        let slow = objective(&score, &brute_force_assignment(&score, Sense::Maximize)?);
        assert_eq!(fast, slow);
        println!("K={k}: Hungarian {fast} = exhaustive {slow}");
    }

    let k = 200;
    let big = SquareMatrix::from_fn(k, |_, _| rng.random::<f64>());
    let start = std::time::Instant::now();
    let perm = solve_assignment(&big, Sense::Maximize)?;
    println!("K={k}: objective {:.3} in {:.1?}", objective(&big, &perm), start.elapsed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
