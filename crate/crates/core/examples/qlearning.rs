// Trains the Q-learning predictor on the five smallest catalog machines and
// prints how long each took to learn.
//
// `cargo run --release --example qlearning`

use std::error::Error;

use tmlab::catalog;
use tmlab::qlearner::{cc, QParams};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = QParams::default();
    for m in catalog::table1().into_iter().take(5) {
        let curve = cc(&m.machine, &[], params, 1 << 20)?;
        let first: Vec<_> = curve.errors.iter().take(6).map(u64::to_string).collect();
        println!(
            "{:<6} cc={:<9} episodes={:<4} errors {} ...",
            m.name,
            curve.cc,
            curve.errors.len(),
            first.join(" ")
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
