// Shows how the set of rules explaining one window pair shrinks as the
// window grows.
//
// `cargo run --example window_candidates`

use std::error::Error;

use tmlab::simulator::apply;
use tmlab::{candidates, Action, Configuration, Move, WindowStep};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let c: Configuration = "0101[5>1101".parse()?;
    let next = apply(&c, Action::new(5, 0, Move::Left));
    println!("{c}  ->  {next}");
    for n in 0..=5 {
        let step = WindowStep::between(&c, &next, n);
        let set = candidates(&step)?;
        println!("n={n}  {} -> {}  candidates {set}", step.from, step.to);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
