// Runs every catalog machine and prints its step count and ones.
//
// `cargo run --release --example simulate`

use std::error::Error;

use tmlab::catalog;
use tmlab::{run, StepConvention, DEFAULT_MAX_STEPS};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for m in catalog::table1() {
        let r = run(&m.machine, &[], DEFAULT_MAX_STEPS, StepConvention::Configurations)?;
        let reference = catalog::reference(&m.name).expect("catalog machine has a reference");
        let ok = r.steps == reference.steps && r.ones == reference.ones;
        println!(
            "{:<10} t_T={:<9} ones={:<5} {}",
            m.name,
            r.steps,
            r.ones,
            if ok { "matches" } else { "DIFFERS" }
        );
        if !ok {
            return Err(format!("{} differs from its reference", m.name).into());
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
