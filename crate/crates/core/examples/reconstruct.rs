// Recovers a machine's transition table from its run, first from full
// configurations and then through windows of shrinking radius.
//
// `cargo run --example reconstruct`

use std::error::Error;

use tmlab::simulator::StepStream;
use tmlab::{catalog, encode, reconstruct, reconstruct_full, trace, Mode};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = catalog::by_name("m14").expect("m14 is built in");
    let t = trace(&m.machine, &[], 1 << 20)?;

    let full = reconstruct_full(t.config_pairs())?;
    println!("original      {}", encode(&m.machine));
    println!("from configs  {}", encode(&full.machine));
    assert_eq!(full.machine, m.machine);

    let n = tmlab::cc_star(&m.machine, &[], Mode::Strict, 1 << 20)? as usize;
    for radius in [n, n - 1, 1] {
        let learned = reconstruct(StepStream::new(&m.machine, &[], radius, 1 << 20)?)?;
        println!(
            "radius {radius:>2}: {} ambiguous steps, learned {}",
            learned.ambiguous_steps,
            encode(&learned.machine)
        );
    }
    let at_bound = reconstruct(t.window_steps(n))?;
    assert!(at_bound.per_step_unique() && at_bound.machine == m.machine);
    println!("\nreport at radius {}:\n{}", n - 1, reconstruct(t.window_steps(n - 1))?.report());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
