// Window complexity of the fast-tier catalog machines, next to the
// published values.
//
// `cargo run --release --example ccstar_table`

use std::error::Error;

use tmlab::complexity::{analyze, Mode};
use tmlab::{catalog, DEFAULT_MAX_STEPS};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("{:<8} {:>7} {:>7} {:>7}", "name", "strict", "global", "ref");
    for m in catalog::table1().into_iter().filter(|m| !catalog::is_extended(&m.name)) {
        let a = analyze(&m.machine, &[], DEFAULT_MAX_STEPS)?;
        let strict = a.cc_star(Mode::Strict)?;
        let reference = catalog::reference(&m.name).map_or(0, |r| r.cc_star);
        println!(
            "{:<8} {:>7} {:>7} {:>7}  widest step {}",
            m.name,
            strict,
            a.cc_star(Mode::Global)?,
            reference,
            a.strict_witness.unwrap_or(0)
        );
        if strict != reference {
            return Err(format!("{}: cc* {strict} != {reference}", m.name).into());
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
