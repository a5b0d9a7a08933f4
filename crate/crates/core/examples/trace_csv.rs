// Streams a per-step CSV trace of a small machine to stdout.
//
// `cargo run --example trace_csv`

use std::error::Error;

use tmlab::export::write_trace_csv;
use tmlab::{catalog, StepConvention};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = catalog::by_name("m26").expect("m26 is built in");
    let mut buf = Vec::new();
    write_trace_csv(&mut buf, &m.machine, &[], 1 << 20, StepConvention::Configurations)?;
    let text = String::from_utf8(buf)?;
    let lines: Vec<&str> = text.lines().collect();
    for line in lines.iter().take(8) {
        println!("{line}");
    }
    println!("...");
    println!("{}", lines.last().unwrap_or(&""));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
