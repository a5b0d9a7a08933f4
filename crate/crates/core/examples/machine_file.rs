// Parses a machine file, checks each machine and writes it back out.
//
// `cargo run --example machine_file`

use std::error::Error;

use tmlab::machine::Severity;
use tmlab::{decode, tmfile};

const TEXT: &str = "\
# two machines in rule-index notation
writer: 2, 0, 11, 2, 3   # (0,0) -> (1,1,R), (1,0) -> (0,1,L)
idle: 0
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let machines = tmfile::parse(TEXT)?;
    for m in &machines {
        println!("{} (line {}): {} rules", m.name, m.line, m.machine.rule_count());
        for r in m.machine.rules() {
            println!("  {r}");
        }
        for d in m.machine.validate() {
            let tag = if d.severity == Severity::Error { "error" } else { "warning" };
            println!("  {tag}: {}", d.message);
        }
    }
    print!("{}", tmfile::render(&machines));
    match decode("1, 0, 9, 0, 3") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => return Err("duplicate key accepted".into()),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
