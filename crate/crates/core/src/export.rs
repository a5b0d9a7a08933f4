//! CSV output for traces, complexity tables and figure data.

use std::io::{self, Write};

use crate::complexity::{ComplexityReport, CSV_HEADER};
use crate::machine::{Symbol, Tm};
use crate::simulator::{Run, SimError, StepConvention};

pub const TRACE_HEADER: &str = "step,state,head_offset,read,write,move";

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Streams one row per applied rule, then a `# halted,...` summary line.
/// `head_offset` is the head position relative to the starting cell, before
/// the rule is applied. A bound hit still flushes every row written so far.
pub fn write_trace_csv<W: Write>(
    out: &mut W,
    machine: &Tm,
    input: &[Symbol],
    max_steps: u64,
    convention: StepConvention,
) -> Result<u64, ExportError> {
    if max_steps == 0 {
        return Err(SimError::ZeroBound.into());
    }
    let mut r = Run::new(machine, input)?;
    writeln!(out, "{TRACE_HEADER}")?;
    while let Some(action) = r.next_action() {
        if r.applied() >= max_steps {
            out.flush()?;
            return Err(SimError::BoundExceeded { max_steps }.into());
        }
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.applied(),
            r.state(),
            r.tape().head_offset(),
            r.tape().read(),
            action.write,
            action.mv.arrow()
        )?;
        r.step();
    }
    writeln!(
        out,
        "# halted,t_T={},ones={}",
        convention.count(r.applied()),
        r.tape().ones()
    )?;
    Ok(r.applied())
}

/// `name,t_T,ones,cc,cc_star` table.
pub fn table_csv(rows: &[ComplexityReport]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in rows {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// `name,cc_star`: window complexity per machine.
pub fn fig5_csv(rows: &[ComplexityReport]) -> String {
    let mut s = String::from("name,cc_star\n");
    for r in rows {
        s.push_str(&format!("{},{}\n", r.name, r.cc_star));
    }
    s
}

/// `name,t_T,cc`: run length against learning time. Rows without a learning
/// time are skipped.
pub fn fig2_csv(rows: &[ComplexityReport]) -> String {
    let mut s = String::from("name,t_T,cc\n");
    for r in rows {
        if let Some(cc) = r.cc {
            s.push_str(&format!("{},{},{}\n", r.name, r.steps, cc));
        }
    }
    s
}
