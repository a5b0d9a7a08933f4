//! Rule-index notation.
//!
//! A machine is written as a comma-separated integer list `n, i1, o1, ..., in, on`:
//! the rule count followed by one `(input index, output index)` pair per rule,
//! with `input = 2*state + read` and `output = 6*next + 3*write + move`.

use thiserror::Error;

use crate::machine::{
    action_from_output_index, input_index, key_from_input_index, output_index, MachineError,
    Rule, Tm,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("empty rule-index list")]
    Empty,
    #[error("element {position} is not a non-negative integer: {text:?}")]
    BadInteger { position: usize, text: String },
    #[error("expected {expected} integers for {rules} rules, found {found}")]
    WrongLength {
        rules: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate input index {0}")]
    DuplicateInput(u32),
}

fn parse_integers(text: &str) -> Result<Vec<u32>, CodecError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(CodecError::Empty);
    }
    trimmed
        .split(',')
        .enumerate()
        .map(|(position, t)| {
            let t = t.trim();
            t.parse::<u32>().map_err(|_| CodecError::BadInteger {
                position,
                text: t.to_string(),
            })
        })
        .collect()
}

/// Decodes a rule-index string into a machine.
pub fn decode(text: &str) -> Result<Tm, CodecError> {
    let values = parse_integers(text)?;
    let rules = values[0] as usize;
    // A repeated input index is reported ahead of a wrong element count.
    let mut seen = std::collections::HashSet::new();
    for pair in values[1..].chunks_exact(2) {
        if !seen.insert(pair[0]) {
            return Err(CodecError::DuplicateInput(pair[0]));
        }
    }
    let expected = 2 * rules + 1;
    if values.len() != expected {
        return Err(CodecError::WrongLength {
            rules,
            expected,
            found: values.len(),
        });
    }
    let decoded = values[1..].chunks_exact(2).map(|pair| Rule {
        key: key_from_input_index(pair[0]),
        action: action_from_output_index(pair[1]),
    });
    Tm::from_rules(decoded).map_err(|e| match e {
        MachineError::DuplicateKey(k) => CodecError::DuplicateInput(input_index(k)),
        MachineError::BadSymbol(_) => unreachable!("decoded symbols are 0 or 1"),
    })
}

/// Canonical encoding: input indices ascending, `", "` separators.
pub fn encode(machine: &Tm) -> String {
    let mut parts = vec![machine.rule_count().to_string()];
    for rule in machine.rules() {
        parts.push(input_index(rule.key).to_string());
        parts.push(output_index(rule.action).to_string());
    }
    parts.join(", ")
}
