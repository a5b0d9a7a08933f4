//! Built-in machines and their published reference figures.

use crate::tmfile::{self, NamedMachine};

/// The nine reference machines, in their published order.
pub const TABLE1_TM: &str = include_str!("../machines/table1.tm");

/// Small edge-case machines (a non-halting looper, a blank-only walker, an empty machine).
pub const EXTRAS_TM: &str = include_str!("../machines/extras.tm");

/// Published figures for one reference machine. `cc` is the learning time
/// reported for the original agent; it depends on that agent's internals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reference {
    pub name: &'static str,
    pub steps: u64,
    pub ones: u64,
    pub cc: u64,
    pub cc_star: u64,
    pub extended: bool,
}

pub const REFERENCES: [Reference; 9] = [
    Reference { name: "m26", steps: 264, ones: 26, cc: 95048, cc_star: 24, extended: false },
    Reference { name: "m14", steps: 314, ones: 14, cc: 60872, cc_star: 7, extended: false },
    Reference { name: "m21", steps: 515, ones: 21, cc: 463558, cc_star: 12, extended: false },
    Reference { name: "m32", steps: 583, ones: 32, cc: 535050, cc_star: 41, extended: false },
    Reference { name: "m160", steps: 20928, ones: 160, cc: 512623, cc_star: 160, extended: false },
    Reference { name: "schult", steps: 134467, ones: 501, cc: 1685939, cc_star: 664, extended: false },
    Reference { name: "uhing1915", steps: 2133492, ones: 1915, cc: 4365184, cc_star: 3816, extended: true },
    Reference { name: "uhing1471", steps: 2358064, ones: 1471, cc: 8368208, cc_star: 1961, extended: true },
    Reference { name: "bb5", steps: 47176870, ones: 4097, cc: 9833455, cc_star: 12287, extended: true },
];

pub fn reference(name: &str) -> Option<&'static Reference> {
    REFERENCES.iter().find(|r| r.name == name)
}

/// True for the long-running machines gated behind the extended tier.
pub fn is_extended(name: &str) -> bool {
    reference(name).is_some_and(|r| r.extended)
}

pub fn table1() -> Vec<NamedMachine> {
    tmfile::parse(TABLE1_TM).expect("built-in machine file parses")
}

pub fn extras() -> Vec<NamedMachine> {
    tmfile::parse(EXTRAS_TM).expect("built-in machine file parses")
}

/// Reference machines followed by the extras.
pub fn builtin() -> Vec<NamedMachine> {
    let mut all = table1();
    all.extend(extras());
    all
}

pub fn by_name(name: &str) -> Option<NamedMachine> {
    builtin().into_iter().find(|m| m.name == name)
}
