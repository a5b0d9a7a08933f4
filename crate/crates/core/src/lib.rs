//! Turing machine learning laboratory.
//!
//! * [`machine`], [`codec`], [`tmfile`]: two-symbol machines and the
//!   rule-index notation used to write them down.
//! * [`simulator`]: runs a machine and records its configuration sequence.
//! * [`learner`]: recovers the transition table from consecutive
//!   configurations, either full or seen through fixed-radius windows.
//! * [`complexity`]: the smallest window radius that still pins down every
//!   applied rule.
//! * [`qlearner`]: a tabular Q-learning agent that learns to predict the next
//!   rule from windows; its interaction count measures learning time.
//! * [`cli`]: the `tmlab` command-line front end.

mod bitscan;
pub mod catalog;
pub mod cli;
pub mod codec;
pub mod complexity;
pub mod config;
pub mod export;
pub mod learner;
pub mod machine;
pub mod qlearner;
pub mod simulator;
pub mod tape;
pub mod tmfile;

pub use codec::{decode, encode};
pub use complexity::{cc_star, cc_star_bsearch, ComplexityReport, Mode};
pub use config::{Configuration, WindowConfig, WindowStep};
pub use learner::{candidates, infer_rule_full, reconstruct, reconstruct_full, LearnResult};
pub use machine::{Action, Move, Rule, RuleKey, State, Symbol, Tm};
pub use simulator::{run, trace, RunResult, StepConvention, Trace};

/// Default step bound for command-line runs: 2^26 applied rules.
pub const DEFAULT_MAX_STEPS: u64 = 1 << 26;
