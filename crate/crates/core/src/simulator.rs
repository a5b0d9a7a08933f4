//! Running machines and recording their configuration sequences.

use thiserror::Error;

use crate::config::{Configuration, WindowConfig, WindowStep};
use crate::machine::{Action, Move, RuleKey, State, Symbol, Tm};
use crate::tape::Tape;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("bound exceeded: machine still running after {max_steps} steps")]
    BoundExceeded { max_steps: u64 },
    #[error("input symbol {0} is not 0 or 1")]
    BadInput(u8),
    #[error("step bound must be at least 1")]
    ZeroBound,
}

/// How a run's length is reported.
///
/// `Configurations` counts every configuration including the initial one
/// (applied rules + 1); `AppliedRules` counts transitions. The reference
/// step counts of the nine catalog machines all follow `Configurations`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepConvention {
    #[default]
    Configurations,
    AppliedRules,
}

impl StepConvention {
    pub fn count(self, applied: u64) -> u64 {
        match self {
            StepConvention::Configurations => applied + 1,
            StepConvention::AppliedRules => applied,
        }
    }
}

/// Parses a string of `0`/`1` characters.
pub fn parse_input(s: &str) -> Result<Vec<Symbol>, SimError> {
    s.bytes()
        .map(|b| match b {
            b'0' => Ok(0),
            b'1' => Ok(1),
            other => Err(SimError::BadInput(other)),
        })
        .collect()
}

fn check_input(input: &[Symbol]) -> Result<(), SimError> {
    match input.iter().find(|&&s| s > 1) {
        Some(&bad) => Err(SimError::BadInput(bad)),
        None => Ok(()),
    }
}

pub enum StepResult {
    Applied { next: Configuration, key: RuleKey },
    Halted,
}

/// Applies one transition to a standalone configuration.
pub fn step(machine: &Tm, config: &Configuration) -> StepResult {
    let key = RuleKey::new(config.state, config.head());
    match machine.get(key) {
        None => StepResult::Halted,
        Some(action) => StepResult::Applied {
            next: apply(config, action),
            key,
        },
    }
}

/// Writes, moves, and changes state. Moving onto a cell outside the touched
/// extent adds a blank cell to the configuration.
pub fn apply(config: &Configuration, action: Action) -> Configuration {
    let mut before = config.before.clone();
    let mut after = config.after.clone();
    after[0] = action.write;
    match action.mv {
        Move::Stay => {}
        Move::Left => {
            let cell = before.pop().unwrap_or(0);
            after.insert(0, cell);
        }
        Move::Right => {
            before.push(after.remove(0));
            if after.is_empty() {
                after.push(0);
            }
        }
    }
    Configuration {
        before,
        state: action.to_state,
        after,
    }
}

/// A live simulation owning its tape.
#[derive(Debug, Clone)]
pub struct Run<'m> {
    machine: &'m Tm,
    tape: Tape,
    state: State,
    applied: u64,
}

impl<'m> Run<'m> {
    pub fn new(machine: &'m Tm, input: &[Symbol]) -> Result<Run<'m>, SimError> {
        check_input(input)?;
        Ok(Run {
            machine,
            tape: Tape::with_input(input),
            state: 0,
            applied: 0,
        })
    }

    pub fn machine(&self) -> &'m Tm {
        self.machine
    }

    pub fn tape(&self) -> &Tape {
        &self.tape
    }

    pub fn state(&self) -> State {
        self.state
    }

    /// Number of rules applied so far.
    pub fn applied(&self) -> u64 {
        self.applied
    }

    pub fn key(&self) -> RuleKey {
        RuleKey::new(self.state, self.tape.read())
    }

    /// The transition the next step will apply, if any.
    #[inline]
    pub fn next_action(&self) -> Option<Action> {
        self.machine.action(self.state, self.tape.read())
    }

    pub fn is_halted(&self) -> bool {
        self.next_action().is_none()
    }

    /// Applies one transition. Returns the key used, or `None` when halted.
    #[inline]
    pub fn step(&mut self) -> Option<RuleKey> {
        let read = self.tape.read();
        let action = self.machine.action(self.state, read)?;
        let key = RuleKey::new(self.state, read);
        self.tape.write(action.write);
        self.tape.shift(action.mv);
        self.state = action.to_state;
        self.applied += 1;
        Some(key)
    }

    /// Steps until the machine halts or `max_steps` rules have been applied
    /// in total. Returns true if halted.
    pub fn advance(&mut self, max_steps: u64) -> bool {
        while self.applied < max_steps {
            let Some(action) = self.machine.action(self.state, self.tape.read()) else {
                return true;
            };
            self.tape.write(action.write);
            self.tape.shift(action.mv);
            self.state = action.to_state;
            self.applied += 1;
        }
        self.is_halted()
    }

    pub fn config(&self) -> Configuration {
        Configuration {
            before: self.tape.before().to_vec(),
            state: self.state,
            after: self.tape.after().to_vec(),
        }
    }

    pub fn window(&self, n: usize) -> WindowConfig {
        let ni = n as isize;
        WindowConfig {
            n,
            left: (-ni..0).map(|k| self.tape.at(k)).collect(),
            state: self.state,
            right: (0..=ni).map(|k| self.tape.at(k)).collect(),
        }
    }

    fn margin(&self, n: usize) -> [Symbol; 2] {
        [self.tape.at(-(n as isize) - 1), self.tape.at(n as isize + 1)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub halted: bool,
    /// Length under the requested convention.
    pub steps: u64,
    pub applied: u64,
    pub ones: u64,
    pub final_config: Configuration,
}

/// Runs `machine` on `input` until it halts. `max_steps` bounds the number of
/// applied rules.
pub fn run(
    machine: &Tm,
    input: &[Symbol],
    max_steps: u64,
    convention: StepConvention,
) -> Result<RunResult, SimError> {
    if max_steps == 0 {
        return Err(SimError::ZeroBound);
    }
    let mut r = Run::new(machine, input)?;
    if !r.advance(max_steps) {
        return Err(SimError::BoundExceeded { max_steps });
    }
    Ok(RunResult {
        halted: true,
        steps: convention.count(r.applied),
        applied: r.applied,
        ones: r.tape.ones(),
        final_config: r.config(),
    })
}

/// The full configuration sequence of a halting run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub machine: Tm,
    pub input: Vec<Symbol>,
    /// `c_0 .. c_m`.
    pub configs: Vec<Configuration>,
    /// Key of the rule applied between `configs[i]` and `configs[i + 1]`.
    pub applied: Vec<RuleKey>,
    pub halted: bool,
    pub ones: u64,
}

impl Trace {
    pub fn steps(&self, convention: StepConvention) -> u64 {
        convention.count(self.applied.len() as u64)
    }

    pub fn final_config(&self) -> &Configuration {
        self.configs.last().expect("a trace has at least one configuration")
    }

    /// Radius-`n` windows of every configuration, produced lazily.
    pub fn windows(&self, n: usize) -> impl Iterator<Item = WindowConfig> + '_ {
        self.configs.iter().map(move |c| c.window(n))
    }

    /// Radius-`n` window pairs of every transition, produced lazily.
    pub fn window_steps(&self, n: usize) -> impl Iterator<Item = WindowStep> + '_ {
        self.configs
            .windows(2)
            .map(move |pair| WindowStep::between(&pair[0], &pair[1], n))
    }

    pub fn config_pairs(&self) -> impl Iterator<Item = (&Configuration, &Configuration)> + '_ {
        self.configs.windows(2).map(|pair| (&pair[0], &pair[1]))
    }
}

/// Records every configuration of a halting run. Memory grows with
/// `steps * tape length`; use [`StepStream`] for long runs.
pub fn trace(machine: &Tm, input: &[Symbol], max_steps: u64) -> Result<Trace, SimError> {
    if max_steps == 0 {
        return Err(SimError::ZeroBound);
    }
    let mut r = Run::new(machine, input)?;
    let mut configs = vec![r.config()];
    let mut applied = Vec::new();
    while let Some(key) = r.step() {
        applied.push(key);
        configs.push(r.config());
        if r.applied == max_steps && !r.is_halted() {
            return Err(SimError::BoundExceeded { max_steps });
        }
    }
    Ok(Trace {
        machine: machine.clone(),
        input: input.to_vec(),
        configs,
        applied,
        halted: true,
        ones: r.tape.ones(),
    })
}

/// `window(config, n)` as a free function.
pub fn window(config: &Configuration, n: usize) -> WindowConfig {
    config.window(n)
}

/// Lazily windows a recorded trace.
pub fn window_stream(trace: &Trace, n: usize) -> impl Iterator<Item = WindowConfig> + '_ {
    trace.windows(n)
}

/// Streams radius-`n` window steps straight from a simulation, without
/// recording configurations. After the iterator is exhausted,
/// [`StepStream::outcome`] tells whether the machine halted.
pub struct StepStream<'m> {
    run: Run<'m>,
    n: usize,
    max_steps: u64,
    done: Option<Result<u64, SimError>>,
}

impl<'m> StepStream<'m> {
    pub fn new(
        machine: &'m Tm,
        input: &[Symbol],
        n: usize,
        max_steps: u64,
    ) -> Result<StepStream<'m>, SimError> {
        Ok(StepStream {
            run: Run::new(machine, input)?,
            n,
            max_steps,
            done: None,
        })
    }

    /// `Ok(applied)` once halted, the bound error if the run was cut off,
    /// `None` while still streaming.
    pub fn outcome(&self) -> Option<&Result<u64, SimError>> {
        self.done.as_ref()
    }

    pub fn run(&self) -> &Run<'m> {
        &self.run
    }
}

impl Iterator for StepStream<'_> {
    type Item = WindowStep;

    fn next(&mut self) -> Option<WindowStep> {
        if self.done.is_some() {
            return None;
        }
        if self.run.is_halted() {
            self.done = Some(Ok(self.run.applied));
            return None;
        }
        if self.run.applied >= self.max_steps {
            self.done = Some(Err(SimError::BoundExceeded {
                max_steps: self.max_steps,
            }));
            return None;
        }
        let from = self.run.window(self.n);
        let margin = self.run.margin(self.n);
        self.run.step();
        Some(WindowStep {
            from,
            to: self.run.window(self.n),
            margin,
        })
    }
}
