//! Two-symbol Turing machines with a partial transition function.
//!
//! A machine is `(Q, 0, {0,1}, f)` where `f: Q x {0,1} -> Q x {0,1} x {L,S,R}`
//! is partial. The start state is always 0 and the blank symbol is 0. The
//! machine halts as soon as it reads a `(state, symbol)` pair without a rule.

use std::fmt;

use thiserror::Error;

/// A state index. State 0 is the start state.
pub type State = u32;

/// A tape symbol, always 0 or 1. 0 is the blank.
pub type Symbol = u8;

/// Head movement after a write.
///
/// The order `Left < Stay < Right` is fixed; it is the move code used by the
/// rule-index notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub const ALL: [Move; 3] = [Move::Left, Move::Stay, Move::Right];

    pub fn code(self) -> u32 {
        match self {
            Move::Left => 0,
            Move::Stay => 1,
            Move::Right => 2,
        }
    }

    pub fn from_code(code: u32) -> Option<Move> {
        match code {
            0 => Some(Move::Left),
            1 => Some(Move::Stay),
            2 => Some(Move::Right),
            _ => None,
        }
    }

    /// Head displacement: -1, 0 or +1.
    pub fn offset(self) -> isize {
        self.code() as isize - 1
    }

    pub fn arrow(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Stay => 'S',
            Move::Right => 'R',
        }
    }
}

/// The left-hand side of a rule: the state and the symbol under the head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleKey {
    pub state: State,
    pub read: Symbol,
}

impl RuleKey {
    pub fn new(state: State, read: Symbol) -> Self {
        RuleKey { state, read }
    }
}

impl fmt::Display for RuleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.state, self.read)
    }
}

/// The right-hand side of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub to_state: State,
    pub write: Symbol,
    pub mv: Move,
}

impl Action {
    pub fn new(to_state: State, write: Symbol, mv: Move) -> Self {
        Action {
            to_state,
            write,
            mv,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.to_state, self.write, self.mv.arrow())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub key: RuleKey,
    pub action: Action,
}

impl Rule {
    pub fn new(from_state: State, read: Symbol, to_state: State, write: Symbol, mv: Move) -> Self {
        Rule {
            key: RuleKey::new(from_state, read),
            action: Action::new(to_state, write, mv),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.key, self.action)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("duplicate rule for {0}")]
    DuplicateKey(RuleKey),
    #[error("symbol {0} is not in {{0,1}}")]
    BadSymbol(u32),
}

/// An immutable Turing machine.
///
/// Rules are stored in a dense table indexed by `2 * state + read`, which is
/// also the input index of the rule-index notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tm {
    state_count: u32,
    table: Vec<Option<Action>>,
}

impl Tm {
    /// Builds a machine whose state count is inferred as one more than the
    /// largest state mentioned anywhere (at least 1, for the start state).
    pub fn from_rules<I: IntoIterator<Item = Rule>>(rules: I) -> Result<Tm, MachineError> {
        let rules: Vec<Rule> = rules.into_iter().collect();
        let max_state = rules
            .iter()
            .flat_map(|r| [r.key.state, r.action.to_state])
            .max()
            .unwrap_or(0);
        Tm::with_state_count(max_state + 1, rules)
    }

    /// Builds a machine with a declared state count. Rules may mention states
    /// outside the declared range; [`Tm::validate`] reports them.
    pub fn with_state_count<I: IntoIterator<Item = Rule>>(
        state_count: u32,
        rules: I,
    ) -> Result<Tm, MachineError> {
        let mut table: Vec<Option<Action>> = Vec::new();
        for rule in rules {
            if rule.key.read > 1 {
                return Err(MachineError::BadSymbol(rule.key.read as u32));
            }
            if rule.action.write > 1 {
                return Err(MachineError::BadSymbol(rule.action.write as u32));
            }
            let idx = input_index(rule.key) as usize;
            if table.len() <= idx {
                table.resize(idx + 1, None);
            }
            if table[idx].is_some() {
                return Err(MachineError::DuplicateKey(rule.key));
            }
            table[idx] = Some(rule.action);
        }
        let declared = state_count.max(1) as usize;
        if table.len() < 2 * declared {
            table.resize(2 * declared, None);
        }
        Ok(Tm {
            state_count: state_count.max(1),
            table,
        })
    }

    pub fn state_count(&self) -> u32 {
        self.state_count
    }

    /// The transition for `(state, read)`, or `None` when the machine halts there.
    #[inline]
    pub fn action(&self, state: State, read: Symbol) -> Option<Action> {
        self.table
            .get(2 * state as usize + read as usize)
            .copied()
            .flatten()
    }

    pub fn get(&self, key: RuleKey) -> Option<Action> {
        self.action(key.state, key.read)
    }

    /// Rules in ascending input-index order.
    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.table.iter().enumerate().filter_map(|(idx, a)| {
            a.map(|action| Rule {
                key: RuleKey::new((idx / 2) as State, (idx % 2) as Symbol),
                action,
            })
        })
    }

    pub fn rule_count(&self) -> usize {
        self.table.iter().filter(|a| a.is_some()).count()
    }

    /// Keys within the declared state range that have no rule.
    pub fn undefined_keys(&self) -> Vec<RuleKey> {
        (0..self.state_count)
            .flat_map(|q| [RuleKey::new(q, 0), RuleKey::new(q, 1)])
            .filter(|k| self.get(*k).is_none())
            .collect()
    }

    /// A copy restricted to the given keys.
    pub fn restricted_to<'a, I: IntoIterator<Item = &'a RuleKey>>(&self, keys: I) -> Tm {
        let rules: Vec<Rule> = keys
            .into_iter()
            .filter_map(|k| self.get(*k).map(|action| Rule { key: *k, action }))
            .collect();
        Tm::from_rules(rules).expect("subset of a valid machine")
    }

    /// Static well-formedness checks. An empty list means the machine is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.rule_count() == 0 {
            out.push(Diagnostic {
                severity: Severity::Warning,
                rule: None,
                message: "no rules: halts immediately".to_string(),
            });
        }
        for rule in self.rules() {
            if rule.key.state >= self.state_count {
                out.push(Diagnostic {
                    severity: Severity::Error,
                    rule: Some(rule),
                    message: format!(
                        "state out of range: source state {} >= state count {}",
                        rule.key.state, self.state_count
                    ),
                });
            }
            if rule.action.to_state >= self.state_count {
                out.push(Diagnostic {
                    severity: Severity::Error,
                    rule: Some(rule),
                    message: format!(
                        "state out of range: target state {} >= state count {}",
                        rule.action.to_state, self.state_count
                    ),
                });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub rule: Option<Rule>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        match &self.rule {
            Some(r) => write!(f, "{sev}: {r}: {}", self.message),
            None => write!(f, "{sev}: {}", self.message),
        }
    }
}

/// `2 * state + read`.
pub fn input_index(key: RuleKey) -> u32 {
    2 * key.state + key.read as u32
}

/// `6 * to_state + 3 * write + move_code`.
pub fn output_index(action: Action) -> u32 {
    6 * action.to_state + 3 * action.write as u32 + action.mv.code()
}

pub fn key_from_input_index(idx: u32) -> RuleKey {
    RuleKey::new(idx / 2, (idx % 2) as Symbol)
}

pub fn action_from_output_index(idx: u32) -> Action {
    let rem = idx % 6;
    Action::new(
        idx / 6,
        (rem / 3) as Symbol,
        Move::from_code(rem % 3).expect("value below 3"),
    )
}
