//! Reconstructing transition rules from observed configurations.
//!
//! From two consecutive full configurations the applied rule can be read off
//! by testing the three ways the pictures can line up (head stayed, moved
//! left, moved right). Through finite windows several rules may explain the
//! same pair; [`candidates`] returns all of them and [`reconstruct`]
//! intersects them per rule key across a whole run.

use std::borrow::Borrow;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::codec;
use crate::config::{eq_from_head, eq_toward_head, Configuration, WindowConfig, WindowStep};
use crate::machine::{Action, Move, Rule, RuleKey, State, Symbol, Tm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LearnError {
    #[error("step {step}: no rule turns the first configuration into the second")]
    NotConsecutive { step: u64 },
    #[error("step {step}: rules {candidates} all explain the transition for {key}")]
    Irreducible {
        step: u64,
        key: RuleKey,
        candidates: RuleCandidateSet,
    },
    #[error("step {step}: no rule for {key} is consistent with the window pair")]
    EmptyCandidates { step: u64, key: RuleKey },
    #[error("step {step}: observations for {key} contradict earlier steps")]
    Inconsistent { step: u64, key: RuleKey },
}

/// Rules `key -> (to_state, write, move)` consistent with an observation.
/// The target state is always the state shown in the later configuration, so
/// a set is stored as that state plus a bitmask over `(write, move)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleCandidateSet {
    pub key: RuleKey,
    pub to_state: State,
    mask: u8,
}

#[inline]
fn bit(write: Symbol, mv: Move) -> u8 {
    1 << (write as u32 * 3 + mv.code())
}

impl RuleCandidateSet {
    pub fn empty(key: RuleKey, to_state: State) -> Self {
        RuleCandidateSet {
            key,
            to_state,
            mask: 0,
        }
    }

    pub fn insert(&mut self, write: Symbol, mv: Move) {
        self.mask |= bit(write, mv);
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, action: Action) -> bool {
        action.to_state == self.to_state && self.mask & bit(action.write, action.mv) != 0
    }

    pub fn actions(&self) -> impl Iterator<Item = Action> + '_ {
        [0u8, 1]
            .into_iter()
            .flat_map(|w| Move::ALL.into_iter().map(move |m| (w, m)))
            .filter(|&(w, m)| self.mask & bit(w, m) != 0)
            .map(|(w, m)| Action::new(self.to_state, w, m))
    }

    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.actions().map(|action| Rule {
            key: self.key,
            action,
        })
    }

    /// The single candidate, if there is exactly one.
    pub fn only(&self) -> Option<Action> {
        if self.len() == 1 {
            self.actions().next()
        } else {
            None
        }
    }

    pub fn intersect(&self, other: &RuleCandidateSet) -> RuleCandidateSet {
        debug_assert_eq!(self.key, other.key);
        let mask = if self.to_state == other.to_state {
            self.mask & other.mask
        } else {
            0
        };
        RuleCandidateSet { mask, ..*self }
    }
}

impl fmt::Display for RuleCandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('{')?;
        for (i, a) in self.actions().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_char('}')
    }
}

/// The rule between two consecutive full configurations.
///
/// Fails with `Irreducible` only when several rules give the same picture,
/// which happens on an all-blank tape.
pub fn infer_rule_full(c: &Configuration, next: &Configuration) -> Result<Rule, LearnError> {
    infer_at(c, next, 0)
}

fn infer_at(c: &Configuration, next: &Configuration, step: u64) -> Result<Rule, LearnError> {
    let key = RuleKey::new(c.state, c.head());
    let mut set = RuleCandidateSet::empty(key, next.state);
    let (b, a) = (&c.before[..], &c.after[..]);
    let (b2, a2) = (&next.before[..], &next.after[..]);
    let a_tail = &a[1..];

    // Head stayed: the left side is unchanged and only the head cell differs.
    if eq_toward_head(b2, b) && eq_from_head(&a2[1..], a_tail) {
        set.insert(a2[0], Move::Stay);
    }

    // Head moved left: the old b_1 is now under the head, the written cell follows.
    let (b_rest, b1) = match b.split_last() {
        Some((&last, rest)) => (rest, last),
        None => (b, 0),
    };
    if a2[0] == b1 && eq_toward_head(b2, b_rest) && eq_from_head(a2.get(2..).unwrap_or(&[]), a_tail)
    {
        set.insert(a2.get(1).copied().unwrap_or(0), Move::Left);
    }

    // Head moved right: the written cell is now b_1.
    let (b2_rest, written) = match b2.split_last() {
        Some((&last, rest)) => (rest, last),
        None => (b2, 0),
    };
    if eq_toward_head(b2_rest, b) && eq_from_head(a2, a_tail) {
        set.insert(written, Move::Right);
    }

    match set.len() {
        0 => Err(LearnError::NotConsecutive { step }),
        1 => Ok(Rule {
            key,
            action: set.only().expect("one candidate"),
        }),
        _ => Err(LearnError::Irreducible {
            step,
            key,
            candidates: set,
        }),
    }
}

/// Whether writing `write` and moving `mv` from the earlier window reproduces
/// the later one. The cell brought into view by a move is taken from `margin`
/// when given, and left unconstrained when `margin` is `None`.
fn predicts(step_from: &WindowConfig, to: &WindowConfig, margin: Option<[Symbol; 2]>, write: Symbol, mv: Move) -> bool {
    let n = step_from.n as isize;
    let d = mv.offset();
    // Cell of the earlier configuration at `j` from its head, after the write.
    let cell = |j: isize| -> Option<Symbol> {
        if j == 0 {
            Some(write)
        } else if j.abs() <= n {
            Some(step_from.at(j))
        } else {
            margin.map(|m| if j < 0 { m[0] } else { m[1] })
        }
    };
    (-n..=n).all(|k| match cell(k + d) {
        Some(s) => s == to.at(k),
        None => true,
    })
}

fn window_candidates(from: &WindowConfig, to: &WindowConfig, margin: Option<[Symbol; 2]>) -> RuleCandidateSet {
    assert_eq!(from.n, to.n, "window radii differ");
    let key = RuleKey::new(from.state, from.head());
    let mut set = RuleCandidateSet::empty(key, to.state);
    for write in [0u8, 1] {
        for mv in Move::ALL {
            if predicts(from, to, margin, write, mv) {
                set.insert(write, mv);
            }
        }
    }
    set
}

/// All rules that, applied to the earlier configuration, give the later
/// window. The two margin cells settle what a move brings into view.
pub fn candidates(step: &WindowStep) -> Result<RuleCandidateSet, LearnError> {
    let set = window_candidates(&step.from, &step.to, Some(step.margin));
    if set.is_empty() {
        return Err(LearnError::EmptyCandidates { step: 0, key: set.key });
    }
    Ok(set)
}

/// Like [`candidates`], but judging from the two windows alone: a cell moved
/// into view from outside the earlier window may hold anything. Always a
/// superset of [`candidates`].
pub fn candidates_window_only(
    from: &WindowConfig,
    to: &WindowConfig,
) -> Result<RuleCandidateSet, LearnError> {
    let set = window_candidates(from, to, None);
    if set.is_empty() {
        return Err(LearnError::EmptyCandidates { step: 0, key: set.key });
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnResult {
    /// Every rule pinned to a single candidate.
    pub machine: Tm,
    /// Keys still carrying more than one candidate after intersection.
    pub ambiguous_keys: BTreeMap<RuleKey, RuleCandidateSet>,
    /// True when every observed key is pinned.
    pub unique: bool,
    pub steps: u64,
    /// Steps whose own candidate set was not a singleton.
    pub ambiguous_steps: u64,
    pub first_ambiguous_step: Option<u64>,
}

impl LearnResult {
    /// True when every individual step determined its rule.
    pub fn per_step_unique(&self) -> bool {
        self.ambiguous_steps == 0
    }

    /// Reconstructed machine in rule-index notation followed by the
    /// ambiguity table.
    pub fn report(&self) -> String {
        let mut out = String::new();
        writeln!(out, "machine: {}", codec::encode(&self.machine)).unwrap();
        writeln!(out, "steps: {}", self.steps).unwrap();
        writeln!(out, "unique: {}", self.unique).unwrap();
        writeln!(out, "ambiguous steps: {}", self.ambiguous_steps).unwrap();
        if !self.ambiguous_keys.is_empty() {
            writeln!(out, "ambiguous keys:").unwrap();
            for (key, set) in &self.ambiguous_keys {
                writeln!(out, "  {key} -> {set}").unwrap();
            }
        }
        out
    }
}

fn finish(
    pinned: BTreeMap<RuleKey, RuleCandidateSet>,
    steps: u64,
    ambiguous_steps: u64,
    first_ambiguous_step: Option<u64>,
) -> LearnResult {
    let mut rules = Vec::new();
    let mut ambiguous_keys = BTreeMap::new();
    for (key, set) in pinned {
        match set.only() {
            Some(action) => rules.push(Rule { key, action }),
            None => {
                ambiguous_keys.insert(key, set);
            }
        }
    }
    LearnResult {
        machine: Tm::from_rules(rules).expect("one rule per key"),
        unique: ambiguous_keys.is_empty(),
        ambiguous_keys,
        steps,
        ambiguous_steps,
        first_ambiguous_step,
    }
}

/// Intersects per-step candidate sets key by key over a stream of window steps.
pub fn reconstruct<I>(steps: I) -> Result<LearnResult, LearnError>
where
    I: IntoIterator,
    I::Item: Borrow<WindowStep>,
{
    let mut sets: BTreeMap<RuleKey, RuleCandidateSet> = BTreeMap::new();
    let mut count = 0u64;
    let mut ambiguous_steps = 0u64;
    let mut first_ambiguous = None;
    for (i, step) in steps.into_iter().enumerate() {
        let i = i as u64;
        let set = candidates(step.borrow()).map_err(|e| match e {
            LearnError::EmptyCandidates { key, .. } => LearnError::EmptyCandidates { step: i, key },
            other => other,
        })?;
        if set.len() > 1 {
            ambiguous_steps += 1;
            first_ambiguous.get_or_insert(i);
        }
        let merged = match sets.get(&set.key) {
            Some(prev) => prev.intersect(&set),
            None => set,
        };
        if merged.is_empty() {
            return Err(LearnError::Inconsistent { step: i, key: set.key });
        }
        sets.insert(set.key, merged);
        count += 1;
    }
    Ok(finish(sets, count, ambiguous_steps, first_ambiguous))
}

/// Reads the rule off every pair of consecutive full configurations.
pub fn reconstruct_full<I, C>(pairs: I) -> Result<LearnResult, LearnError>
where
    I: IntoIterator<Item = (C, C)>,
    C: Borrow<Configuration>,
{
    let mut sets: BTreeMap<RuleKey, RuleCandidateSet> = BTreeMap::new();
    let mut count = 0u64;
    for (i, (c, next)) in pairs.into_iter().enumerate() {
        let i = i as u64;
        let rule = infer_at(c.borrow(), next.borrow(), i)?;
        let mut set = RuleCandidateSet::empty(rule.key, rule.action.to_state);
        set.insert(rule.action.write, rule.action.mv);
        if let Some(prev) = sets.get(&rule.key) {
            if *prev != set {
                return Err(LearnError::Inconsistent { step: i, key: rule.key });
            }
        }
        sets.insert(rule.key, set);
        count += 1;
    }
    Ok(finish(sets, count, 0, None))
}
