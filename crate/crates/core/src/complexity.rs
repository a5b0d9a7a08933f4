//! Window complexity: the smallest radius at which window pairs pin down
//! every applied rule.
//!
//! At one step the true rule `(x, d)` and an alternative `(x', d')` (same key,
//! same target state) produce two successor tapes. The alternative survives at
//! radius `n` exactly when both successors agree on the `2n + 1` cells around
//! their heads, so it is ruled out from radius `|k|` on, where `k` is the
//! offset of the nearest disagreeing cell. The step's minimal radius is the
//! largest such distance over the five alternatives.
//!
//! * **strict** mode: every individual step must be unambiguous; the answer is
//!   the maximum per-step radius.
//! * **global** mode: candidates are intersected per rule key over the run; an
//!   alternative for a key dies at the smallest distance seen at any step
//!   using that key, and the answer is the largest of those.

use std::fmt;

use thiserror::Error;

use crate::bitscan::BitTape;
use crate::machine::{Action, Move, RuleKey, Symbol, Tm};
use crate::simulator::{Run, SimError, StepConvention, Trace};

/// Distance reported for an alternative that no radius rules out.
pub const NEVER: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Every step disambiguated on its own.
    #[default]
    Strict,
    /// Candidate sets intersected per key across the whole run.
    Global,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Global => "global",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("irreducible: step {step} ({key}) stays ambiguous at every radius")]
    Irreducible { step: u64, key: RuleKey },
    #[error("irreducible: {key} keeps an alternative rule at every radius")]
    IrreducibleKey { key: RuleKey },
    #[error("step {step} out of range for a trace with {len} transitions")]
    StepOutOfRange { step: u64, len: u64 },
}

#[inline]
fn slot(write: Symbol, mv: Move) -> usize {
    write as usize * 3 + mv.code() as usize
}

fn slot_action(to_state: u32, slot: usize) -> Action {
    Action::new(
        to_state,
        (slot / 3) as Symbol,
        Move::from_code((slot % 3) as u32).expect("slot below 6"),
    )
}

/// The pre-step tape as seen from the head: `cell(j)` for `-left <= j <= right`,
/// blank outside.
trait Neighborhood {
    fn cell(&self, j: isize) -> Symbol;
    /// Touched cells left of the head.
    fn left(&self) -> isize;
    /// Touched cells right of the head.
    fn right(&self) -> isize;
}

impl Neighborhood for crate::config::Configuration {
    fn cell(&self, j: isize) -> Symbol {
        self.at(j)
    }
    fn left(&self) -> isize {
        self.before.len() as isize
    }
    fn right(&self) -> isize {
        self.after.len() as isize - 1
    }
}

/// Offset magnitude of the nearest cell where the successor under `(x, d)`
/// and the successor under `(x2, d2)` differ, scanning no further than
/// `limit`. `None` if they agree everywhere within the limit.
#[inline]
fn first_mismatch<N: Neighborhood>(
    t: &N,
    (x, d): (Symbol, isize),
    (x2, d2): (Symbol, isize),
    limit: u64,
) -> Option<u64> {
    if d == d2 {
        // Same head position: only the written cell differs, at offset -d.
        let k = d.unsigned_abs() as u64;
        return (x != x2 && k <= limit).then_some(k);
    }
    // Successor cells at offset k from their heads, relative to the old head.
    let a = |k: isize| {
        let j = k + d;
        if j == 0 {
            x
        } else {
            t.cell(j)
        }
    };
    let b = |k: isize| {
        let j = k + d2;
        if j == 0 {
            x2
        } else {
            t.cell(j)
        }
    };
    // Past these offsets both successors read blanks forever.
    let right_end = t.right() - d.min(d2);
    let left_end = t.left() + d.max(d2);
    let cap = limit.min(right_end.max(left_end).max(0) as u64 + 1) as isize;
    if a(0) != b(0) {
        return Some(0);
    }
    for k in 1..=cap {
        if k <= right_end && a(k) != b(k) {
            return Some(k as u64);
        }
        if k <= left_end && a(-k) != b(-k) {
            return Some(k as u64);
        }
    }
    None
}

/// Distances for all six `(write, move)` slots of one step; the true slot is 0
/// and alternatives that survive every radius are [`NEVER`].
fn step_radii<N: Neighborhood>(t: &N, truth: Action) -> [u64; 6] {
    let mut out = [0u64; 6];
    let true_slot = slot(truth.write, truth.mv);
    for (s, r) in out.iter_mut().enumerate() {
        if s == true_slot {
            continue;
        }
        let alt = slot_action(truth.to_state, s);
        *r = first_mismatch(
            t,
            (truth.write, truth.mv.offset()),
            (alt.write, alt.mv.offset()),
            NEVER,
        )
        .unwrap_or(NEVER);
    }
    out
}

/// A simulation paired with a bit-packed copy of its tape. Distances are
/// the same as [`first_mismatch`] computes, found 64 cells at a time.
struct Scanner<'m> {
    run: Run<'m>,
    bits: BitTape,
}

impl<'m> Scanner<'m> {
    fn new(machine: &'m Tm, input: &[Symbol]) -> Result<Self, SimError> {
        Ok(Scanner {
            run: Run::new(machine, input)?,
            bits: BitTape::with_input(input),
        })
    }

    fn advance(&mut self, truth: Action) {
        let p = self.run.tape().head_offset();
        self.run.step();
        self.bits.set(p, truth.write);
        let (lo, hi) = self.run.tape().extent();
        self.bits.ensure(lo, hi);
    }

    /// Distances for all six slots, as [`step_radii`], but capped: anything
    /// beyond `limit` is reported as [`NEVER`].
    fn radii(&self, truth: Action, limit: u64) -> [u64; 6] {
        let tape = self.run.tape();
        let p = tape.head_offset();
        let (lo, hi) = tape.extent();
        let (left, right) = (p - lo, hi - p);
        let (x, d) = (truth.write, truth.mv.offset() as i64);
        let true_slot = slot(truth.write, truth.mv);
        let cell = |j: i64, written: Symbol| if j == 0 { written } else { self.bits.get(p + j) };
        let mut out = [0u64; 6];
        // Far-field result per alternative move, shared by both written symbols.
        let mut far: [Option<Option<u64>>; 3] = [None; 3];
        for (s, r) in out.iter_mut().enumerate() {
            if s == true_slot {
                continue;
            }
            let alt = slot_action(truth.to_state, s);
            let (x2, d2) = (alt.write, alt.mv.offset() as i64);
            let found = if d == d2 {
                (x != x2).then_some(d.unsigned_abs())
            } else {
                let near = (0..=2i64).find(|&k| {
                    cell(k + d, x) != cell(k + d2, x2) || cell(-k + d, x) != cell(-k + d2, x2)
                });
                match near {
                    Some(k) => Some(k as u64),
                    None => *far[(d2 + 1) as usize].get_or_insert_with(|| {
                        let right_end = right - d.min(d2);
                        let left_end = left + d.max(d2);
                        let cap = (right_end.max(left_end) + 1).min(limit.min(i64::MAX as u64) as i64);
                        self.bits
                            .shifted_mismatch(p + d, p + d2, 3, right_end, left_end, cap)
                            .map(|k| k as u64)
                    }),
                }
            };
            *r = match found {
                Some(k) if k <= limit => k,
                _ => NEVER,
            };
        }
        out
    }
}

/// Smallest radius at which step `i` of a recorded trace is unambiguous.
pub fn step_min_window(trace: &Trace, i: usize) -> Result<u64, ComplexityError> {
    let len = trace.applied.len();
    if i >= len {
        return Err(ComplexityError::StepOutOfRange {
            step: i as u64,
            len: len as u64,
        });
    }
    let key = trace.applied[i];
    let truth = trace.machine.get(key).expect("trace applied a defined rule");
    let radius = step_radii(&trace.configs[i], truth)
        .into_iter()
        .max()
        .unwrap_or(0);
    if radius == NEVER {
        return Err(ComplexityError::Irreducible {
            step: i as u64,
            key,
        });
    }
    Ok(radius)
}

/// Per-run summary of window ambiguity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    /// Rules applied.
    pub applied: u64,
    pub ones: u64,
    /// Maximum per-step radius, or `None` if some step is irreducible.
    pub strict: Option<u64>,
    /// First step attaining the strict maximum.
    pub strict_witness: Option<u64>,
    /// First irreducible step, if any.
    pub irreducible_step: Option<(u64, RuleKey)>,
    /// For each used key, the smallest distance seen for each slot.
    pub per_key: Vec<(RuleKey, [u64; 6])>,
}

impl Analysis {
    pub fn cc_star(&self, mode: Mode) -> Result<u64, ComplexityError> {
        match mode {
            Mode::Strict => match (self.strict, self.irreducible_step) {
                (Some(r), _) => Ok(r),
                (None, Some((step, key))) => Err(ComplexityError::Irreducible { step, key }),
                (None, None) => unreachable!("strict is only unset for irreducible runs"),
            },
            Mode::Global => {
                let mut best = 0;
                for (key, radii) in &self.per_key {
                    let r = radii.iter().copied().max().unwrap_or(0);
                    if r == NEVER {
                        return Err(ComplexityError::IrreducibleKey { key: *key });
                    }
                    best = best.max(r);
                }
                Ok(best)
            }
        }
    }
}

fn check_bound(max_steps: u64) -> Result<(), ComplexityError> {
    if max_steps == 0 {
        Err(SimError::ZeroBound.into())
    } else {
        Ok(())
    }
}

/// Simulates `machine` once and measures every step. Memory is independent of
/// the run length.
pub fn analyze(machine: &Tm, input: &[Symbol], max_steps: u64) -> Result<Analysis, ComplexityError> {
    check_bound(max_steps)?;
    let mut sc = Scanner::new(machine, input)?;
    // Dense per-key table indexed by 2*state + read.
    let mut per_key: Vec<Option<[u64; 6]>> = vec![None; 2 * machine.state_count() as usize];
    let mut strict = 0u64;
    let mut witness = None;
    let mut irreducible = None;
    while let Some(truth) = sc.run.next_action() {
        if sc.run.applied() >= max_steps {
            return Err(SimError::BoundExceeded { max_steps }.into());
        }
        let key = sc.run.key();
        let radii = sc.radii(truth, NEVER);
        let step_max = radii.iter().copied().max().unwrap_or(0);
        if step_max == NEVER {
            irreducible.get_or_insert((sc.run.applied(), key));
        } else if step_max > strict || witness.is_none() {
            strict = strict.max(step_max);
            witness = Some(sc.run.applied());
        }
        let entry = per_key[2 * key.state as usize + key.read as usize].get_or_insert([NEVER; 6]);
        for (e, r) in entry.iter_mut().zip(radii) {
            *e = (*e).min(r);
        }
        sc.advance(truth);
    }
    let per_key = per_key
        .into_iter()
        .enumerate()
        .filter_map(|(idx, r)| {
            r.map(|r| (RuleKey::new((idx / 2) as u32, (idx % 2) as Symbol), r))
        })
        .collect();
    Ok(Analysis {
        applied: sc.run.applied(),
        ones: sc.run.tape().ones(),
        strict: irreducible.is_none().then_some(strict),
        strict_witness: if irreducible.is_none() { witness } else { None },
        irreducible_step: irreducible,
        per_key,
    })
}

/// Smallest radius at which windows determine the machine, computed from
/// exact per-step distances.
pub fn cc_star(machine: &Tm, input: &[Symbol], mode: Mode, max_steps: u64) -> Result<u64, ComplexityError> {
    analyze(machine, input, max_steps)?.cc_star(mode)
}

/// Whether every step (strict) or every key (global) is unambiguous at radius `n`.
pub fn unique_at(
    machine: &Tm,
    input: &[Symbol],
    n: u64,
    mode: Mode,
    max_steps: u64,
) -> Result<bool, ComplexityError> {
    check_bound(max_steps)?;
    let mut sc = Scanner::new(machine, input)?;
    // Global mode: slots still alive per key.
    let mut alive: Vec<u8> = vec![0b11_1111; 2 * machine.state_count() as usize];
    let mut used = vec![false; alive.len()];
    while let Some(truth) = sc.run.next_action() {
        if sc.run.applied() >= max_steps {
            return Err(SimError::BoundExceeded { max_steps }.into());
        }
        let radii = sc.radii(truth, n);
        match mode {
            Mode::Strict => {
                if radii.contains(&NEVER) {
                    return Ok(false);
                }
            }
            Mode::Global => {
                let key = sc.run.key();
                let idx = 2 * key.state as usize + key.read as usize;
                used[idx] = true;
                for (s, r) in radii.iter().enumerate() {
                    if *r != NEVER && s != slot(truth.write, truth.mv) {
                        alive[idx] &= !(1 << s);
                    }
                }
            }
        }
        sc.advance(truth);
    }
    Ok(match mode {
        Mode::Strict => true,
        Mode::Global => alive
            .iter()
            .zip(&used)
            .all(|(m, &u)| !u || m.count_ones() == 1),
    })
}

/// Records predicate outcomes and insists they stay monotone: every radius
/// found unique lies above every radius found ambiguous.
struct Monotone {
    max_false: Option<u64>,
    min_true: Option<u64>,
}

impl Monotone {
    fn record(&mut self, n: u64, value: bool) {
        if value {
            self.min_true = Some(self.min_true.map_or(n, |m| m.min(n)));
        } else {
            self.max_false = Some(self.max_false.map_or(n, |m| m.max(n)));
        }
        if let (Some(f), Some(t)) = (self.max_false, self.min_true) {
            assert!(f < t, "uniqueness predicate not monotone: ambiguous at {f}, unique at {t}");
        }
    }
}

/// Binary search over the radius on [`unique_at`]. Each probe re-simulates the
/// machine. Must agree with [`cc_star`].
pub fn cc_star_bsearch(
    machine: &Tm,
    input: &[Symbol],
    mode: Mode,
    max_steps: u64,
) -> Result<u64, ComplexityError> {
    // A plain run first: it fixes the halting question and bounds the radius.
    let result = crate::simulator::run(machine, input, max_steps, StepConvention::AppliedRules)?;
    let width = (result.final_config.before.len() + result.final_config.after.len()) as u64;
    let ceiling = width + 2;
    let mut seen = Monotone {
        max_false: None,
        min_true: None,
    };
    let mut probe = |n: u64| -> Result<bool, ComplexityError> {
        let v = unique_at(machine, input, n, mode, max_steps)?;
        seen.record(n, v);
        Ok(v)
    };
    if probe(0)? {
        return Ok(0);
    }
    if !probe(ceiling)? {
        // Saturated windows: what stays ambiguous here stays ambiguous.
        return Err(match cc_star(machine, input, mode, max_steps) {
            Err(e) => e,
            Ok(r) => panic!("search ceiling {ceiling} below exact radius {r}"),
        });
    }
    // Invariant: ambiguous at lo, unique at hi.
    let (mut lo, mut hi) = (0u64, ceiling);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityReport {
    pub name: String,
    pub steps: u64,
    pub ones: u64,
    /// Learning interactions, when the Q-learner was run.
    pub cc: Option<u64>,
    pub cc_star: u64,
    pub mode: Mode,
}

impl ComplexityReport {
    /// `name,t_T,ones,cc,cc_star` with an empty `cc` field when absent.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.name,
            self.steps,
            self.ones,
            self.cc.map(|c| c.to_string()).unwrap_or_default(),
            self.cc_star
        )
    }
}

pub const CSV_HEADER: &str = "name,t_T,ones,cc,cc_star";

/// Simulation statistics plus window complexity for one machine.
pub fn report(
    name: &str,
    machine: &Tm,
    input: &[Symbol],
    mode: Mode,
    convention: StepConvention,
    max_steps: u64,
) -> Result<ComplexityReport, ComplexityError> {
    let a = analyze(machine, input, max_steps)?;
    Ok(ComplexityReport {
        name: name.to_string(),
        steps: convention.count(a.applied),
        ones: a.ones,
        cc: None,
        cc_star: a.cc_star(mode)?,
        mode,
    })
}
