//! Tabular Q-learning agent that learns to predict the next rule.
//!
//! The agent watches a machine through radius-`n` windows. At every step it
//! proposes a rule triple `(to_state, write, move)` for the current window,
//! is rewarded `+1` when that rule, applied to the observed configuration,
//! reproduces the next window and `-1` otherwise, and updates its table with
//! the one-step Q-learning rule. Episodes replay the same run until the agent
//! gets through a run without a wrong prediction; the number of predictions
//! made until then is the learning time.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{WindowConfig, WindowStep};
use crate::learner::{candidates, LearnError};
use crate::machine::{Action, Move, Symbol, Tm};
use crate::simulator::{SimError, StepStream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParams {
    /// Learning rate, in `(0, 1]`.
    pub alpha: f64,
    /// Discount, in `[0, 1)`.
    pub gamma: f64,
    /// Exploration rate of the first episode.
    pub epsilon: f64,
    /// Factor applied to the exploration rate after each episode.
    pub epsilon_decay: f64,
    pub seed: u64,
    /// Consecutive error-free episodes required.
    pub convergence: u32,
    pub max_episodes: u32,
    /// Window radius the agent observes.
    pub radius: usize,
}

impl Default for QParams {
    fn default() -> Self {
        QParams {
            alpha: 0.1,
            gamma: 0.9,
            epsilon: 0.3,
            epsilon_decay: 0.95,
            seed: 42,
            convergence: 1,
            max_episodes: 1000,
            radius: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("invalid parameter: {0}")]
    Param(&'static str),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error("no convergence within {} episodes", .0.errors.len())]
    NotConverged(Box<LearningCurve>),
}

impl QParams {
    pub fn check(&self) -> Result<(), QError> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(QError::Param("alpha must lie in (0, 1]"));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(QError::Param("gamma must lie in [0, 1)"));
        }
        if !(0.0..=1.0).contains(&self.epsilon) || !(0.0..=1.0).contains(&self.epsilon_decay) {
            return Err(QError::Param("epsilon and its decay must lie in [0, 1]"));
        }
        if self.convergence == 0 || self.max_episodes == 0 {
            return Err(QError::Param("convergence and max_episodes must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearningCurve {
    /// Wrong predictions per episode.
    pub errors: Vec<u64>,
    /// Predictions made through the end of each episode.
    pub cumulative: Vec<u64>,
    /// Predictions made until convergence (all of them if not converged).
    pub cc: u64,
    pub converged: bool,
}

impl LearningCurve {
    /// `episode,errors,cumulative_interactions`, one row per episode.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("episode,errors,cumulative_interactions\n");
        for (i, (e, c)) in self.errors.iter().zip(&self.cumulative).enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, e, c));
        }
        out
    }
}

/// One step, compiled for replay.
#[derive(Debug, Clone, Copy)]
struct Observation {
    state: usize,
    next: usize,
    /// Largest machine state visible once this step's windows are seen.
    seen: u32,
    to_state: u32,
    /// Rewarded `(write, move)` slots.
    mask: u8,
}

fn action_index(a: Action) -> usize {
    a.to_state as usize * 6 + a.write as usize * 3 + a.mv.code() as usize
}

fn index_action(i: usize) -> Action {
    let slot = i % 6;
    Action::new(
        (i / 6) as u32,
        (slot / 3) as Symbol,
        Move::from_code((slot % 3) as u32).expect("below 3"),
    )
}

/// Q-values of one window. Actions past the end of `q` read as `rest`.
#[derive(Debug, Clone)]
struct Row {
    q: Vec<f64>,
    rest: f64,
}

impl Row {
    #[inline]
    fn get(&self, a: usize) -> f64 {
        self.q.get(a).copied().unwrap_or(self.rest)
    }

    fn get_mut(&mut self, a: usize) -> &mut f64 {
        if self.q.len() <= a {
            self.q.resize(a + 1, self.rest);
        }
        &mut self.q[a]
    }
}

/// Tabular agent. Untried actions start at the optimistic value `1 / (1 - gamma)`.
#[derive(Debug, Clone)]
pub struct QAgent {
    params: QParams,
    ids: HashMap<WindowConfig, usize>,
    table: Vec<Row>,
    /// Largest machine state seen in observations or named by a set Q-value.
    seen: u32,
    rng: ChaCha8Rng,
}

impl QAgent {
    pub fn new(params: QParams) -> Result<QAgent, QError> {
        params.check()?;
        Ok(QAgent {
            params,
            ids: HashMap::new(),
            table: Vec::new(),
            seen: 0,
            rng: ChaCha8Rng::seed_from_u64(params.seed),
        })
    }

    pub fn params(&self) -> &QParams {
        &self.params
    }

    fn initial(&self) -> f64 {
        1.0 / (1.0 - self.params.gamma)
    }

    fn intern(&mut self, w: &WindowConfig) -> usize {
        if let Some(&id) = self.ids.get(w) {
            return id;
        }
        let id = self.table.len();
        self.ids.insert(w.clone(), id);
        self.table.push(Row {
            q: Vec::new(),
            rest: self.initial(),
        });
        id
    }

    pub fn q(&self, w: &WindowConfig, a: Action) -> f64 {
        match self.ids.get(w) {
            Some(&id) => self.table[id].get(action_index(a)),
            None => self.initial(),
        }
    }

    pub fn set_q(&mut self, w: &WindowConfig, a: Action, value: f64) {
        let id = self.intern(w);
        self.seen = self.seen.max(w.state).max(a.to_state);
        *self.table[id].get_mut(action_index(a)) = value;
    }

    /// Makes `a` the only action with positive value in window `w`.
    pub fn pretrain(&mut self, w: &WindowConfig, a: Action) {
        let id = self.intern(w);
        self.seen = self.seen.max(w.state).max(a.to_state);
        let row = &mut self.table[id];
        row.q.clear();
        row.rest = 0.0;
        *row.get_mut(action_index(a)) = 1.0;
    }

    /// Largest absolute Q-value in the table.
    pub fn max_abs_q(&self) -> f64 {
        self.table
            .iter()
            .flat_map(|r| r.q.iter().chain([&r.rest]))
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn states(&self) -> usize {
        self.table.len()
    }

    fn compile<I>(&mut self, steps: I) -> Result<Vec<Observation>, QError>
    where
        I: IntoIterator<Item = WindowStep>,
    {
        let mut seen = 0u32;
        let mut out = Vec::new();
        for (i, step) in steps.into_iter().enumerate() {
            let set = candidates(&step).map_err(|e| match e {
                LearnError::EmptyCandidates { key, .. } => LearnError::EmptyCandidates {
                    step: i as u64,
                    key,
                },
                other => other,
            })?;
            seen = seen.max(step.from.state).max(step.to.state);
            let mut mask = 0u8;
            for a in set.actions() {
                mask |= 1 << (a.write as usize * 3 + a.mv.code() as usize);
            }
            out.push(Observation {
                state: self.intern(&step.from),
                next: self.intern(&step.to),
                seen,
                to_state: set.to_state,
                mask,
            });
        }
        Ok(out)
    }

    /// Best action among the first `width` in fixed order; ties go to the lowest index.
    fn greedy(&self, state: usize, width: usize) -> usize {
        let row = &self.table[state];
        let mut best = 0;
        let mut best_q = f64::NEG_INFINITY;
        for a in 0..width {
            let q = row.get(a);
            if q > best_q {
                best = a;
                best_q = q;
            }
        }
        best
    }

    fn max_q(&self, state: usize, width: usize) -> f64 {
        let row = &self.table[state];
        (0..width)
            .map(|a| row.get(a))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn rewarded(obs: &Observation, a: usize) -> bool {
        let act = index_action(a);
        act.to_state == obs.to_state && obs.mask & (1 << (a % 6)) != 0
    }

    fn episode(&mut self, obs: &[Observation], epsilon: f64) -> u64 {
        let (alpha, gamma) = (self.params.alpha, self.params.gamma);
        let mut errors = 0;
        for (i, o) in obs.iter().enumerate() {
            // The state space of the action set grows as states are observed;
            // one unseen state is always on offer.
            let width = 6 * (self.seen as usize + 2);
            let a = if epsilon > 0.0 && self.rng.gen::<f64>() < epsilon {
                self.rng.gen_range(0..width)
            } else {
                self.greedy(o.state, width)
            };
            let reward = if Self::rewarded(o, a) { 1.0 } else { -1.0 };
            if reward < 0.0 {
                errors += 1;
            }
            self.seen = self.seen.max(o.seen);
            let next_width = 6 * (self.seen as usize + 2);
            // Replays follow each other, so the last step leads into the first window.
            let next = if i + 1 < obs.len() { o.next } else { obs[0].state };
            let target = reward + gamma * self.max_q(next, next_width);
            let q = self.table[o.state].get_mut(a);
            *q += alpha * (target - *q);
        }
        errors
    }

    /// Replays the run until `convergence` consecutive clean episodes or the
    /// episode bound.
    pub fn train<I>(&mut self, steps: I) -> Result<LearningCurve, QError>
    where
        I: IntoIterator<Item = WindowStep>,
    {
        let obs = self.compile(steps)?;
        let mut curve = LearningCurve {
            errors: Vec::new(),
            cumulative: Vec::new(),
            cc: 0,
            converged: false,
        };
        let mut epsilon = self.params.epsilon;
        let mut clean_run = 0u32;
        let mut total = 0u64;
        for _ in 0..self.params.max_episodes {
            let errors = self.episode(&obs, epsilon);
            total += obs.len() as u64;
            curve.errors.push(errors);
            curve.cumulative.push(total);
            clean_run = if errors == 0 { clean_run + 1 } else { 0 };
            if clean_run >= self.params.convergence {
                curve.converged = true;
                break;
            }
            epsilon *= self.params.epsilon_decay;
        }
        curve.cc = total;
        if curve.converged {
            Ok(curve)
        } else {
            Err(QError::NotConverged(Box::new(curve)))
        }
    }

    /// Wrong predictions of the greedy policy over one replay, without learning.
    pub fn greedy_errors<I>(&self, steps: I) -> Result<u64, QError>
    where
        I: IntoIterator<Item = WindowStep>,
    {
        let mut errors = 0;
        for step in steps {
            let set = candidates(&step)?;
            let predicted = match self.ids.get(&step.from) {
                Some(&id) => {
                    let width = 6 * (step.from.state.max(step.to.state) as usize + 2);
                    let width = width.max(self.table[id].q.len());
                    index_action(self.greedy(id, width))
                }
                None => index_action(0),
            };
            if !set.contains(predicted) {
                errors += 1;
            }
        }
        Ok(errors)
    }
}

/// Trains a fresh agent on a window-step stream.
pub fn train<I>(steps: I, params: QParams) -> Result<LearningCurve, QError>
where
    I: IntoIterator<Item = WindowStep>,
{
    QAgent::new(params)?.train(steps)
}

/// Learning time of `machine` on `input`: predictions made until the agent
/// predicts a whole run correctly.
pub fn cc(machine: &Tm, input: &[Symbol], params: QParams, max_steps: u64) -> Result<LearningCurve, QError> {
    let mut stream = StepStream::new(machine, input, params.radius, max_steps)?;
    let steps: Vec<WindowStep> = stream.by_ref().collect();
    if let Some(Err(e)) = stream.outcome() {
        return Err(e.clone().into());
    }
    train(steps, params)
}
