#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use tmlab::simulator::apply;
use tmlab::{Action, Configuration, Move, Rule, Tm};

/// A machine over `1..=max_states` states. Each `(state, read)` pair is left
/// undefined with probability `1/6`.
pub fn random_machine<R: Rng>(rng: &mut R, max_states: u32) -> Tm {
    let states = rng.gen_range(1..=max_states);
    let mut rules = Vec::new();
    for q in 0..states {
        for read in 0..2u8 {
            if rng.gen_range(0..6) == 0 {
                continue;
            }
            let to = rng.gen_range(0..states);
            let write = rng.gen_range(0..2u8);
            let mv = Move::ALL[rng.gen_range(0..3)];
            rules.push(Rule::new(q, read, to, write, mv));
        }
    }
    Tm::with_state_count(states, rules).expect("one rule per key")
}

pub fn arb_machine(max_states: u32) -> impl Strategy<Value = Tm> {
    (1..=max_states)
        .prop_flat_map(|states| {
            let rule = proptest::option::weighted(0.85, (0..states, 0..2u8, 0..3usize));
            (Just(states), proptest::collection::vec(rule, 2 * states as usize))
        })
        .prop_map(|(states, slots)| {
            let rules = slots.into_iter().enumerate().filter_map(|(i, slot)| {
                slot.map(|(to, write, mv)| Rule::new(i as u32 / 2, (i % 2) as u8, to, write, Move::ALL[mv]))
            });
            Tm::with_state_count(states, rules).expect("one rule per key")
        })
}

pub fn arb_input() -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(0..2u8, 0..6)
}

/// Brute force: every rule for the key under the head, applied to the full
/// configuration and windowed, kept when it reproduces the observed window.
pub fn brute_force_candidates(c: &Configuration, next: &Configuration, n: usize, states: u32) -> BTreeSet<Action> {
    let observed = next.window(n);
    let mut out = BTreeSet::new();
    for to in 0..=states.max(next.state + 1) {
        for write in 0..2u8 {
            for mv in Move::ALL {
                let a = Action::new(to, write, mv);
                if apply(c, a).window(n) == observed {
                    out.insert(a);
                }
            }
        }
    }
    out
}

/// Spearman rank correlation, average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for k in i..=j {
                r[idx[k]] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Configurations of the first `max_steps` transitions, halting or not.
pub fn prefix_configs(machine: &Tm, input: &[u8], max_steps: usize) -> Vec<Configuration> {
    let mut r = tmlab::simulator::Run::new(machine, input).expect("valid input");
    let mut out = vec![r.config()];
    while out.len() <= max_steps && r.step().is_some() {
        out.push(r.config());
    }
    out
}
