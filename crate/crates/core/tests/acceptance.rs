//! Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
//! nonzero if any criterion fails. The long-running machines are checked only
//! when `TMLAB_EXTENDED=1` is set.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{brute_force_candidates, prefix_configs, random_machine, spearman};
use tmlab::catalog::{self, REFERENCES};
use tmlab::complexity::{analyze, cc_star, cc_star_bsearch, unique_at, Mode};
use tmlab::machine::{Move, Rule};
use tmlab::qlearner::{self, QParams};
use tmlab::simulator::StepStream;
use tmlab::{candidates, decode, reconstruct, reconstruct_full, run, trace, Action, RuleKey, StepConvention, Tm, WindowStep};

const EXTENDED_ENV: &str = "TMLAB_EXTENDED";
const BOUND: u64 = tmlab::DEFAULT_MAX_STEPS;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fast() -> impl Iterator<Item = tmlab::tmfile::NamedMachine> {
    catalog::table1().into_iter().filter(|m| !catalog::is_extended(&m.name))
}

fn extended() -> impl Iterator<Item = tmlab::tmfile::NamedMachine> {
    catalog::table1().into_iter().filter(|m| catalog::is_extended(&m.name))
}

fn codec_oracle() -> Result<String, String> {
    let machines = catalog::table1();
    ensure(machines.len() == 9, || format!("{} machines", machines.len()))?;
    for m in &machines {
        ensure(m.machine.rule_count() == 9, || format!("{}: {} rules", m.name, m.machine.rule_count()))?;
        ensure(m.machine.undefined_keys().len() == 1, || format!("{}: undefined keys {:?}", m.name, m.machine.undefined_keys()))?;
    }
    let bb5 = decode("9, 0, 11, 1, 15, 2, 17, 3, 11, 4, 23, 5, 24, 6, 3, 7, 21, 9, 0").map_err(|e| e.to_string())?;
    let expected = Tm::from_rules([
        Rule::new(0, 0, 1, 1, Move::Right),
        Rule::new(0, 1, 2, 1, Move::Left),
        Rule::new(1, 0, 2, 1, Move::Right),
        Rule::new(1, 1, 1, 1, Move::Right),
        Rule::new(2, 0, 3, 1, Move::Right),
        Rule::new(2, 1, 4, 0, Move::Left),
        Rule::new(3, 0, 0, 1, Move::Left),
        Rule::new(3, 1, 3, 1, Move::Left),
        Rule::new(4, 1, 0, 0, Move::Left),
    ])
    .unwrap();
    ensure(bb5 == expected, || "bb5 decodes to a different rule set".into())?;
    ensure(catalog::by_name("bb5").unwrap().machine == expected, || "catalog bb5 differs".into())?;
    Ok("9 machines, 9 rules and 1 undefined key each".into())
}

fn simulate(machines: impl Iterator<Item = tmlab::tmfile::NamedMachine>) -> Result<String, String> {
    let mut rows = Vec::new();
    for m in machines {
        let r = run(&m.machine, &[], BOUND, StepConvention::Configurations).map_err(|e| format!("{}: {e}", m.name))?;
        let reference = catalog::reference(&m.name).unwrap();
        ensure((r.steps, r.ones) == (reference.steps, reference.ones), || {
            format!("{}: ({}, {}) != ({}, {})", m.name, r.steps, r.ones, reference.steps, reference.ones)
        })?;
        rows.push(format!("({},{})", r.steps, r.ones));
    }
    Ok(rows.join(" "))
}

fn simulation_fast() -> Result<String, String> {
    let t = Instant::now();
    let s = simulate(fast())?;
    ensure(t.elapsed().as_secs_f64() < 1.0, || format!("took {:?}", t.elapsed()))?;
    Ok(s)
}

fn simulation_extended() -> Result<String, String> {
    let t = Instant::now();
    let s = simulate(extended())?;
    ensure(t.elapsed().as_secs_f64() < 10.0, || format!("took {:?}", t.elapsed()))?;
    Ok(s)
}

fn cc_star_rows(machines: impl Iterator<Item = tmlab::tmfile::NamedMachine>) -> Result<String, String> {
    let mut rows = Vec::new();
    for m in machines {
        let a = analyze(&m.machine, &[], BOUND).map_err(|e| format!("{}: {e}", m.name))?;
        let strict = a.cc_star(Mode::Strict).map_err(|e| format!("{}: {e}", m.name))?;
        let expected = catalog::reference(&m.name).unwrap().cc_star;
        if strict != expected {
            let global = a.cc_star(Mode::Global).map_err(|e| format!("{}: {e}", m.name))?;
            return Err(format!("{}: strict {strict}, global {global}, expected {expected}", m.name));
        }
        rows.push(strict.to_string());
    }
    Ok(format!("strict {}", rows.join(" ")))
}

fn cc_star_fast() -> Result<String, String> {
    let t = Instant::now();
    let s = cc_star_rows(fast())?;
    ensure(t.elapsed().as_secs_f64() < 60.0, || format!("took {:?}", t.elapsed()))?;
    Ok(s)
}

fn cc_star_extended() -> Result<String, String> {
    let t = Instant::now();
    let s = cc_star_rows(extended())?;
    ensure(t.elapsed().as_secs_f64() < 1800.0, || format!("took {:?}", t.elapsed()))?;
    Ok(format!("{s} in {:.0?}", t.elapsed()))
}

/// Rules of `m` that its run never applies; no trace can reveal them.
fn unused(m: &Tm, applied: &BTreeSet<RuleKey>) -> Vec<String> {
    m.rules().filter(|r| !applied.contains(&r.key)).map(|r| format!("{r}")).collect()
}

fn closure_fast() -> Result<String, String> {
    let mut notes = Vec::new();
    for m in fast() {
        let t = trace(&m.machine, &[], BOUND).map_err(|e| e.to_string())?;
        let applied: BTreeSet<RuleKey> = t.applied.iter().copied().collect();
        let target = m.machine.restricted_to(&applied);
        for r in unused(&m.machine, &applied) {
            notes.push(format!("{} never applies {r}", m.name));
        }
        let full = reconstruct_full(t.config_pairs()).map_err(|e| format!("{}: {e}", m.name))?;
        ensure(full.machine == target, || format!("{}: full reconstruction differs", m.name))?;
        let n = catalog::reference(&m.name).unwrap().cc_star as usize;
        let at = reconstruct(t.window_steps(n)).map_err(|e| format!("{}: {e}", m.name))?;
        ensure(at.per_step_unique() && at.machine == target, || format!("{}: not unique at {n}", m.name))?;
        let below = reconstruct(t.window_steps(n - 1)).map_err(|e| format!("{}: {e}", m.name))?;
        ensure(!below.per_step_unique(), || format!("{}: already unique at {}", m.name, n - 1))?;
    }
    Ok(format!(
        "6 machines: full = original on applied rules, unique at cc*, ambiguous step at cc*-1; {}",
        if notes.is_empty() { "no unused rules".into() } else { notes.join(", ") }
    ))
}

fn closure_extended() -> Result<String, String> {
    // Storing every configuration of these runs is out of reach, so the full
    // reconstruction is checked through radius-0 windows: every rule applied
    // is seen, and every pinned rule is the machine's own.
    for m in extended() {
        let n = catalog::reference(&m.name).unwrap().cc_star;
        let learned = reconstruct(StepStream::new(&m.machine, &[], 0, BOUND).map_err(|e| e.to_string())?)
            .map_err(|e| format!("{}: {e}", m.name))?;
        let keys = learned.machine.rule_count() + learned.ambiguous_keys.len();
        ensure(keys == m.machine.rule_count(), || format!("{}: {keys} of {} rules applied", m.name, m.machine.rule_count()))?;
        for r in learned.machine.rules() {
            ensure(m.machine.get(r.key) == Some(r.action), || format!("{}: learned {r}", m.name))?;
        }
        ensure(unique_at(&m.machine, &[], n, Mode::Strict, BOUND).map_err(|e| e.to_string())?, || {
            format!("{}: ambiguous at {n}", m.name)
        })?;
        ensure(!unique_at(&m.machine, &[], n - 1, Mode::Strict, BOUND).map_err(|e| e.to_string())?, || {
            format!("{}: unique at {}", m.name, n - 1)
        })?;
    }
    Ok("3 machines: unique at cc*, ambiguous at cc*-1".into())
}

fn oracle_equivalence() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut comparisons = 0u64;
    for i in 0..1000 {
        let tm = random_machine(&mut rng, 4);
        let input: Vec<u8> = (0..rand::Rng::gen_range(&mut rng, 0..5)).map(|_| rand::Rng::gen_range(&mut rng, 0..2)).collect();
        let configs = prefix_configs(&tm, &input, 200);
        for pair in configs.windows(2) {
            for n in 0..=8 {
                let step = WindowStep::between(&pair[0], &pair[1], n);
                let got: BTreeSet<Action> = candidates(&step).map_err(|e| e.to_string())?.actions().collect();
                let want = brute_force_candidates(&pair[0], &pair[1], n, tm.state_count());
                ensure(got == want, || format!("machine {i} ({}), radius {n}: {got:?} != {want:?}", tmlab::encode(&tm)))?;
                comparisons += 1;
            }
        }
    }
    Ok(format!("1000 machines, {comparisons} window pairs, 0 mismatches"))
}

fn monotonicity() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut halting = 0;
    let mut tried = 0;
    while halting < 100 {
        tried += 1;
        let tm = random_machine(&mut rng, 4);
        let Ok(t) = trace(&tm, &[], 500) else { continue };
        halting += 1;
        for pair in t.configs.windows(2) {
            let mut prev: Option<BTreeSet<Action>> = None;
            for n in 0..=12 {
                let set: BTreeSet<Action> = candidates(&WindowStep::between(&pair[0], &pair[1], n))
                    .map_err(|e| e.to_string())?
                    .actions()
                    .collect();
                if let Some(p) = &prev {
                    ensure(set.is_subset(p), || format!("{}: candidates grew at radius {n}", tmlab::encode(&tm)))?;
                }
                prev = Some(set);
            }
        }
        for mode in [Mode::Strict, Mode::Global] {
            let exact = cc_star(&tm, &[], mode, 500).map_err(|e| e.to_string());
            let searched = cc_star_bsearch(&tm, &[], mode, 500).map_err(|e| e.to_string());
            ensure(exact.is_ok() == searched.is_ok() && exact.as_ref().ok() == searched.as_ref().ok(), || {
                format!("{} {mode}: {exact:?} vs {searched:?}", tmlab::encode(&tm))
            })?;
        }
    }
    Ok(format!("100 halting machines (of {tried} drawn), candidates shrink, search = exact"))
}

fn learning_time() -> Result<String, String> {
    let t = Instant::now();
    let mut steps = Vec::new();
    let mut cc = Vec::new();
    for r in REFERENCES.iter().filter(|r| r.steps <= 20928) {
        let m = catalog::by_name(r.name).unwrap();
        let curve = qlearner::cc(&m.machine, &[], QParams::default(), BOUND).map_err(|e| format!("{}: {e}", r.name))?;
        ensure(curve.converged, || format!("{}: not converged", r.name))?;
        steps.push(r.steps as f64);
        cc.push(curve.cc as f64);
    }
    ensure(steps.len() == 5, || format!("{} machines", steps.len()))?;
    let rho = spearman(&steps, &cc);
    ensure(rho > 0.0, || format!("rho = {rho}"))?;
    ensure(t.elapsed().as_secs() < 300, || format!("took {:?}", t.elapsed()))?;
    let list: Vec<String> = cc.iter().map(|c| c.to_string()).collect();
    Ok(format!("cc = {}, spearman rho = {rho:.2}", list.join(" ")))
}

fn determinism() -> Result<String, String> {
    let table = || {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = tmlab::cli::run(["tmlab", "table", "--tier", "fast"], &mut out, &mut err);
        (code, out)
    };
    let (c1, a) = table();
    let (c2, b) = table();
    ensure(c1 == 0 && c2 == 0, || format!("exit codes {c1} {c2}"))?;
    ensure(a == b, || "outputs differ".into())?;
    let text = String::from_utf8(a).map_err(|e| e.to_string())?;
    let mut expected = String::from("name,t_T,ones,cc,cc_star\n");
    for r in REFERENCES.iter().filter(|r| !r.extended) {
        expected.push_str(&format!("{},{},{},,{}\n", r.name, r.steps, r.ones, r.cc_star));
    }
    ensure(text == expected, || format!("table differs:\n{text}"))?;
    Ok(format!("{} identical bytes, rows match the reference table", text.len()))
}

fn main() {
    let extended_on = std::env::var(EXTENDED_ENV).is_ok_and(|v| v == "1");
    let criteria: [(&str, Check, bool); 11] = [
        ("codec oracle", codec_oracle, false),
        ("simulation, fast tier", simulation_fast, false),
        ("simulation, extended tier", simulation_extended, true),
        ("cc*, fast tier", cc_star_fast, false),
        ("cc*, extended tier", cc_star_extended, true),
        ("reconstruction closure, fast tier", closure_fast, false),
        ("reconstruction closure, extended tier", closure_extended, true),
        ("oracle equivalence", oracle_equivalence, false),
        ("monotonicity", monotonicity, false),
        ("learning time", learning_time, false),
        ("determinism", determinism, false),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check, slow) in criteria {
        if slow && !extended_on {
            println!("SKIP  {name}  (set {EXTENDED_ENV}=1)");
            continue;
        }
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}  [{secs:.2}s]  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}  [{secs:.2}s]  {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
