//! The `tmlab` command line.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | other failure (I/O) |
//! | 2 | usage error, unknown machine name, bad input string |
//! | 3 | machine file missing or malformed |
//! | 4 | step bound exceeded |
//! | 5 | reconstruction mismatch or ambiguity at the requested radius |
//! | 6 | irreducible ambiguity |
//! | 7 | Q-learner did not converge |
//!
//! Batch commands keep going after a per-machine failure and exit with the
//! code of the first failing machine.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::catalog;
use crate::codec;
use crate::complexity::{self, ComplexityError, ComplexityReport, Mode};
use crate::export;
use crate::learner::{self, LearnError};
use crate::machine::{Symbol, Tm};
use crate::qlearner::{self, LearningCurve, QError, QParams};
use crate::simulator::{self, SimError, StepConvention, StepStream};
use crate::tmfile::{self, NamedMachine, TmFileError};
use crate::DEFAULT_MAX_STEPS;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_BOUND: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;
pub const EXIT_IRREDUCIBLE: i32 = 6;
pub const EXIT_NOT_CONVERGED: i32 = 7;

/// Environment variable capping the worker threads of batch commands.
pub const THREADS_ENV: &str = "TMLAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "tmlab", version, about = "Simulate, learn and measure two-symbol Turing machines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run machines to halting and report steps and ones.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Write a per-step CSV trace (one machine only).
        #[arg(long, value_name = "FILE")]
        trace_csv: Option<PathBuf>,
    },
    /// Smallest window radius that determines every applied rule.
    Ccstar {
        #[command(flatten)]
        common: Common,
        /// Write `name,cc_star` figure data.
        #[arg(long, value_name = "FILE")]
        emit_fig5: Option<PathBuf>,
        /// Use the binary search over radii instead of exact distances.
        #[arg(long)]
        bsearch: bool,
    },
    /// Reconstruct a machine from its windowed run.
    Learn {
        #[command(flatten)]
        common: Common,
        /// Learn from full configurations instead of windows.
        #[arg(long, conflicts_with = "radius")]
        full: bool,
    },
    /// Q-learning interaction count.
    Cc {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        q: QArgs,
        /// Write the learning curve CSV (one machine only).
        #[arg(long, value_name = "FILE")]
        curve: Option<PathBuf>,
        /// Write `name,t_T,cc` figure data.
        #[arg(long, value_name = "FILE")]
        emit_fig2: Option<PathBuf>,
    },
    /// Steps, ones and window complexity in one CSV table.
    Table {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        q: QArgs,
        #[arg(long, value_enum, default_value_t = Tier::Fast)]
        tier: Tier,
        /// Fill the `cc` column by running the Q-learner.
        #[arg(long)]
        with_cc: bool,
        #[arg(long, value_name = "FILE")]
        emit_fig5: Option<PathBuf>,
        #[arg(long, value_name = "FILE", requires = "with_cc")]
        emit_fig2: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Machine file; defaults to the built-in catalog.
    #[arg(value_name = "FILE")]
    pub file: Option<PathBuf>,
    #[arg(long = "machines", value_name = "FILE")]
    pub machines: Option<PathBuf>,
    /// Machines to select (repeatable); defaults to every machine in the file.
    #[arg(long = "name", value_name = "ID")]
    pub names: Vec<String>,
    /// Window radius.
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ConventionArg::Configs)]
    pub step_convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Initial tape contents as a string of 0s and 1s.
    #[arg(long, default_value = "")]
    pub input: String,
}

#[derive(Debug, Args)]
pub struct QArgs {
    #[arg(long, default_value_t = QParams::default().seed)]
    pub seed: u64,
    #[arg(long, default_value_t = QParams::default().alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = QParams::default().gamma)]
    pub gamma: f64,
    #[arg(long, default_value_t = QParams::default().epsilon)]
    pub epsilon: f64,
    #[arg(long, default_value_t = QParams::default().max_episodes)]
    pub max_episodes: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Configs,
    Rules,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tier {
    /// The six reference machines that finish in seconds.
    Fast,
    /// Every machine.
    Extended,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Global => Mode::Global,
        }
    }
}

impl From<ConventionArg> for StepConvention {
    fn from(c: ConventionArg) -> StepConvention {
        match c {
            ConventionArg::Configs => StepConvention::Configurations,
            ConventionArg::Rules => StepConvention::AppliedRules,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown machine name {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    File(#[from] TmFileError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error("reconstruction differs from the machine: {0}")]
    Mismatch(String),
    #[error("{0}")]
    Q(#[from] QError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Export(#[from] export::ExportError),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::UnknownName(_) => EXIT_USAGE,
            CliError::File(_) => EXIT_PARSE,
            CliError::Sim(e) => sim_code(e),
            CliError::Complexity(ComplexityError::Sim(e)) => sim_code(e),
            CliError::Complexity(_) => EXIT_IRREDUCIBLE,
            CliError::Learn(LearnError::Irreducible { .. }) => EXIT_IRREDUCIBLE,
            CliError::Learn(_) | CliError::Mismatch(_) => EXIT_MISMATCH,
            CliError::Q(QError::Sim(e)) => sim_code(e),
            CliError::Q(QError::NotConverged(_)) => EXIT_NOT_CONVERGED,
            CliError::Q(QError::Param(_)) => EXIT_USAGE,
            CliError::Q(QError::Learn(_)) => EXIT_MISMATCH,
            CliError::Io(_) => EXIT_OTHER,
            CliError::Export(export::ExportError::Sim(e)) => sim_code(e),
            CliError::Export(export::ExportError::Io(_)) => EXIT_OTHER,
        }
    }
}

fn sim_code(e: &SimError) -> i32 {
    match e {
        SimError::BoundExceeded { .. } => EXIT_BOUND,
        SimError::BadInput(_) | SimError::ZeroBound => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Simulate { common, trace_csv } => cmd_simulate(common, trace_csv.as_deref(), out, err),
        Command::Ccstar { common, emit_fig5, bsearch } => {
            cmd_ccstar(common, emit_fig5.as_deref(), *bsearch, out, err)
        }
        Command::Learn { common, full } => cmd_learn(common, *full, out, err),
        Command::Cc { common, q, curve, emit_fig2 } => {
            cmd_cc(common, q, curve.as_deref(), emit_fig2.as_deref(), out, err)
        }
        Command::Table { common, q, tier, with_cc, emit_fig5, emit_fig2 } => cmd_table(
            common,
            q,
            *tier,
            *with_cc,
            emit_fig5.as_deref(),
            emit_fig2.as_deref(),
            out,
            err,
        ),
    }
}

/// Resolves the machine source and selection. Unknown names fail here,
/// before anything runs.
pub fn select(common: &Common) -> Result<Vec<NamedMachine>, CliError> {
    let path = match (&common.file, &common.machines) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Usage("machine file given twice with different paths".into()))
        }
        (Some(p), _) | (None, Some(p)) => Some(p),
        (None, None) => None,
    };
    let (pool, default) = match path {
        Some(p) => {
            let all = tmfile::load(p)?;
            (all.clone(), all)
        }
        None => (catalog::builtin(), catalog::table1()),
    };
    if common.names.is_empty() {
        return Ok(default);
    }
    common
        .names
        .iter()
        .map(|name| {
            pool.iter()
                .find(|m| &m.name == name)
                .cloned()
                .ok_or_else(|| CliError::UnknownName(name.clone()))
        })
        .collect()
}

fn input_of(common: &Common) -> Result<Vec<Symbol>, CliError> {
    Ok(simulator::parse_input(&common.input)?)
}

fn threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Maps `f` over `items` on a pool sized by [`THREADS_ENV`]; results keep input order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads() {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)?;
    Ok(())
}

/// Reports a per-machine failure and folds it into the batch exit code.
fn note_failure(code: &mut i32, err: &mut dyn Write, name: &str, e: &CliError) {
    let _ = writeln!(err, "{name}: {e}");
    if *code == EXIT_OK {
        *code = e.code();
    }
}

fn cmd_simulate(
    common: &Common,
    trace_csv: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let machines = select(common)?;
    let input = input_of(common)?;
    let convention = StepConvention::from(common.step_convention);
    if let Some(path) = trace_csv {
        let [m] = machines.as_slice() else {
            return Err(CliError::Usage("--trace-csv needs exactly one machine".into()));
        };
        let mut f = io::BufWriter::new(fs::File::create(path)?);
        export::write_trace_csv(&mut f, &m.machine, &input, common.max_steps, convention)?;
        f.flush()?;
    }
    let results = par_map(&machines, |m| simulator::run(&m.machine, &input, common.max_steps, convention));
    if common.format == Format::Csv {
        writeln!(out, "name,t_T,ones,halted")?;
    }
    let mut code = EXIT_OK;
    for (m, r) in machines.iter().zip(results) {
        match (r, common.format) {
            (Ok(r), Format::Text) => writeln!(out, "{} {} {} halted", m.name, r.steps, r.ones)?,
            (Ok(r), Format::Csv) => writeln!(out, "{},{},{},true", m.name, r.steps, r.ones)?,
            (Err(e @ SimError::BoundExceeded { .. }), fmt) => {
                match fmt {
                    Format::Text => writeln!(out, "{} bound exceeded", m.name)?,
                    Format::Csv => writeln!(out, "{},,,false", m.name)?,
                }
                note_failure(&mut code, err, &m.name, &e.into());
            }
            (Err(e), _) => note_failure(&mut code, err, &m.name, &e.into()),
        }
    }
    Ok(code)
}

fn cc_star_of(m: &Tm, input: &[Symbol], mode: Mode, bsearch: bool, max_steps: u64) -> Result<u64, ComplexityError> {
    if bsearch {
        complexity::cc_star_bsearch(m, input, mode, max_steps)
    } else {
        complexity::cc_star(m, input, mode, max_steps)
    }
}

fn cmd_ccstar(
    common: &Common,
    emit_fig5: Option<&Path>,
    bsearch: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let machines = select(common)?;
    let input = input_of(common)?;
    let mode = Mode::from(common.mode);
    let results = par_map(&machines, |m| cc_star_of(&m.machine, &input, mode, bsearch, common.max_steps));
    let mut code = EXIT_OK;
    let mut fig = String::from("name,cc_star\n");
    writeln!(out, "name,cc_star")?;
    for (m, r) in machines.iter().zip(results) {
        match r {
            Ok(n) => {
                writeln!(out, "{},{}", m.name, n)?;
                fig.push_str(&format!("{},{}\n", m.name, n));
            }
            Err(e) => {
                let label = match e {
                    ComplexityError::Sim(SimError::BoundExceeded { .. }) => "bound exceeded",
                    ComplexityError::Sim(_) => "error",
                    _ => "irreducible",
                };
                writeln!(out, "{},{}", m.name, label)?;
                note_failure(&mut code, err, &m.name, &e.into());
            }
        }
    }
    if let Some(path) = emit_fig5 {
        write_file(path, &fig)?;
    }
    Ok(code)
}

fn learn_one(m: &NamedMachine, common: &Common, input: &[Symbol], full: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let mode = Mode::from(common.mode);
    let (result, radius) = if full {
        let t = simulator::trace(&m.machine, input, common.max_steps)?;
        (learner::reconstruct_full(t.config_pairs())?, None)
    } else {
        let n = match common.radius {
            Some(n) => n,
            None => complexity::cc_star(&m.machine, input, mode, common.max_steps)? as usize,
        };
        let mut stream = StepStream::new(&m.machine, input, n, common.max_steps)?;
        let result = learner::reconstruct(stream.by_ref());
        if let Some(Err(e)) = stream.outcome() {
            return Err(e.clone().into());
        }
        (result?, Some(n))
    };
    let used: Vec<_> = result.machine.rules().map(|r| r.key).chain(result.ambiguous_keys.keys().copied()).collect();
    let expected = m.machine.restricted_to(&used);
    match radius {
        Some(n) => writeln!(out, "{} radius {}", m.name, n)?,
        None => writeln!(out, "{} full", m.name)?,
    }
    out.write_all(result.report().as_bytes())?;
    let unique = match mode {
        Mode::Strict => result.per_step_unique(),
        Mode::Global => result.unique,
    };
    if !unique {
        return Err(CliError::Mismatch(format!(
            "{} ambiguous steps, first at step {}",
            result.ambiguous_steps,
            result.first_ambiguous_step.map_or("-".into(), |s| s.to_string())
        )));
    }
    if result.unique && result.machine != expected {
        return Err(CliError::Mismatch(format!(
            "learned {} but the machine is {}",
            codec::encode(&result.machine),
            codec::encode(&expected)
        )));
    }
    Ok(EXIT_OK)
}

fn cmd_learn(common: &Common, full: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let machines = select(common)?;
    let input = input_of(common)?;
    let mut code = EXIT_OK;
    for m in &machines {
        if let Err(e) = learn_one(m, common, &input, full, out) {
            note_failure(&mut code, err, &m.name, &e);
        }
    }
    Ok(code)
}

fn q_params(q: &QArgs, common: &Common) -> Result<QParams, CliError> {
    let p = QParams {
        alpha: q.alpha,
        gamma: q.gamma,
        epsilon: q.epsilon,
        seed: q.seed,
        max_episodes: q.max_episodes,
        radius: common.radius.unwrap_or(QParams::default().radius),
        ..QParams::default()
    };
    p.check()?;
    Ok(p)
}

fn learning_time(m: &Tm, input: &[Symbol], params: QParams, max_steps: u64) -> Result<LearningCurve, QError> {
    qlearner::cc(m, input, params, max_steps)
}

fn cmd_cc(
    common: &Common,
    q: &QArgs,
    curve: Option<&Path>,
    emit_fig2: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let machines = select(common)?;
    let input = input_of(common)?;
    let params = q_params(q, common)?;
    if curve.is_some() && machines.len() != 1 {
        return Err(CliError::Usage("--curve needs exactly one machine".into()));
    }
    let convention = StepConvention::from(common.step_convention);
    let results = par_map(&machines, |m| {
        let r = simulator::run(&m.machine, &input, common.max_steps, convention)?;
        let c = learning_time(&m.machine, &input, params, common.max_steps)?;
        Ok::<_, CliError>((r.steps, c))
    });
    let mut code = EXIT_OK;
    let mut fig = String::from("name,t_T,cc\n");
    if common.format == Format::Csv {
        writeln!(out, "name,t_T,cc,episodes")?;
    }
    for (m, r) in machines.iter().zip(results) {
        match r {
            Ok((steps, c)) => {
                match common.format {
                    Format::Text => writeln!(out, "{} {} {} episodes", m.name, c.cc, c.errors.len())?,
                    Format::Csv => writeln!(out, "{},{},{},{}", m.name, steps, c.cc, c.errors.len())?,
                }
                fig.push_str(&format!("{},{},{}\n", m.name, steps, c.cc));
                if let Some(path) = curve {
                    write_file(path, &c.to_csv())?;
                }
            }
            Err(e) => {
                if let (CliError::Q(QError::NotConverged(c)), Some(path)) = (&e, curve) {
                    write_file(path, &c.to_csv())?;
                }
                note_failure(&mut code, err, &m.name, &e);
            }
        }
    }
    if let Some(path) = emit_fig2 {
        write_file(path, &fig)?;
    }
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn cmd_table(
    common: &Common,
    q: &QArgs,
    tier: Tier,
    with_cc: bool,
    emit_fig5: Option<&Path>,
    emit_fig2: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut machines = select(common)?;
    if tier == Tier::Fast {
        machines.retain(|m| !catalog::is_extended(&m.name));
    }
    let input = input_of(common)?;
    let params = if with_cc { Some(q_params(q, common)?) } else { None };
    let mode = Mode::from(common.mode);
    let convention = StepConvention::from(common.step_convention);
    let results = par_map(&machines, |m| {
        let mut row = complexity::report(&m.name, &m.machine, &input, mode, convention, common.max_steps)?;
        if let Some(p) = params {
            row.cc = Some(learning_time(&m.machine, &input, p, common.max_steps)?.cc);
        }
        Ok::<ComplexityReport, CliError>(row)
    });
    if with_cc {
        let _ = writeln!(err, "note: the cc column depends on the learning engine and its seed");
    }
    let mut code = EXIT_OK;
    let mut rows = Vec::new();
    for (m, r) in machines.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => note_failure(&mut code, err, &m.name, &e),
        }
    }
    out.write_all(export::table_csv(&rows).as_bytes())?;
    if let Some(path) = emit_fig5 {
        write_file(path, &export::fig5_csv(&rows))?;
    }
    if let Some(path) = emit_fig2 {
        write_file(path, &export::fig2_csv(&rows))?;
    }
    Ok(code)
}
