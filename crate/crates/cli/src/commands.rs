//! The `ts` command line: flag definitions and one function per command.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use truestage::jump::{approx_stages, japprox};
use truestage::ordinal::parse_ordinal;
use truestage::structures::{build, iso_check, BranchOracle, EmptyOracle, HaltsOracle, Literal, LiteralCoding};
use truestage::system::{self, EtaSystem};
use truestage::transfinite::japprox_pow;
use truestage::value::parse_string;
use truestage::{Belief, BeliefContext, FinString, Ordinal};

use crate::formats::{read_family, read_system, read_trace, resolve_table, string_to_json, trace_lines};
use crate::suites::{self, sample, Report};
use crate::CliError;

fn ordinal_arg(s: &str) -> Result<Ordinal, String> {
    parse_ordinal(s).map_err(|e| e.to_string())
}

fn string_arg(s: &str) -> Result<FinString, String> {
    parse_string(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "ts", version, about = "True stages of iterated jumps, belief relations and η-system runs")]
pub struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = sample::DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

/// The functional table and the ambient `η`.
#[derive(Debug, Args)]
pub struct Context {
    /// A bundled table name, `universal`, or a toy-table JSON file.
    #[arg(long, default_value = "divergent")]
    pub table: String,
    /// The ordinal `η`.
    #[arg(long, default_value = "1", value_parser = ordinal_arg)]
    pub eta: Ordinal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Relation {
    /// The corrected relation `≤_ξ`.
    Leq,
    /// The first approximation `⊴_ξ`.
    Tri,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Jump,
    Tower,
    Ordinal,
    Nabla,
    Belief,
    Engine,
    Pairs,
    Sample,
}

impl Suite {
    /// The stage bound each suite runs at unless overridden.
    pub fn default_stages(self) -> usize {
        match self {
            Suite::Nabla => 40,
            Suite::Belief => 25,
            Suite::Engine => 30,
            Suite::Pairs => 20,
            Suite::Jump | Suite::Tower | Suite::Ordinal | Suite::Sample => 0,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print `∇_s^ξ`, or with `--true` the prefix `∇^ξ↾k`.
    Nabla {
        #[command(flatten)]
        ctx: Context,
        #[arg(long, value_parser = ordinal_arg)]
        xi: Ordinal,
        #[arg(long, required_unless_present = "truth")]
        stage: Option<usize>,
        #[arg(long = "true", id = "truth", requires = "len", conflicts_with = "stage")]
        truth: bool,
        #[arg(long)]
        len: Option<usize>,
    },
    /// Print `J(σ)` with its stages, or `J^{ω^α}(σ)` with `--alpha`.
    Japprox {
        #[arg(long, default_value = "divergent")]
        table: String,
        #[arg(long, value_parser = string_arg)]
        sigma: FinString,
        #[arg(long, value_parser = ordinal_arg)]
        alpha: Option<Ordinal>,
    },
    /// Decide `s ≤_ξ t`.
    Believe {
        #[command(flatten)]
        ctx: Context,
        #[arg(long, value_parser = ordinal_arg)]
        xi: Ordinal,
        #[arg(short = 's')]
        s: usize,
        #[arg(short = 't')]
        t: usize,
        #[arg(long, value_enum, default_value_t = Relation::Leq)]
        relation: Relation,
    },
    /// List the stages `t ≤ T` believed `ξ`-true at `T`, or with `--actual`
    /// the stages that are `ξ`-true.
    Stages {
        #[command(flatten)]
        ctx: Context,
        #[arg(long, value_parser = ordinal_arg)]
        xi: Ordinal,
        #[arg(long)]
        max: usize,
        #[arg(long)]
        actual: bool,
    },
    /// Run a system with the engine, or re-verify a recorded trace.
    Run {
        #[command(flatten)]
        ctx: Context,
        /// A system spec file or a built-in system name.
        #[arg(long)]
        system: String,
        #[arg(long, required_unless_present = "replay")]
        steps: Option<usize>,
        /// Write the trace here, one JSON object per stage.
        #[arg(long, conflicts_with = "replay")]
        trace: Option<PathBuf>,
        /// Re-verify the run recorded in this trace file.
        #[arg(long, conflicts_with = "steps")]
        replay: Option<PathBuf>,
    },
    /// Build a copy of the guessed structure of a family and compare it with
    /// every member.
    Pairs {
        /// A structure family JSON file.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 40)]
        steps: usize,
        /// Guess with the halting of a machine on the `halting` table.
        #[arg(long, conflicts_with = "machine_loops")]
        machine_halts: bool,
        /// Guess with the halting of a machine on the `divergent` table.
        #[arg(long)]
        machine_loops: bool,
        /// Which machine the guess watches.
        #[arg(long, default_value_t = 0)]
        machine: u64,
        /// Overrides the table the machine flags select.
        #[arg(long)]
        table: Option<String>,
    },
    /// Run property suites; all of them when none is named.
    Check {
        #[arg(value_enum)]
        suites: Vec<Suite>,
        /// Overrides every suite's stage bound.
        #[arg(long)]
        stages: Option<usize>,
        /// Samples per table for the seeded suite.
        #[arg(long, default_value_t = sample::DEFAULT_SAMPLES)]
        samples: usize,
    },
}

/// What a command printed and whether it counts as success.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub success: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, success: true }
    }
}

fn json_line(j: Json) -> String {
    let mut s = serde_json::to_string_pretty(&j).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let json = cli.json;
    match &cli.command {
        Command::Nabla { ctx, xi, stage, truth, len } => nabla(json, ctx, xi, *stage, *truth, *len),
        Command::Japprox { table, sigma, alpha } => japprox_cmd(json, table, sigma, alpha.as_ref()),
        Command::Believe { ctx, xi, s, t, relation } => believe(json, ctx, xi, *s, *t, *relation),
        Command::Stages { ctx, xi, max, actual } => stages(json, ctx, xi, *max, *actual),
        Command::Run { ctx, system, steps, trace, replay } => match replay {
            Some(path) => replay_cmd(json, ctx, system, path),
            None => run_cmd(json, ctx, system, steps.expect("clap requires steps"), trace.as_deref()),
        },
        Command::Pairs { spec, steps, machine_halts, machine_loops, machine, table } => {
            pairs(json, spec, *steps, *machine_halts, *machine_loops, *machine, table.as_deref())
        }
        Command::Check { suites, stages, samples } => check(json, suites, *stages, *samples, cli.seed),
    }
}

fn nabla(json: bool, c: &Context, xi: &Ordinal, stage: Option<usize>, truth: bool, len: Option<usize>) -> Result<Outcome, CliError> {
    let table = resolve_table(&c.table)?;
    let ctx = BeliefContext::new(&table, c.eta.clone());
    let level = ctx.tower().level_of(xi)?;
    let (label, value) = if truth {
        let k = len.expect("clap requires len");
        (format!("∇^{xi}↾{k}"), ctx.tower().nabla_true(&level, k)?)
    } else {
        let s = stage.expect("clap requires stage");
        (format!("∇_{s}^{xi}"), ctx.tower().nabla(&level, s))
    };
    if json {
        return Ok(Outcome::ok(json_line(json!({
            "table": c.table,
            "eta": c.eta.to_string(),
            "xi": xi.to_string(),
            "stage": stage,
            "len": len,
            "value": string_to_json(&value),
            "text": value.to_string(),
        }))));
    }
    Ok(Outcome::ok(format!("{label} = {value}\n")))
}

fn japprox_cmd(json: bool, table: &str, sigma: &FinString, alpha: Option<&Ordinal>) -> Result<Outcome, CliError> {
    let t = resolve_table(table)?;
    if let Some(alpha) = alpha {
        let value = japprox_pow(&t, alpha, sigma);
        if json {
            return Ok(Outcome::ok(json_line(json!({
                "sigma": string_to_json(sigma),
                "alpha": alpha.to_string(),
                "value": string_to_json(&value),
                "text": value.to_string(),
            }))));
        }
        return Ok(Outcome::ok(format!("J^(w^{alpha})({sigma}) = {value}\n")));
    }
    let value = japprox(&t, sigma);
    let stages = approx_stages(&t, sigma);
    if json {
        return Ok(Outcome::ok(json_line(json!({
            "sigma": string_to_json(sigma),
            "value": string_to_json(&value),
            "text": value.to_string(),
            "stages": stages,
        }))));
    }
    let mut out = format!("J({sigma}) = {value}\n");
    writeln!(out, "{:>3}  {:>4}  entry", "i", "t_i").expect("write to string");
    for (i, (t_i, entry)) in stages.iter().zip(value.iter()).enumerate() {
        writeln!(out, "{i:>3}  {t_i:>4}  {entry}").expect("write to string");
    }
    Ok(Outcome::ok(out))
}

fn believe(json: bool, c: &Context, xi: &Ordinal, s: usize, t: usize, relation: Relation) -> Result<Outcome, CliError> {
    let table = resolve_table(&c.table)?;
    let ctx = BeliefContext::new(&table, c.eta.clone());
    if *xi > ctx.top_xi() {
        return Err(truestage::Error::OutOfRange.into());
    }
    let holds = match relation {
        Relation::Leq => ctx.leq(xi, s, t),
        Relation::Tri => ctx.tri_leq(xi, s, t),
    };
    if json {
        let name = match relation {
            Relation::Leq => "leq",
            Relation::Tri => "tri",
        };
        return Ok(Outcome::ok(json_line(json!({ "relation": name, "xi": xi.to_string(), "s": s, "t": t, "holds": holds }))));
    }
    Ok(Outcome::ok(format!("{holds}\n")))
}

fn stages(json: bool, c: &Context, xi: &Ordinal, max: usize, actual: bool) -> Result<Outcome, CliError> {
    let table = resolve_table(&c.table)?;
    let ctx = BeliefContext::new(&table, c.eta.clone());
    if *xi > ctx.top_xi() {
        return Err(truestage::Error::OutOfRange.into());
    }
    let list = if actual { ctx.actual_true_stages(xi, max)? } else { ctx.apparent_true_stages(xi, max) };
    if json {
        let kind = if actual { "actual" } else { "apparent" };
        return Ok(Outcome::ok(json_line(json!({ "kind": kind, "xi": xi.to_string(), "max": max, "stages": list }))));
    }
    let items: Vec<String> = list.iter().map(|t| t.to_string()).collect();
    Ok(Outcome::ok(format!("{}\n", items.join(" "))))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn run_cmd(json: bool, c: &Context, system: &str, steps: usize, trace: Option<&Path>) -> Result<Outcome, CliError> {
    let table = resolve_table(&c.table)?;
    let ctx = BeliefContext::new(&table, c.eta.clone());
    let sys = read_system(system, &ctx.top_xi())?;
    let run = system::run(&ctx, &sys, steps)?;
    let verdict = system::verify_run(&ctx, &sys, &run);
    let enumerated = system::enumerate(&sys, &run);
    if let Some(path) = trace {
        let mut text = trace_lines(&run, |l| sys.enumerate(l)).join("\n");
        if !run.is_empty() {
            text.push('\n');
        }
        write_file(path, &text)?;
    }
    let verified = verdict.is_ok();
    if json {
        return Ok(Outcome {
            stdout: json_line(json!({
                "stages": run.len(),
                "states": run.states,
                "verified": verified,
                "violation": verdict.err().map(|v| format!("{v:?}")),
                "enumerated": enumerated,
            })),
            success: verified,
        });
    }
    let states: Vec<String> = run.states.iter().map(|l| l.to_string()).collect();
    let tokens: Vec<String> = enumerated.iter().map(|k| k.to_string()).collect();
    let mut out = format!("stages: {}\nstates: {}\nenumerated: {{{}}}\n", run.len(), states.join(" "), tokens.join(", "));
    match &verdict {
        Ok(()) => out.push_str("verify_run: ok\n"),
        Err(v) => writeln!(out, "verify_run: failed {v:?}").expect("write to string"),
    }
    Ok(Outcome { stdout: out, success: verified })
}

fn replay_cmd(json: bool, c: &Context, system: &str, path: &Path) -> Result<Outcome, CliError> {
    let table = resolve_table(&c.table)?;
    let ctx = BeliefContext::new(&table, c.eta.clone());
    let sys = read_system(system, &ctx.top_xi())?;
    let (run, tokens) = read_trace(path)?;
    let mismatched: Vec<usize> = run
        .states
        .iter()
        .zip(&tokens)
        .enumerate()
        .filter(|(_, (&l, recorded))| {
            let mut e = sys.enumerate(l);
            e.sort_unstable();
            e.dedup();
            e != **recorded
        })
        .map(|(i, _)| i)
        .collect();
    let verdict = system::verify_run(&ctx, &sys, &run);
    let verified = verdict.is_ok() && mismatched.is_empty();
    if json {
        return Ok(Outcome {
            stdout: json_line(json!({
                "stages": run.len(),
                "verified": verdict.is_ok(),
                "violation": verdict.err().map(|v| format!("{v:?}")),
                "enumeration_mismatches": mismatched,
            })),
            success: verified,
        });
    }
    let mut out = format!("replayed stages: {}\n", run.len());
    match &verdict {
        Ok(()) => out.push_str("verify_run: ok\n"),
        Err(v) => writeln!(out, "verify_run: failed {v:?}").expect("write to string"),
    }
    if !mismatched.is_empty() {
        writeln!(out, "recorded enumerations differ at stages {mismatched:?}").expect("write to string");
    }
    Ok(Outcome { stdout: out, success: verified })
}

fn literal_text(lit: &Literal) -> String {
    let args: Vec<String> = lit.vars.iter().map(|v| format!("c{v}")).collect();
    let atom = if lit.rel == 0 { format!("{} = {}", args[0], args[1]) } else { format!("R{}({})", lit.rel, args.join(",")) };
    if lit.positive {
        atom
    } else {
        format!("¬{atom}")
    }
}

fn pairs(
    json: bool,
    spec: &Path,
    steps: usize,
    halts: bool,
    loops: bool,
    machine: u64,
    table: Option<&str>,
) -> Result<Outcome, CliError> {
    let tree = read_family(spec)?;
    let default_table = if halts { "halting" } else { "divergent" };
    let t = resolve_table(table.unwrap_or(default_table))?;
    let ctx = BeliefContext::new(&t, Ordinal::one());
    let watcher = HaltsOracle { table: t.clone(), machine };
    let w: &dyn BranchOracle = if halts || loops { &watcher } else { &EmptyOracle };
    let built = build(&ctx, &tree, w, 0, steps)?;
    let any = tree.family().values().next().expect("families are nonempty");
    let coding = LiteralCoding::for_structure(any);
    let guess = built.states.last().map(|s| s.tau.clone()).unwrap_or_default();
    let mut verdicts = Vec::new();
    for (branch, a) in tree.family() {
        verdicts.push((branch.to_string(), iso_check(&coding, &built.diagram, a)?));
    }
    let positive: Vec<Literal> = built.diagram.iter().map(|&c| coding.decode(c)).filter(|l| l.positive).collect();
    if json {
        let members: Vec<Json> = verdicts.iter().map(|(b, v)| json!({ "branch": b, "isomorphic": v })).collect();
        return Ok(Outcome::ok(json_line(json!({
            "steps": steps,
            "guess": guess.to_string(),
            "diagram": built.diagram,
            "facts": positive.iter().map(literal_text).collect::<Vec<_>>(),
            "members": members,
        }))));
    }
    let constants = positive.iter().map(|l| l.max_var() + 1).max().unwrap_or(0);
    let mut out = format!("steps: {steps}\nguess: {guess}\n");
    writeln!(out, "diagram: {} literals over c0..c{}, positive facts by constant:", built.diagram.len(), constants.saturating_sub(1))
        .expect("write to string");
    for m in 0..constants {
        let facts: Vec<String> = positive.iter().filter(|l| l.max_var() == m).map(literal_text).collect();
        writeln!(out, "  c{m}: {}", facts.join(", ")).expect("write to string");
    }
    for (branch, v) in &verdicts {
        writeln!(out, "A_{branch}: {}", if *v { "isomorphic" } else { "not isomorphic" }).expect("write to string");
    }
    Ok(Outcome::ok(out))
}

/// Runs one suite at its stage bound.
pub fn run_suite(suite: Suite, stages: Option<usize>, samples: usize, seed: u64) -> Report {
    let s = stages.unwrap_or(suite.default_stages());
    match suite {
        Suite::Jump => suites::jump::run(),
        Suite::Tower => suites::tower::run(),
        Suite::Ordinal => suites::ordinal::run(),
        Suite::Nabla => suites::nabla::run(s),
        Suite::Belief => suites::belief::run(s),
        Suite::Engine => suites::engine::run(s),
        Suite::Pairs => suites::pairs::run(s),
        Suite::Sample => sample::run(seed, samples),
    }
}

fn check(json: bool, names: &[Suite], stages: Option<usize>, samples: usize, seed: u64) -> Result<Outcome, CliError> {
    let chosen: Vec<Suite> = if names.is_empty() { Suite::value_variants().to_vec() } else { names.to_vec() };
    let reports: Vec<Report> = chosen.iter().map(|&s| run_suite(s, stages, samples, seed)).collect();
    let success = reports.iter().all(Report::passed);
    if json {
        let items: Vec<Json> = reports
            .iter()
            .map(|r| json!({ "suite": r.name, "passed": r.passed(), "checks": r.checks, "failed": r.failed, "failures": r.failures }))
            .collect();
        return Ok(Outcome { stdout: json_line(Json::Array(items)), success });
    }
    let mut out = String::new();
    for r in &reports {
        writeln!(out, "{r}").expect("write to string");
    }
    Ok(Outcome { stdout: out, success })
}
