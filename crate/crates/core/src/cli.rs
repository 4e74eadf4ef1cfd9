//! Command-line front end.
//!
//! Exit status: 0 when the answer is positive (witness found, valid up to
//! the bound, formula true, domain well-defined), 1 when it is negative, 2
//! on errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bmc::{self, Outcome, Query, Task};
use crate::ground::{diff, translate, Mode};
use crate::philosophers;
use crate::solver::SolveConfig;
use crate::syntax::{expand_with, parse_domain, parse_formula, DomainDescription, ExpandOptions, Formula};
use crate::trace::{self, LassoTrace};

/// Environment variable holding the default conflict budget.
pub const CONFLICT_BUDGET_VAR: &str = "TASP_CONFLICT_BUDGET";
/// Environment variable holding the default atom budget.
pub const ATOM_BUDGET_VAR: &str = "TASP_ATOM_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "tasp", version, about = "Temporal answer sets and bounded model checking for DLTL action theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for an extension satisfying a formula.
    Check(GoalArgs),
    /// Search for a counterexample to a formula.
    Valid(GoalArgs),
    /// Search for a run reaching a goal; prints the actions up to it.
    Plan(GoalArgs),
    /// Enumerate extensions at a fixed bound.
    Extensions {
        domain: PathBuf,
        #[arg(long)]
        k: u32,
        /// Stop after this many extensions.
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the ground program.
    Ground {
        domain: PathBuf,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        formula: FormulaArgs,
        /// Add the formula as a forbidden rather than a required goal.
        #[arg(long)]
        forbid: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Look for runs with an undefined fluent.
    Welldefined {
        domain: PathBuf,
        #[arg(long)]
        kmax: u32,
        #[arg(long, default_value_t = 0)]
        kmin: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Write dpN.dom, the property dpN.fml and its negation dpN.cex.fml for
    /// N dining philosophers.
    GenPhilosophers {
        n: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Evaluate a formula on a structured trace.
    EvalTrace {
        trace: PathBuf,
        #[command(flatten)]
        formula: FormulaArgs,
        /// Domain supplying the signature; defaults to the trace's own.
        #[arg(long)]
        domain: Option<PathBuf>,
    },
    /// Compare the temporal layer of two ASP texts.
    DiffGround {
        left: PathBuf,
        right: PathBuf,
        /// Rewrite `FROM` to `TO` in the left program's atoms.
        #[arg(long = "rename", value_name = "FROM=TO")]
        renames: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct FormulaArgs {
    /// Formula text.
    #[arg(short = 'f', long = "formula")]
    formula: Option<String>,
    /// File holding the formula.
    #[arg(short = 'F', long = "formula-file", conflicts_with = "formula")]
    formula_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GoalArgs {
    domain: PathBuf,
    #[command(flatten)]
    formula: FormulaArgs,
    #[arg(long, default_value_t = 0)]
    kmin: u32,
    #[arg(long)]
    kmax: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args, Debug)]
struct Common {
    /// Add the dummy action that ends finite runs.
    #[arg(long)]
    dummy: bool,
    /// Leave out the completion laws for the initial state.
    #[arg(long)]
    no_completion: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_models: Option<usize>,
    #[arg(long)]
    conflict_budget: Option<u64>,
}

impl Common {
    fn expand(&self) -> ExpandOptions {
        ExpandOptions { completion: !self.no_completion, dummy: self.dummy }
    }

    fn config(&self) -> Result<SolveConfig, String> {
        let env = |name: &str| -> Result<Option<u64>, String> {
            match std::env::var(name) {
                Ok(v) => v.trim().parse().map(Some).map_err(|_| format!("{name}: not a number: {v}")),
                Err(_) => Ok(None),
            }
        };
        let mut cfg = SolveConfig { seed: self.seed, max_models: self.max_models, ..Default::default() };
        cfg.conflict_budget = self.conflict_budget.or(env(CONFLICT_BUDGET_VAR)?);
        if let Some(a) = env(ATOM_BUDGET_VAR)? {
            cfg.atom_budget = a as usize;
        }
        Ok(cfg)
    }
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_domain(path: &Path) -> Result<DomainDescription, Failure> {
    parse_domain(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn formula_text(f: &FormulaArgs) -> Result<Option<String>, Failure> {
    match (&f.formula, &f.formula_file) {
        (Some(t), _) => Ok(Some(t.clone())),
        (None, Some(p)) => Ok(Some(read(p)?)),
        (None, None) => Ok(None),
    }
}

fn required_formula(f: &FormulaArgs, d: &DomainDescription) -> Result<Formula, Failure> {
    let text = formula_text(f)?.ok_or_else(|| Failure("a formula is required (-f or -F)".into()))?;
    Ok(parse_formula(&text, d)?)
}

fn trace_output(
    out: &mut dyn Write,
    fmt: Format,
    headline: &str,
    k: Option<u32>,
    t: Option<&LassoTrace>,
) -> std::io::Result<()> {
    match fmt {
        Format::Text => {
            writeln!(out, "{headline}")?;
            if let Some(t) = t {
                write!(out, "{}", trace::render_text(t))?;
            }
        }
        Format::Structured => {
            let trace = t.map(|t| serde_json::from_str::<serde_json::Value>(&trace::render_structured(t)).unwrap());
            let doc = json!({ "result": headline, "k": k, "trace": trace });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap())?;
        }
    }
    Ok(())
}

fn outcome(out: &mut dyn Write, fmt: Format, o: &Outcome) -> Result<i32, Failure> {
    match o {
        Outcome::Witness { trace, k } => {
            trace_output(out, fmt, &format!("witness at k = {k}"), Some(*k), Some(trace))?;
            Ok(0)
        }
        Outcome::NoWitnessUpTo(n) => {
            trace_output(out, fmt, &format!("no witness up to {n}"), None, None)?;
            Ok(1)
        }
        Outcome::ValidUpTo(n) => {
            trace_output(out, fmt, &format!("valid up to {n}"), None, None)?;
            Ok(0)
        }
        Outcome::Counterexample { trace, k } => {
            trace_output(out, fmt, &format!("counterexample at k = {k}"), Some(*k), Some(trace))?;
            Ok(1)
        }
        Outcome::IllDefined { trace, k, undefined } => {
            let list: Vec<String> = undefined.iter().map(|(s, f)| format!("{f}@{s}")).collect();
            trace_output(out, fmt, &format!("undefined at k = {k}: {}", list.join(" ")), Some(*k), Some(trace))?;
            Ok(1)
        }
        Outcome::BudgetExhausted(k) => Err(Failure(format!("conflict budget exhausted at k = {k}"))),
    }
}

fn goal_query(g: &GoalArgs, make: impl Fn(Formula) -> Task) -> Result<(DomainDescription, Query), Failure> {
    let d = load_domain(&g.domain)?;
    // Parse against the expanded signature so `dummy` can be mentioned.
    let sig = expand_with(&d, g.common.expand());
    let f = required_formula(&g.formula, &sig)?;
    let q = Query { task: make(f), k_min: g.kmin, k_max: g.kmax, cfg: g.common.config()?, expand: g.common.expand() };
    Ok((d, q))
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Check(g) => {
            let (d, q) = goal_query(&g, Task::Satisfy)?;
            outcome(out, g.common.format, &bmc::run(&d, &q)?)
        }
        Command::Valid(g) => {
            let (d, q) = goal_query(&g, Task::Validity)?;
            outcome(out, g.common.format, &bmc::run(&d, &q)?)
        }
        Command::Plan(g) => {
            let (d, q) = goal_query(&g, |f| Task::Satisfy(Formula::eventually(f)))?;
            let o = bmc::run(&d, &q)?;
            if let (Outcome::Witness { trace, .. }, Task::Satisfy(f), Format::Text) = (&o, &q.task, g.common.format) {
                let reached = trace::eval(trace, f)?.witness.unwrap_or(0) as usize;
                let steps: Vec<&str> = (0..reached).map(|s| trace.actions[s].as_str()).collect();
                writeln!(out, "plan: {}", if steps.is_empty() { "(empty)".to_string() } else { steps.join("; ") })?;
            }
            outcome(out, g.common.format, &o)
        }
        Command::Extensions { domain, k, limit, common } => {
            let d = load_domain(&domain)?;
            let mut cfg = common.config()?;
            cfg.max_models = limit.or(common.max_models);
            let ts = bmc::all_extensions(&d, k, common.expand(), &cfg)?;
            match common.format {
                Format::Text => {
                    writeln!(out, "{} extension(s) at k = {k}", ts.len())?;
                    for (i, t) in ts.iter().enumerate() {
                        writeln!(out, "extension {}:", i + 1)?;
                        write!(out, "{}", trace::render_text(t))?;
                    }
                }
                Format::Structured => {
                    let docs: Vec<serde_json::Value> =
                        ts.iter().map(|t| serde_json::from_str(&trace::render_structured(t)).unwrap()).collect();
                    writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "k": k, "extensions": docs }))?)?;
                }
            }
            Ok(if ts.is_empty() { 1 } else { 0 })
        }
        Command::Ground { domain, k, formula, forbid, common } => {
            let d = expand_with(&load_domain(&domain)?, common.expand());
            let mut g = translate(&d, k);
            g.attach_constraints(&d)?;
            if let Some(text) = formula_text(&formula)? {
                let f = parse_formula(&text, &d)?;
                g.attach_formula(&f, if forbid { Mode::Forbid } else { Mode::Require })?;
            }
            write!(out, "{}", g.export_text())?;
            Ok(0)
        }
        Command::Welldefined { domain, kmax, kmin, common } => {
            let d = load_domain(&domain)?;
            let q = Query {
                task: Task::WellDefined,
                k_min: kmin,
                k_max: kmax,
                cfg: common.config()?,
                expand: common.expand(),
            };
            match bmc::run(&d, &q)? {
                Outcome::ValidUpTo(n) => {
                    trace_output(out, common.format, &format!("well-defined up to {n}"), None, None)?;
                    Ok(0)
                }
                o => outcome(out, common.format, &o),
            }
        }
        Command::GenPhilosophers { n, out: dir } => {
            if n < 2 {
                return Err(Failure("need at least two philosophers".into()));
            }
            let (dom, fml) = philosophers::generate(n);
            std::fs::create_dir_all(&dir).map_err(|e| Failure(format!("{}: {e}", dir.display())))?;
            let files = [
                (dir.join(format!("dp{n}.dom")), dom),
                (dir.join(format!("dp{n}.fml")), fml),
                (dir.join(format!("dp{n}.cex.fml")), philosophers::violation(n)),
            ];
            for (p, text) in &files {
                std::fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
                writeln!(out, "wrote {}", p.display())?;
            }
            Ok(0)
        }
        Command::EvalTrace { trace: path, formula, domain } => {
            let t = trace::parse_structured(&read(&path)?)?;
            let sig = match domain {
                Some(p) => load_domain(&p)?,
                None => t.signature(),
            };
            let f = required_formula(&formula, &sig)?;
            let v = trace::eval(&t, &f)?;
            writeln!(out, "{}", v.value)?;
            Ok(if v.value { 0 } else { 1 })
        }
        Command::DiffGround { left, right, renames } => {
            let mut pairs = Vec::new();
            for r in &renames {
                let (a, b) = r.split_once('=').ok_or_else(|| Failure(format!("--rename expects FROM=TO, got {r}")))?;
                pairs.push((a.to_string(), b.to_string()));
            }
            let d = diff::diff_texts(&read(&left)?, &read(&right)?, &pairs)?;
            write!(out, "{d}")?;
            Ok(if d.is_equal() { 0 } else { 1 })
        }
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
