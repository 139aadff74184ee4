//! The `rtg` command line.
//!
//! Exit status: 0 inclusion holds or the command succeeded, 1 inclusion
//! refuted or a checked property is false, 2 usage or input error, 3 fuel
//! exhausted.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::dartzobel::{DartZobel, DEFAULT_FUEL};
use crate::grammar::{parse_grammar, Grammar};
use crate::harness::{
    run_trials_with, summarize, write_jsonl, Classification, GenConfig, Instance,
};
use crate::semantics::{
    find_regular_counterexample, find_td_counterexample, member, member_td, Enumerator, Refutation,
};
use crate::tdsubset::TdSubset;
use crate::term::PureTerm;
use crate::trace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Holds,
    Refuted,
    Usage,
    FuelExhausted,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Holds => 0,
            ExitStatus::Refuted => 1,
            ExitStatus::Usage => 2,
            ExitStatus::FuelExhausted => 3,
        }
    }

    fn from_bool(b: bool) -> Self {
        if b {
            ExitStatus::Holds
        } else {
            ExitStatus::Refuted
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "rtg",
    version,
    about = "Regular types: inclusion, membership, enumeration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide or refute ⟦TAU1⟧ ⊆ ⟦TAU2⟧
    Check(CheckArgs),
    /// Test whether a ground term belongs to a type
    Member(MemberArgs),
    /// List the members of a type up to a depth, in canonical order
    Enum(EnumArgs),
    /// Print the simplified grammar in canonical form
    Simplify(SimplifyArgs),
    /// Run random differential trials and write JSONL reports
    Fuzz(FuzzArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Dz,
    Td,
    Oracle,
    TdOracle,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Dz => "dz",
            Algo::Td => "td",
            Algo::Oracle => "oracle",
            Algo::TdOracle => "td-oracle",
        }
    }
}

#[derive(clap::Args, Debug)]
struct CheckArgs {
    #[arg(long, value_enum, default_value_t = Algo::Dz)]
    algo: Algo,
    /// Depth bound of the oracles
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Write the step trace of dz or td here
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Treat an inconclusive oracle as an error
    #[arg(long)]
    strict: bool,
    grammar: PathBuf,
    tau1: String,
    tau2: String,
}

#[derive(clap::Args, Debug)]
struct MemberArgs {
    /// Membership in the tuple-distributive closure of the union of TAU...
    #[arg(long)]
    td: bool,
    #[arg(long)]
    json: bool,
    grammar: PathBuf,
    term: String,
    #[arg(required = true)]
    tau: Vec<String>,
}

#[derive(clap::Args, Debug)]
struct EnumArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    /// Give up when an intermediate set grows beyond this many terms
    #[arg(long, default_value_t = 1_000_000)]
    limit: usize,
    #[arg(long)]
    json: bool,
    grammar: PathBuf,
    tau: String,
}

#[derive(clap::Args, Debug)]
struct SimplifyArgs {
    /// Fail if this type symbol is empty; may be repeated
    #[arg(long = "root", value_name = "SYMBOL")]
    roots: Vec<String>,
    grammar: PathBuf,
}

#[derive(clap::Args, Debug)]
struct FuzzArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    /// Use the left-skewed tree instance as trial 0
    #[arg(long)]
    inject: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// Usage and input errors, reported with status 2.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

type Outcome = Result<ExitStatus, Fail>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() {
                ExitStatus::Usage
            } else {
                ExitStatus::Holds
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return status;
        }
    };
    let result = match cli.command {
        Command::Check(a) => check(a, out, err),
        Command::Member(a) => member_cmd(a, out),
        Command::Enum(a) => enum_cmd(a, out),
        Command::Simplify(a) => simplify_cmd(a, out),
        Command::Fuzz(a) => fuzz_cmd(a, out, err),
    };
    match result {
        Ok(status) => status,
        Err(Fail(message)) => {
            let _ = writeln!(err, "error: {message}");
            ExitStatus::Usage
        }
    }
}

fn read_grammar(path: &Path) -> Result<Grammar, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
    parse_grammar(&text).map_err(|e| Fail(format!("{}: {e}", path.display())))
}

/// Parses `terms` against the grammar in `path` and simplifies it, failing
/// if any type symbol they mention is empty.
fn load_with_terms(path: &Path, terms: &[&str]) -> Result<(Grammar, Vec<PureTerm>), Fail> {
    let raw = read_grammar(path)?;
    let parsed = terms
        .iter()
        .map(|t| raw.parse_term(t))
        .collect::<Result<Vec<_>, _>>()?;
    let mut roots = BTreeSet::new();
    for t in &parsed {
        t.for_each_type_symbol(&mut |s| {
            roots.insert(s.as_str().to_string());
        });
    }
    let roots: Vec<&str> = roots.iter().map(String::as_str).collect();
    Ok((raw.simplify(&roots)?, parsed))
}

fn check(a: CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let (g, terms) = load_with_terms(&a.grammar, &[&a.tau1, &a.tau2])?;
    let (tau1, tau2) = (&terms[0], &terms[1]);
    let algo = a.algo.name();
    match a.algo {
        Algo::Dz | Algo::Td => {
            let (result, steps) = match a.algo {
                Algo::Dz => {
                    let mut run = DartZobel::new(&g).with_fuel(a.fuel);
                    if a.trace.is_some() {
                        run = run.with_trace();
                    }
                    (run.subset(tau1, tau2), run.take_trace())
                }
                _ => {
                    let mut run = TdSubset::new(&g).with_fuel(a.fuel);
                    if a.trace.is_some() {
                        run = run.with_trace();
                    }
                    (run.subset(tau1, tau2), run.take_trace())
                }
            };
            if let Some(path) = &a.trace {
                fs::write(path, trace::render(&steps))
                    .map_err(|e| Fail(format!("{}: {e}", path.display())))?;
            }
            match result {
                Ok(holds) => {
                    if a.json {
                        writeln!(
                            out,
                            "{}",
                            json!({"algo": algo, "result": holds, "witness": null})
                        )?;
                    } else {
                        writeln!(out, "{holds}")?;
                    }
                    Ok(ExitStatus::from_bool(holds))
                }
                Err(e) => {
                    writeln!(err, "{algo}: {e}")?;
                    Ok(ExitStatus::FuelExhausted)
                }
            }
        }
        Algo::Oracle | Algo::TdOracle => {
            if a.trace.is_some() {
                return Err(Fail("--trace applies to --algo dz and td only".into()));
            }
            let depth = a.depth as usize;
            let found = if a.algo == Algo::Oracle {
                find_regular_counterexample(&g, tau1, tau2, depth)
            } else {
                find_td_counterexample(&g, tau1, tau2, depth)
            };
            match found {
                Refutation::Witness(t) => {
                    if a.json {
                        writeln!(
                            out,
                            "{}",
                            json!({"algo": algo, "result": false, "witness": t.to_string()})
                        )?;
                    } else {
                        writeln!(out, "false\nwitness: {t}")?;
                    }
                    Ok(ExitStatus::Refuted)
                }
                Refutation::Inconclusive { .. } => {
                    if a.json {
                        writeln!(
                            out,
                            "{}",
                            json!({"algo": algo, "result": "inconclusive", "witness": null})
                        )?;
                    } else {
                        writeln!(out, "inconclusive")?;
                    }
                    Ok(if a.strict {
                        ExitStatus::Usage
                    } else {
                        ExitStatus::Holds
                    })
                }
            }
        }
    }
}

fn member_cmd(a: MemberArgs, out: &mut dyn Write) -> Outcome {
    if !a.td && a.tau.len() != 1 {
        return Err(Fail("member takes one type unless --td is given".into()));
    }
    let taus: Vec<&str> = a.tau.iter().map(String::as_str).collect();
    let (g, terms) = load_with_terms(&a.grammar, &taus)?;
    let t = g.parse_ground(&a.term)?;
    let holds = if a.td {
        member_td(&g, &t, &terms.into_iter().collect())
    } else {
        member(&g, &t, &terms[0])
    };
    if a.json {
        writeln!(out, "{}", json!({"result": holds, "td": a.td}))?;
    } else {
        writeln!(out, "{holds}")?;
    }
    Ok(ExitStatus::from_bool(holds))
}

fn enum_cmd(a: EnumArgs, out: &mut dyn Write) -> Outcome {
    let (g, terms) = load_with_terms(&a.grammar, &[&a.tau])?;
    let all = Enumerator::with_limit(&g, a.limit).enumerate(&terms[0], a.depth as usize)?;
    if a.json {
        let items: Vec<String> = all.iter().map(ToString::to_string).collect();
        writeln!(out, "{}", json!(items))?;
    } else {
        for t in all.iter() {
            writeln!(out, "{t}")?;
        }
    }
    Ok(ExitStatus::Holds)
}

fn simplify_cmd(a: SimplifyArgs, out: &mut dyn Write) -> Outcome {
    let g = read_grammar(&a.grammar)?;
    let roots: Vec<&str> = a.roots.iter().map(String::as_str).collect();
    write!(out, "{}", g.simplify(&roots)?.render())?;
    Ok(ExitStatus::Holds)
}

fn fuzz_cmd(a: FuzzArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cfg = GenConfig::default().with_seed(a.seed);
    let injected = if a.inject {
        vec![Instance::left_skewed()]
    } else {
        Vec::new()
    };
    let reports = run_trials_with(&cfg, a.trials as usize, a.depth as usize, &injected);
    let summary = summarize(&reports);
    let notes: &mut dyn Write = match &a.out {
        Some(path) => {
            let file =
                fs::File::create(path).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
            write_jsonl(&reports, std::io::BufWriter::new(file))?;
            out
        }
        None => {
            write_jsonl(&reports, &mut *out)?;
            err
        }
    };
    for (class, count) in &summary {
        writeln!(notes, "{class}\t{count}")?;
    }
    let count = |c: Classification| summary.iter().find(|(k, _)| *k == c).map_or(0, |(_, n)| *n);
    Ok(if count(Classification::FuelExhausted) > 0 {
        ExitStatus::FuelExhausted
    } else if count(Classification::DzTdMismatch) > 0 {
        ExitStatus::Refuted
    } else {
        ExitStatus::Holds
    })
}
