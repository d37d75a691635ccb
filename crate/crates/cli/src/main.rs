use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ltlf_core::logic::{Constraint, EncodingConfig, NormalForm, VarForm};
use ltlf_core::parse::{parse_ltlf, parse_pltlf};
use ltlf_core::pipeline::{translate, Pipeline};
use ltlf_core::Ltlf;
use ltlf_tools::check::{check_all, describe, Fault, Verdict};
use ltlf_tools::config::Settings;
use ltlf_tools::corpus::{default_corpus, gen_patterns, read_formulas, Pattern};
use ltlf_tools::{bench, formats, mona};

#[derive(Parser)]
#[command(name = "ltlf", version, about = "LTLf to DFA translation and cross-checking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate formulas to minimal DFAs (or MONA source with fol-emit).
    Translate(TranslateArgs),
    /// Run every pipeline on a corpus and cross-check the automata.
    Check(CheckArgs),
    /// Time every pipeline on a corpus; CSV output.
    Bench(BenchArgs),
    /// Write an encoding as MONA source.
    EmitMona(EmitArgs),
}

#[derive(Args)]
struct Common {
    /// key = value settings file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Deadline per pipeline run
    #[arg(long)]
    timeout_ms: Option<u64>,
}

impl Common {
    fn settings(&self) -> Result<Settings, Failure> {
        let mut s = match &self.config {
            Some(p) => Settings::load(p).map_err(|e| Failure::Usage(e.to_string()))?,
            None => Settings::default(),
        };
        if let Some(ms) = self.timeout_ms {
            s.timeout = (ms > 0).then(|| Duration::from_millis(ms));
        }
        Ok(s)
    }
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// One formula per line
    #[arg(long = "in", group = "source")]
    input: Option<PathBuf>,
    #[arg(long, group = "source")]
    formula: Option<String>,
}

impl Source {
    fn formulas(&self) -> Result<Vec<Ltlf>, Failure> {
        match (&self.input, &self.formula) {
            (_, Some(text)) => Ok(vec![parse_ltlf(text).map_err(|e| Failure::Usage(e.to_string()))?]),
            (Some(path), None) => read_file_formulas(path),
            (None, None) => unreachable!("clap requires a source"),
        }
    }
}

fn read_file_formulas(path: &PathBuf) -> Result<Vec<Ltlf>, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| Failure::Usage(format!("{e:#}")))?;
    read_formulas(&text).map_err(Failure::Usage)
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Reverse,
    Mso,
    Cmso,
    FolEmit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    Bnf,
    Nnf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strictness {
    Fussy,
    Sloppy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Vars {
    Full,
    Lean,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Format {
    Dot,
    #[default]
    Explicit,
}

#[derive(Args)]
struct EncodingArgs {
    #[arg(long, value_enum)]
    norm: Option<Norm>,
    #[arg(long, value_enum)]
    constraint: Option<Strictness>,
    #[arg(long, value_enum)]
    vars: Option<Vars>,
}

impl EncodingArgs {
    fn given(&self) -> bool {
        self.norm.is_some() || self.constraint.is_some() || self.vars.is_some()
    }

    fn config(&self) -> Result<EncodingConfig, Failure> {
        let normal = match self.norm.unwrap_or(Norm::Bnf) {
            Norm::Bnf => NormalForm::Bnf,
            Norm::Nnf => NormalForm::Nnf,
        };
        let constraint = match self.constraint.unwrap_or(Strictness::Fussy) {
            Strictness::Fussy => Constraint::Fussy,
            Strictness::Sloppy => Constraint::Sloppy,
        };
        let vars = match self.vars.unwrap_or(Vars::Full) {
            Vars::Full => VarForm::Full,
            Vars::Lean => VarForm::Lean,
        };
        EncodingConfig::new(normal, constraint, vars).map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Args)]
struct TranslateArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum)]
    pipeline: PipelineArg,
    #[command(flatten)]
    encoding: EncodingArgs,
    /// Compact encoding flavor (cmso only)
    #[arg(long, value_enum)]
    flavor: Option<Strictness>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CheckArgs {
    /// Formula file; the built-in 50-formula corpus if absent
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    trace_len: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// Swap fussy and sloppy on BNF encodings (tests the checker itself)
    #[arg(long, hide = true)]
    inject_fault: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, conflicts_with = "input", requires = "n")]
    pattern: Option<String>,
    /// Largest pattern scale
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "in", required_unless_present = "pattern")]
    input: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitEncoding {
    Fol,
    FolPast,
    Mso,
}

#[derive(Args)]
struct EmitArgs {
    /// LTLf formula; past syntax (Y, S) with fol-past
    #[arg(long)]
    formula: String,
    #[arg(long, value_enum)]
    encoding: EmitEncoding,
    #[command(flatten)]
    mso: EncodingArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Mismatch,
    Usage(String),
    Budget(String),
}

impl From<ltlf_core::Error> for Failure {
    fn from(e: ltlf_core::Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_translate(a: &TranslateArgs) -> Result<(), Failure> {
    let settings = a.common.settings()?;
    let formulas = a.source.formulas()?;
    let pipeline = match a.pipeline {
        PipelineArg::Mso => Some(Pipeline::Mso(a.encoding.config()?)),
        _ if a.encoding.given() => return Err(Failure::Usage("--norm, --constraint and --vars need --pipeline mso".into())),
        PipelineArg::Cmso => Some(Pipeline::Cmso(match a.flavor.unwrap_or(Strictness::Fussy) {
            Strictness::Fussy => ltlf_core::compact::Flavor::Fussy,
            Strictness::Sloppy => ltlf_core::compact::Flavor::Sloppy,
        })),
        PipelineArg::Reverse => Some(Pipeline::Reverse),
        PipelineArg::FolEmit => None,
    };
    if a.flavor.is_some() && !matches!(a.pipeline, PipelineArg::Cmso) {
        return Err(Failure::Usage("--flavor needs --pipeline cmso".into()));
    }
    let start = std::time::Instant::now();
    let deadline = settings.timeout.map(|t| start + t);
    let stop = move || deadline.is_some_and(|d| std::time::Instant::now() >= d);
    let limits = settings.limits().with_interrupt(&stop);
    let mut parts = Vec::new();
    for f in &formulas {
        let text = match pipeline {
            None => mona::emit_fol(f).map_err(|e| Failure::Usage(e.to_string()))?,
            Some(p) => {
                let t = translate(f, p, &limits)?;
                match a.format {
                    Format::Explicit => formats::write_explicit(&t.dfa),
                    Format::Dot => formats::dfa_dot(&t.dfa),
                }
            }
        };
        parts.push(text);
    }
    write_out(&a.out, &parts.join("\n"))
}

fn cmd_check(a: &CheckArgs) -> Result<(), Failure> {
    let mut settings = a.common.settings()?;
    if let Some(l) = a.trace_len {
        settings.trace_len = l;
    }
    if let Some(w) = a.workers {
        settings.workers = w.max(1);
    }
    let formulas = match &a.input {
        Some(p) => read_file_formulas(p)?,
        None => default_corpus(),
    };
    let reports = check_all(&formulas, &settings, Fault { swap_bnf_constraint: a.inject_fault });
    for r in &reports {
        println!("{}", describe(r));
    }
    let bad = reports.iter().filter(|r| r.is_mismatch()).count();
    let unknown = reports.iter().filter(|r| r.verdict == Verdict::Inconclusive).count();
    println!("{} formulas, {bad} mismatches, {unknown} inconclusive", reports.len());
    if bad > 0 {
        Err(Failure::Mismatch)
    } else {
        Ok(())
    }
}

fn cmd_bench(a: &BenchArgs) -> Result<(), Failure> {
    let mut settings = a.common.settings()?;
    if let Some(w) = a.workers {
        settings.workers = w.max(1);
    }
    let formulas = match (&a.pattern, &a.input) {
        (Some(p), _) => {
            let family: Pattern = p.parse().map_err(Failure::Usage)?;
            let n = a.n.unwrap_or(1);
            if n == 0 {
                return Err(Failure::Usage("--n starts at 1".into()));
            }
            gen_patterns(family, n)
        }
        (None, Some(path)) => read_file_formulas(path)?,
        (None, None) => unreachable!("clap requires a source"),
    };
    let rows = bench::bench(&formulas, &settings);
    let mut buf = Vec::new();
    bench::write_csv(&rows, &mut buf).map_err(|e| Failure::Usage(e.to_string()))?;
    write_out(&a.out, &String::from_utf8(buf).expect("csv output is utf-8"))
}

fn cmd_emit(a: &EmitArgs) -> Result<(), Failure> {
    let usage = |e: &dyn std::fmt::Display| Failure::Usage(e.to_string());
    if !matches!(a.encoding, EmitEncoding::Mso) && a.mso.given() {
        return Err(Failure::Usage("--norm, --constraint and --vars need --encoding mso".into()));
    }
    let text = match a.encoding {
        EmitEncoding::Fol => mona::emit_fol(&parse_ltlf(&a.formula).map_err(|e| usage(&e))?),
        EmitEncoding::FolPast => mona::emit_fol_past(&parse_pltlf(&a.formula).map_err(|e| usage(&e))?),
        EmitEncoding::Mso => mona::emit_mso(&parse_ltlf(&a.formula).map_err(|e| usage(&e))?, a.mso.config()?),
    }
    .map_err(|e| usage(&e))?;
    write_out(&a.out, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Translate(a) => cmd_translate(a),
        Command::Check(a) => cmd_check(a),
        Command::Bench(a) => cmd_bench(a),
        Command::EmitMona(a) => cmd_emit(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
