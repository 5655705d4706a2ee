//! `ahnep`: run, transform and inspect accepting hybrid networks of
//! evolutionary processors.
//!
//! Exit codes: 0 accepted / equivalent / satisfiable, 1 rejected /
//! disagreement / unsatisfiable, 2 resource limit hit, 3 usage error,
//! 4 file I/O error, 5 malformed input, 6 operation not applicable.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ahnep_core::engine::{HaltingMode, RunLimits, RunOutcome, Simulator};
use ahnep_core::formats::{parse_network, serialize_network, serialize_trace, TraceFormat, FORMAT_VERSION};
use ahnep_core::model::{AhnepNetwork, Word};
use ahnep_core::sat::{brute_force_sat, build_sat_network, parse_dimacs, solve_detailed, SatError};
use ahnep_core::topology::{classify, max_degree, Family};
use ahnep_core::transform::{check_equivalence, enumerate_words, prune_to_degree3, to_grid, to_star};
use anyhow::{anyhow, Context};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

const USAGE: u8 = 3;
const IO: u8 = 4;
const MALFORMED: u8 = 5;
const NOT_APPLICABLE: u8 = 6;

struct Failure {
    code: u8,
    error: anyhow::Error,
}

trait Code<T> {
    fn code(self, code: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Code<T> for Result<T, E> {
    fn code(self, code: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            code,
            error: e.into(),
        })
    }
}

#[derive(Parser)]
#[command(
    name = "ahnep",
    about = "Simulator for accepting hybrid networks of evolutionary processors"
)]
struct Cli {
    /// Worker threads for the engine (default: one per hardware thread).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a network on one input word.
    Run {
        network: PathBuf,
        /// Comma-separated symbols; `.` is the empty word.
        word: String,
        #[command(flatten)]
        limits: LimitArgs,
        /// Write the full computation to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TraceKind::Text)]
        trace_format: TraceKind,
    },
    /// Rewrite a complete-with-loops network into another topology.
    Transform {
        #[arg(value_enum)]
        target: Target,
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compare the verdicts of two networks on a word list.
    CheckEquiv(CheckEquivArgs),
    /// Graph inspection.
    Topology {
        #[command(subcommand)]
        action: TopologyAction,
    },
    /// Satisfiability of 3CNF formulas.
    Sat {
        #[command(subcommand)]
        action: SatAction,
    },
}

#[derive(Subcommand)]
enum TopologyAction {
    /// Report the graph family, size and maximum degree.
    Check { network: PathBuf },
}

#[derive(Subcommand)]
enum SatAction {
    /// Decide a DIMACS formula with the compiled network.
    Solve {
        dimacs: PathBuf,
        /// Answer with the brute-force oracle instead of the network.
        #[arg(long)]
        oracle: bool,
        /// Write the compiled network to this file.
        #[arg(long)]
        emit_network: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("wordset").required(true).args(["words", "enumerate"]))]
struct CheckEquivArgs {
    first: PathBuf,
    second: PathBuf,
    /// File with one word per line (`#` starts a comment).
    #[arg(long)]
    words: Option<PathBuf>,
    /// Test every input word up to this length.
    #[arg(long, value_name = "MAXLEN")]
    enumerate: Option<usize>,
    #[command(flatten)]
    limits: LimitArgs,
    /// Write every per-word verdict to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, default_value_t = 10_000)]
    max_steps: usize,
    #[arg(long, default_value_t = 256)]
    max_word_len: usize,
    #[arg(long, default_value_t = 100_000)]
    max_words: usize,
    #[arg(long, value_enum, default_value_t = Halting::Paper)]
    halting: Halting,
}

impl LimitArgs {
    fn limits(&self) -> RunLimits {
        RunLimits::default()
            .with_max_steps(self.max_steps)
            .with_max_word_len(self.max_word_len)
            .with_max_words_per_node(self.max_words)
            .with_halting(match self.halting {
                Halting::Paper => HaltingMode::PaperRule,
                Halting::Cycle => HaltingMode::CycleDetect,
            })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Halting {
    Paper,
    Cycle,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceKind {
    Text,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Star,
    Grid,
    Degree3,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .code(IO)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .code(IO)
}

fn load(path: &Path) -> Result<AhnepNetwork, Failure> {
    let text = read(path)?;
    parse_network(&text)
        .with_context(|| format!("in {}", path.display()))
        .code(MALFORMED)
}

fn parse_word(text: &str) -> Result<Word, Failure> {
    Word::parse(text.trim())
        .with_context(|| format!("bad word `{text}`"))
        .code(MALFORMED)
}

fn verdict_code(outcome: &RunOutcome) -> u8 {
    match outcome {
        RunOutcome::Accepted { .. } => 0,
        RunOutcome::Rejected { .. } => 1,
        RunOutcome::LimitExceeded { .. } => 2,
    }
}

fn cmd_run(
    network: &Path,
    word: &str,
    limits: &LimitArgs,
    trace: Option<&Path>,
    format: TraceKind,
) -> Result<u8, Failure> {
    let net = load(network)?;
    let word = parse_word(word)?;
    let sim = Simulator::new(&net).code(MALFORMED)?;
    let (outcome, recorded) = sim
        .run(&word, &limits.limits(), trace.is_some())
        .code(MALFORMED)?;
    if let (Some(path), Some(recorded)) = (trace, recorded) {
        let format = match format {
            TraceKind::Text => TraceFormat::Text,
            TraceKind::Jsonl => TraceFormat::JsonLines,
        };
        write(path, &serialize_trace(&recorded, format))?;
    }
    println!("{outcome}");
    Ok(verdict_code(&outcome))
}

fn cmd_transform(target: Target, input: &Path, output: &Path) -> Result<u8, Failure> {
    let net = load(input)?;
    let result = match target {
        Target::Star => to_star(&net),
        Target::Grid => to_grid(&net),
        Target::Degree3 => prune_to_degree3(&net),
    }
    .code(NOT_APPLICABLE)?;
    write(output, &serialize_network(&result))?;
    println!(
        "wrote {}: {} nodes, {} edges",
        output.display(),
        result.size(),
        result.graph.edge_count()
    );
    Ok(0)
}

fn read_words(path: &Path) -> Result<Vec<Word>, Failure> {
    read(path)?
        .lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(parse_word)
        .collect()
}

fn cmd_check_equiv(args: &CheckEquivArgs) -> Result<u8, Failure> {
    let a = load(&args.first)?;
    let b = load(&args.second)?;
    let words = match (&args.words, args.enumerate) {
        (Some(path), _) => read_words(path)?,
        (None, Some(len)) => enumerate_words(&a.input_alphabet, len),
        (None, None) => unreachable!("clap requires one of the two"),
    };
    let report = check_equivalence(&a, &b, &words, &args.limits.limits()).code(NOT_APPLICABLE)?;
    print!("{}", report.render().lines().next().unwrap_or_default());
    println!();
    for (w, ra, rb) in &report.disagreements {
        println!("disagree on {w}: {ra} | {rb}");
    }
    if !report.inconclusive.is_empty() {
        let shown: Vec<String> = report.inconclusive.iter().take(10).map(Word::to_string).collect();
        let more = report.inconclusive.len().saturating_sub(shown.len());
        let tail = if more > 0 {
            format!(" and {more} more")
        } else {
            String::new()
        };
        println!("inconclusive: {}{tail}", shown.join(" "));
    }
    if let Some(path) = &args.report {
        write(path, &report.render())?;
    }
    Ok(if report.is_equivalent() { 0 } else { 1 })
}

fn describe(family: &Family) -> String {
    match family {
        Family::Star { .. } => "star".into(),
        Family::Ring { .. } => "ring".into(),
        Family::Grid { rows, cols } => format!("grid {rows}×{cols}"),
        Family::CompleteWithLoops => "complete with loops".into(),
    }
}

fn cmd_topology_check(path: &Path) -> Result<u8, Failure> {
    let net = load(path)?;
    let families = classify(&net.graph);
    let name = if families.is_empty() {
        "no named family".to_string()
    } else {
        families.iter().map(describe).collect::<Vec<_>>().join(" / ")
    };
    println!(
        "{name}, {} nodes, max degree {}",
        net.size(),
        max_degree(&net.graph)
    );
    Ok(0)
}

fn cmd_sat(dimacs: &Path, oracle: bool, emit: Option<&Path>, limits: &LimitArgs) -> Result<u8, Failure> {
    let formula = parse_dimacs(&read(dimacs)?)
        .with_context(|| format!("in {}", dimacs.display()))
        .code(MALFORMED)?;
    if let Some(path) = emit {
        let (net, _) = build_sat_network(&formula).code(MALFORMED)?;
        write(path, &serialize_network(&net))?;
    }
    let verdict = if oracle {
        let sat = brute_force_sat(&formula).code(NOT_APPLICABLE)?;
        println!(
            "{} (brute force)",
            if sat { "satisfiable" } else { "unsatisfiable" }
        );
        sat
    } else {
        match solve_detailed(&formula, &limits.limits()) {
            Ok(run) => {
                let word = if run.satisfiable {
                    "satisfiable"
                } else {
                    "unsatisfiable"
                };
                println!("{word} ({} steps)", run.steps);
                run.satisfiable
            }
            Err(SatError::LimitExceeded(outcome)) => {
                println!("{outcome}");
                return Ok(2);
            }
            Err(e) => return Err(e).code(MALFORMED),
        }
    };
    Ok(if verdict { 0 } else { 1 })
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(anyhow!("--threads must be at least 1")).code(USAGE);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .code(USAGE)?;
    }
    match &cli.command {
        Command::Run {
            network,
            word,
            limits,
            trace,
            trace_format,
        } => cmd_run(network, word, limits, trace.as_deref(), *trace_format),
        Command::Transform {
            target,
            input,
            output,
        } => cmd_transform(*target, input, output),
        Command::CheckEquiv(args) => cmd_check_equiv(args),
        Command::Topology {
            action: TopologyAction::Check { network },
        } => cmd_topology_check(network),
        Command::Sat {
            action:
                SatAction::Solve {
                    dimacs,
                    oracle,
                    emit_network,
                    limits,
                },
        } => cmd_sat(dimacs, *oracle, emit_network.as_deref(), limits),
    }
}

fn main() -> ExitCode {
    let version = format!("{} (network format {FORMAT_VERSION})", env!("CARGO_PKG_VERSION"));
    let matches = match Cli::command().version(version).try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(USAGE);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
