//! Command-line driver: reads an LTL specification and a signal partition,
//! decides realizability and prints an AIGER circuit.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use synthkit::aiger::print_aag;
use synthkit::automaton::parse_hoa;
use synthkit::ltl::{parse_ltl, SignalPartition};
use synthkit::pipeline::{synthesize, synthesize_automaton, Algo, PipelineConfig, PipelineError, Simplify, Verdict};

const EXIT_REALIZABLE: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_UNREALIZABLE: u8 = 20;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoArg {
    Ds,
    Sd,
    Lar,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum YesNo {
    Yes,
    No,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SimplifyArg {
    None,
    Signatures,
    Sat,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AigerArg {
    /// Unspecified outputs are 0.
    Default,
    /// Unspecified outputs are 1.
    Dontcare1,
}

#[derive(Parser, Debug)]
#[command(name = "synthkit", version, about = "Reactive synthesis from LTL to AIGER circuits")]
struct Cli {
    /// LTL formula.
    #[arg(short = 'f', long, conflicts_with_all = ["file", "hoa_input"])]
    formula: Option<String>,
    /// File containing the LTL formula.
    #[arg(short = 'F', long, conflicts_with = "hoa_input")]
    file: Option<PathBuf>,
    /// Deterministic automaton in HOA format giving the specification.
    #[arg(long)]
    hoa_input: Option<PathBuf>,
    /// Input signals, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "")]
    ins: Vec<String>,
    /// Output signals, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "")]
    outs: Vec<String>,
    #[arg(long, value_enum, default_value = "ds")]
    algo: AlgoArg,
    /// Only decide realizability.
    #[arg(long)]
    realizability: bool,
    #[arg(long, value_enum, default_value = "yes")]
    decompose: YesNo,
    #[arg(long, value_enum, default_value = "yes")]
    bypass: YesNo,
    #[arg(long, value_enum, default_value = "signatures")]
    simplify: SimplifyArg,
    /// Check the circuit against the specification before printing it.
    #[arg(long)]
    verify: bool,
    /// Circuit output mode.
    #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "default")]
    aiger: Option<AigerArg>,
    /// Write the solved arenas to this file.
    #[arg(long)]
    debug_arena: Option<PathBuf>,
    /// External DIMACS SAT solver command used by --simplify=sat.
    #[arg(long)]
    sat_solver: Option<String>,
    /// Threads for independent components.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_REALIZABLE };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("synthkit: {msg}");
            ExitCode::from(code)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn signals(v: &[String]) -> Vec<String> {
    v.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn run(cli: &Cli) -> Result<u8, (u8, String)> {
    let usage = |m: String| (EXIT_USAGE, m);
    let p = SignalPartition::new(&signals(&cli.ins), &signals(&cli.outs)).map_err(|e| usage(e.to_string()))?;
    let cfg = PipelineConfig {
        algo: match cli.algo {
            AlgoArg::Ds => Algo::Ds,
            AlgoArg::Sd => Algo::Sd,
            AlgoArg::Lar => Algo::Lar,
        },
        realizability_only: cli.realizability,
        decompose: matches!(cli.decompose, YesNo::Yes),
        bypass: matches!(cli.bypass, YesNo::Yes),
        simplify: match cli.simplify {
            SimplifyArg::None => Simplify::None,
            SimplifyArg::Signatures => Simplify::Signatures,
            SimplifyArg::Sat => Simplify::Sat,
            SimplifyArg::Both => Simplify::Both,
        },
        verify: cli.verify,
        dontcare: matches!(cli.aiger, Some(AigerArg::Dontcare1)),
        workers: cli.workers,
        sat_solver: cli.sat_solver.clone(),
        debug_arena: cli.debug_arena.is_some(),
        ..PipelineConfig::default()
    };
    let read = |path: &PathBuf| std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())));
    let result = if let Some(path) = &cli.hoa_input {
        if cfg.algo != Algo::Lar {
            return Err(usage("--hoa-input requires --algo=lar".into()));
        }
        let a = parse_hoa(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        synthesize_automaton(&a, &p, &cfg)
    } else {
        let text = match (&cli.formula, &cli.file) {
            (Some(f), _) => f.clone(),
            (None, Some(path)) => read(path)?,
            (None, None) => return Err(usage("no specification: pass --formula, --file or --hoa-input".into())),
        };
        if cfg.algo == Algo::Lar {
            return Err(usage("--algo=lar requires --hoa-input".into()));
        }
        let f = parse_ltl(text.trim()).map_err(|e| usage(e.to_string()))?;
        synthesize(&f, &p, &cfg)
    };
    let report = result.map_err(|e| match e {
        PipelineError::Budget(_) => (EXIT_BUDGET, e.to_string()),
        PipelineError::Input(_) => (EXIT_USAGE, e.to_string()),
        PipelineError::VerificationFailed => (EXIT_VERIFY, e.to_string()),
        PipelineError::Internal(_) => (EXIT_VERIFY, e.to_string()),
    })?;
    if let Some(path) = &cli.debug_arena {
        std::fs::write(path, report.arena_dumps.concat()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    match report.verdict {
        Verdict::Unrealizable => {
            emit("UNREALIZABLE\n");
            Ok(EXIT_UNREALIZABLE)
        }
        Verdict::Realizable => {
            let circuit = report.circuit.as_ref().map(print_aag).unwrap_or_default();
            emit(&format!("REALIZABLE\n{circuit}"));
            Ok(EXIT_REALIZABLE)
        }
    }
}
