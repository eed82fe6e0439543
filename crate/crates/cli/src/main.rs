//! `dagproof`: prove, translate, compress and check implicational proofs,
//! encode Hamiltonicity, compare against semantic oracles, and benchmark.

mod commands;
mod input;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dagproof::compress::DEFAULT_THREAD_CAP;
use dagproof::encode::MAX_WORLDS;

use input::{input_error, Failure, Outcome};
use pipeline::Limits;

#[derive(Debug, Parser)]
#[command(name = "dagproof", version, about = "Implicational proofs: search, translation, dag-like compression")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// World bound for Kripke countermodel search.
    #[arg(long, global = true, default_value_t = 5)]
    max_worlds: usize,
    /// Cap on enumerated maximal threads during compression.
    #[arg(long, global = true, default_value_t = DEFAULT_THREAD_CAP)]
    thread_cap: usize,
    /// Seed for generated corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Proof search budget per formula, in seconds.
    #[arg(long, global = true)]
    timeout: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a sequent proof of a purely implicational formula.
    Prove {
        /// Formula text, or `-` for standard input.
        formula: String,
        /// On failure, print a Kripke countermodel if one exists within the
        /// world bound.
        #[arg(long)]
        countermodel: bool,
    },
    /// Verify a proof document, sequent proof or compression trace.
    Check {
        /// Document path, or `-` for standard input.
        file: String,
    },
    /// Run the compression pipeline on a formula or a tree-like proof.
    Compress {
        /// Formula text, document path, or `-`. With `--batch`, a JSON lines
        /// file of formulas.
        input: String,
        /// Also write one file per pipeline stage.
        #[arg(long, value_enum)]
        emit: Option<Emit>,
        /// Directory for `--emit` files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Treat the input as JSON lines, one formula per line.
        #[arg(long)]
        batch: bool,
        /// Write the batch CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Add per-stage durations to the batch CSV.
        #[arg(long)]
        timings: bool,
    },
    /// Encode Hamiltonian paths of a digraph as a formula.
    Encode {
        /// Graph file (`n` then `u v` lines, or JSON), or `-`.
        graph: String,
        /// Emit the negation `α -> false`.
        #[arg(long)]
        negate: bool,
        /// Apply the implicational translation to the result.
        #[arg(long)]
        translate: bool,
        /// Also print the brute-force Hamiltonicity verdict.
        #[arg(long)]
        oracle: bool,
    },
    /// Translate a full-language formula into a purely implicational one.
    Translate {
        /// Formula text, or `-` for standard input.
        formula: String,
    },
    /// Compare the prover with bounded Kripke search on one formula.
    Oracle {
        /// Formula text, or `-` for standard input.
        formula: String,
    },
    /// Run a generated corpus through the pipeline and print CSV.
    Bench {
        #[arg(value_enum)]
        generator: Generator,
        /// Number of formulas (random-imp).
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Weight bound for generated formulas.
        #[arg(long)]
        max_weight: Option<usize>,
        /// Number of variables for generated formulas.
        #[arg(long)]
        vars: Option<usize>,
        /// Vertex count (all-graphs).
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Add per-stage durations; output is then no longer reproducible.
        #[arg(long)]
        timings: bool,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Generator {
    RandomImp,
    AllGraphs,
    ExhaustiveImp,
}

fn limits(g: &Global) -> Outcome<Limits> {
    if g.max_worlds > MAX_WORLDS {
        return Err(input_error(format!("--max-worlds is limited to {MAX_WORLDS}")));
    }
    let timeout = match g.timeout {
        Some(t) if !(t.is_finite() && t > 0.0) => return Err(input_error("--timeout must be positive")),
        t => t.map(Duration::from_secs_f64),
    };
    Ok(Limits { thread_cap: g.thread_cap, timeout, max_worlds: g.max_worlds })
}

fn run(cli: Cli) -> Outcome {
    let limits = limits(&cli.global)?;
    let format = cli.global.format;
    match cli.command {
        Command::Prove { formula, countermodel } => commands::prove(&formula, countermodel, format, &limits),
        Command::Check { file } => commands::check(&file, format),
        Command::Compress { input, emit, out_dir, batch, csv, timings } => {
            if batch {
                commands::compress_batch(&input, csv.as_deref(), timings, &limits)
            } else {
                let out_dir = emit.map(|Emit::Dot| out_dir);
                commands::compress(&input, out_dir.as_deref(), format, &limits)
            }
        }
        Command::Encode { graph, negate, translate, oracle } => {
            commands::encode(&graph, negate, translate, oracle, format)
        }
        Command::Translate { formula } => commands::translate(&formula, format),
        Command::Oracle { formula } => commands::oracle(&formula, format, &limits),
        Command::Bench { generator, count, max_weight, vars, n, timings, csv } => {
            let corpus = match generator {
                Generator::RandomImp => commands::Corpus::RandomImp {
                    count,
                    max_weight: max_weight.unwrap_or(12),
                    vars: vars.unwrap_or(3),
                    seed: cli.global.seed,
                },
                Generator::ExhaustiveImp => commands::Corpus::ExhaustiveImp {
                    max_weight: max_weight.unwrap_or(7),
                    vars: vars.unwrap_or(2),
                },
                Generator::AllGraphs => commands::Corpus::AllGraphs { n },
            };
            commands::bench(corpus, timings, csv.as_deref(), &limits)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Proofs are processed recursively and can be several thousand levels
    // deep.
    let worker = std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(move || run(cli))
        .expect("spawning the worker thread");
    match worker.join() {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(failure)) => {
            match &failure {
                Failure::Negative(m) => eprintln!("{m}"),
                other => eprintln!("error: {other}"),
            }
            failure.code()
        }
        Err(_) => ExitCode::from(101),
    }
}
