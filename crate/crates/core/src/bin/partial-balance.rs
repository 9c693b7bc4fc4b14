use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use partial_balance::balance::BalanceMode;
use partial_balance::census::census;
use partial_balance::cli::{self, Analysis, Emit, RunConfig};
use partial_balance::graph::{
    write_dump, AggregateRule, ComponentRule, InputFormat, PreprocessConfig,
};
use partial_balance::oracle;
use partial_balance::Error;

#[derive(Parser)]
#[command(
    name = "partial-balance",
    version,
    about = "Partial balance analysis of signed directed networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selected analyses and write reports plus a manifest.
    Analyze(AnalyzeArgs),
    /// Triad census as CSV.
    Census(CensusArgs),
    /// Directed against undirected balance, side by side.
    Compare(CompareArgs),
    /// Cross-check the fast path against brute force.
    #[command(hide = true)]
    OracleCheck(OracleArgs),
    /// Write a seeded random signed digraph as a TSV sign list.
    GenRandom(GenArgs),
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::TsvSign)]
    format: InputFormat,
    /// Aggregated weights above this are positive, below negative, equal dropped.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    threshold: f64,
    #[arg(long, value_enum, default_value_t = AggregateRule::SumThenSign)]
    aggregate: AggregateRule,
    #[arg(long)]
    no_prune_pendants: bool,
    #[arg(long, value_enum, default_value_t = ComponentRule::Giant)]
    component: ComponentRule,
}

impl InputArgs {
    fn preprocess(&self) -> PreprocessConfig {
        PreprocessConfig {
            sign_threshold: self.threshold,
            aggregate_rule: self.aggregate,
            prune_pendants: !self.no_prune_pendants,
            keep_component: self.component,
        }
    }

    fn run_config(&self, out: PathBuf, emit: &[Emit], mode: BalanceMode) -> RunConfig {
        let mut cfg = RunConfig::new(&self.input, self.format, out);
        cfg.preprocess = self.preprocess();
        cfg.emit = emit.iter().copied().collect();
        cfg.balance_mode = mode;
        cfg
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "balance")]
    analyses: Vec<Analysis>,
    #[arg(long, value_enum, default_value_t = BalanceMode::TypeMean)]
    balance_mode: BalanceMode,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "json,csv")]
    emit: Vec<Emit>,
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output directory; without it the CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "json,csv")]
    emit: Vec<Emit>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = BalanceMode::TypeMean)]
    balance_mode: BalanceMode,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "json,csv")]
    emit: Vec<Emit>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, conflicts_with = "nodes")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::TsvSign)]
    format: InputFormat,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long, default_value_t = 0.3)]
    edge_prob: f64,
    #[arg(long, default_value_t = 0.3)]
    neg_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    edge_prob: f64,
    #[arg(long, default_value_t = 0.0)]
    neg_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::MissingInput(_) => 2,
        Error::NoTransitiveTriads => 3,
        _ => 1,
    }
}

fn configure_threads() -> Result<(), Error> {
    if let Ok(raw) = std::env::var("BALANCE_THREADS") {
        let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "BALANCE_THREADS must be a positive integer, got `{raw}`"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    Ok(())
}

fn report_files(outcome: &cli::RunOutcome, cfg: &RunConfig) {
    for (name, _) in &outcome.files {
        eprintln!("wrote {}", cfg.out_dir.join(name).display());
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Analyze(args) => {
            let mut cfg = args
                .input
                .run_config(args.out, &args.emit, args.balance_mode);
            cfg.analyses = args.analyses.into_iter().collect::<BTreeSet<_>>();
            let outcome = cli::run(&cfg)?;
            report_files(&outcome, &cfg);
        }
        Command::Census(args) => match args.out {
            Some(out) => {
                let mut cfg = args
                    .input
                    .run_config(out, &args.emit, BalanceMode::TypeMean);
                cfg.analyses = BTreeSet::from([Analysis::Census]);
                let outcome = cli::run(&cfg)?;
                report_files(&outcome, &cfg);
            }
            None => {
                let prepared = cli::prepare(
                    &args.input.input,
                    args.input.format,
                    &args.input.preprocess(),
                )?;
                std::io::stdout().write_all(census(&prepared.graph).to_csv().as_bytes())?;
            }
        },
        Command::Compare(args) => {
            let cfg = args
                .input
                .run_config(args.out, &args.emit, args.balance_mode);
            let outcome = cli::compare(&cfg)?;
            if let Some(report) = &outcome.comparison {
                print!("{}", report.to_csv());
                println!("{}", report.verdict);
            }
            report_files(&outcome, &cfg);
        }
        Command::OracleCheck(args) => {
            let graph = match (&args.input, args.nodes) {
                (Some(path), _) => {
                    cli::prepare(path, args.format, &PreprocessConfig::default())?.graph
                }
                (None, Some(n)) => {
                    oracle::random_signed_digraph(n, args.edge_prob, args.neg_prob, args.seed)?
                }
                (None, None) => {
                    return Err(Error::InvalidArgument("give --input or --nodes".into()))
                }
            };
            let mismatches = oracle::check(&graph)?;
            if mismatches.is_empty() {
                println!(
                    "ok: {} nodes, {} edges, no mismatches",
                    graph.node_count(),
                    graph.edge_count()
                );
            } else {
                for m in &mismatches {
                    println!("mismatch: {m}");
                }
                return Err(Error::InvalidGraph(format!(
                    "{} oracle mismatches",
                    mismatches.len()
                )));
            }
        }
        Command::GenRandom(args) => {
            let graph = oracle::random_signed_digraph(
                args.nodes,
                args.edge_prob,
                args.neg_prob,
                args.seed,
            )?;
            match args.out {
                Some(path) => write_dump(
                    &graph,
                    std::io::BufWriter::new(std::fs::File::create(path)?),
                )?,
                None => write_dump(&graph, std::io::stdout().lock())?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| execute(cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                Error::NoTransitiveTriads => {
                    eprintln!("error: {err}; balance needs at least one triad of type 030T, 120D, 120U or 300")
                }
                _ => eprintln!("error: {err}"),
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
