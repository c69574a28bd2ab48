use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lexsim::cli::config::{parse_key_values, resolve, Command, ConfigSources, SEED_ENV};
use lexsim::cli::{self, output, AGGREGATE_FILE, MANIFEST_FILE};
use lexsim::experiment::Detail;

#[derive(Parser)]
#[command(
    name = "lexsim",
    version,
    about = "Tutor feedback in lexicon acquisition: run, sweep and replay experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a single condition.
    Run(RunArgs),
    /// Run the Cartesian product of f values, algorithms and strategies.
    /// Axes left unset default to f in {0, 0.25, 0.5, 0.75, 1} and all four algorithms.
    Sweep(RunArgs),
    /// Re-run a manifest and check the outputs are byte-identical.
    Replay {
        /// Path to a manifest file, or the run directory holding one.
        manifest: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// knn, pe, ap or cwp (comma list for sweep).
    #[arg(long)]
    algorithm: Option<String>,
    /// Pointing frequency in [0, 1] (comma list for sweep).
    #[arg(long)]
    f: Option<String>,
    /// discriminative or descriptive (comma list for sweep).
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    world_size: Option<String>,
    #[arg(long)]
    context_size: Option<String>,
    #[arg(long)]
    lexicon_size: Option<String>,
    #[arg(long)]
    dims: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    k: Option<String>,
    /// Training interactions per repetition.
    #[arg(long)]
    train: Option<String>,
    /// Test interactions per checkpoint.
    #[arg(long)]
    tests: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    /// Master seed; falls back to LEXSIM_SEED.
    #[arg(long)]
    seed: Option<String>,
    /// Comma list of training counts at which to measure.
    #[arg(long)]
    checkpoints: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "lexsim-out")]
    out: PathBuf,
    /// Also write a per-interaction trace.csv.
    #[arg(long)]
    trace: bool,
    /// Also write tutor lexicons and end-of-run learner state.
    #[arg(long)]
    dump: bool,
    /// Worker threads (default: available processors).
    #[arg(long)]
    jobs: Option<usize>,
}

impl RunArgs {
    fn flag_pairs(&self) -> Vec<(String, String)> {
        [
            ("algorithm", &self.algorithm),
            ("f", &self.f),
            ("strategy", &self.strategy),
            ("world_size", &self.world_size),
            ("context_size", &self.context_size),
            ("lexicon_size", &self.lexicon_size),
            ("dims", &self.dims),
            ("alpha", &self.alpha),
            ("k", &self.k),
            ("training_interactions", &self.train),
            ("test_interactions", &self.tests),
            ("repetitions", &self.reps),
            ("seed", &self.seed),
            ("checkpoints", &self.checkpoints),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
        .collect()
    }
}

fn run(command: Command, args: RunArgs) -> lexsim::Result<()> {
    let file = match &args.config {
        Some(path) => parse_key_values(&std::fs::read_to_string(path)?)?,
        None => Vec::new(),
    };
    let sources = ConfigSources {
        file,
        flags: args.flag_pairs(),
        env_seed: std::env::var(SEED_ENV).ok(),
    };
    let plan = resolve(command, &sources)?;
    let detail = Detail {
        trace: args.trace,
        state: args.dump,
    };
    let manifest = cli::execute(&plan, &args.out, detail, args.jobs)?;
    print_summary(&args.out)?;
    eprintln!(
        "wrote {} and {} output file(s) to {}",
        MANIFEST_FILE,
        manifest.outputs.len(),
        args.out.display()
    );
    Ok(())
}

fn print_summary(dir: &Path) -> lexsim::Result<()> {
    let rows = output::read_aggregate(&std::fs::read(dir.join(AGGREGATE_FILE))?)?;
    println!(
        "{:<5} {:>5} {:<15} {:>10} {:>8} {:>8}",
        "alg", "f", "strategy", "checkpoint", "mean", "std"
    );
    for row in rows {
        println!(
            "{:<5} {:>5} {:<15} {:>10} {:>8.3} {:>8.3}",
            row.key.algorithm.to_string(),
            row.key.f,
            row.key.strategy.to_string(),
            row.checkpoint,
            row.mean,
            row.std
        );
    }
    Ok(())
}

fn replay(path: PathBuf, jobs: Option<usize>) -> lexsim::Result<bool> {
    let path = if path.is_dir() {
        path.join(MANIFEST_FILE)
    } else {
        path
    };
    let report = cli::replay(&path, jobs)?;
    for check in &report.checks {
        println!(
            "{} {}",
            if check.identical { "PASS" } else { "FAIL" },
            check.file.display()
        );
    }
    let passed = report.passed();
    println!("replay {}", if passed { "PASS" } else { "FAIL" });
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Cmd::Run(args) => run(Command::Run, args).map(|_| true),
        Cmd::Sweep(args) => run(Command::Sweep, args).map(|_| true),
        Cmd::Replay { manifest, jobs } => replay(manifest, jobs),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
