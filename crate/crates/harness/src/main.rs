use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use parsubmod::{Execution, SearchMode};
use parsubmod_harness::config::{Algorithm, ExperimentConfig, Problem};
use parsubmod_harness::data::{generate, write_dataset, DatasetKind};
use parsubmod_harness::verify::all_suites;
use parsubmod_harness::{run_experiment, to_csv_string, write_csv, HarnessError, Result};

#[derive(Parser)]
#[command(
    name = "parsubmod",
    version,
    about = "Low-adaptivity submodular maximization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run algorithms over a budget or cap sweep and write per-run metrics.
    Solve(Box<SolveArgs>),
    /// Write a seeded synthetic dataset.
    Gen {
        #[arg(long, value_enum)]
        kind: DatasetKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the objective and constraint property suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct SolveArgs {
    /// TOML experiment file; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    problem: Option<Problem>,
    /// One or more algorithms, comma-separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    algorithm: Vec<Algorithm>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, conflicts_with = "p")]
    alpha: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    /// Knapsack budgets, comma-separated and increasing.
    #[arg(long, value_delimiter = ',', conflicts_with = "m")]
    budget: Vec<f64>,
    /// Independence-system caps, comma-separated and increasing.
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    search: Option<SearchArg>,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory with instance files; without it an instance is generated.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Size of a generated instance.
    #[arg(long)]
    n: Option<usize>,
    /// Products of the revenue system instance.
    #[arg(long)]
    products: Option<usize>,
    /// Per-node, per-category or per-genre cap.
    #[arg(long)]
    q: Option<usize>,
    /// Give every element cost 1.
    #[arg(long)]
    unit_costs: bool,
    /// Record wall-clock milliseconds instead of 0.
    #[arg(long)]
    timing: bool,
    /// Run everything on the calling thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SearchArg {
    Linear,
    Binary,
}

impl SolveArgs {
    fn into_config(self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::from_toml_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.problem {
            c.problem = v;
        }
        if !self.algorithm.is_empty() {
            c.algorithms = self.algorithm;
        }
        if self.epsilon.is_some() {
            c.epsilon = self.epsilon;
        }
        if let Some(v) = self.alpha {
            c.alpha = v;
        }
        if self.p.is_some() {
            c.p = self.p;
        }
        if !self.budget.is_empty() {
            c.budgets = self.budget;
            c.caps.clear();
        }
        if !self.m.is_empty() {
            c.caps = self.m;
            c.budgets.clear();
        }
        if let Some(v) = self.repeats {
            c.repeats = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.search {
            c.search = match v {
                SearchArg::Linear => SearchMode::Linear,
                SearchArg::Binary => SearchMode::Binary,
            };
        }
        if self.out.is_some() {
            c.out = self.out;
        }
        if self.data.is_some() {
            c.data = self.data;
        }
        if let Some(v) = self.n {
            c.n = v;
        }
        if let Some(v) = self.products {
            c.products = v;
        }
        if self.q.is_some() {
            c.q = self.q;
        }
        c.unit_costs |= self.unit_costs;
        c.timing |= self.timing;
        if self.sequential {
            c.execution = Execution::Sequential;
        }
        c.validate()?;
        Ok(c)
    }
}

fn solve(args: SolveArgs) -> Result<()> {
    let config = args.into_config()?;
    let rows = run_experiment(&config)?;
    match &config.out {
        Some(path) => {
            write_csv(&rows, path)?;
            log::info!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(to_csv_string(&rows).as_bytes())
                .map_err(|e| HarnessError::Input(format!("stdout: {e}")))?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(args) => solve(*args),
        Command::Gen { kind, n, seed, out } => {
            let data = generate(kind, n, seed)?;
            for path in write_dataset(&data, &out)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Verify { seed } => {
            let checks = all_suites(seed);
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                println!("{tag} {} ({})", c.name, c.detail);
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(HarnessError::Assertion(format!(
                    "{failed} of {} checks failed",
                    checks.len()
                )));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
