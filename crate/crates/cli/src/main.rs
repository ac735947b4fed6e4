//! `cmp-sced`: run, compare, tune and certify zone-penalized dispatch.
//!
//! Exit status is 0 on success, 2 for bad input (missing or malformed case
//! files, invalid flags, oracle budget) and 1 when a solve fails.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sced_core::dca::{DcaConfig, LmpSource};
use sced_core::rolling::Mode;

#[derive(Parser)]
#[command(name = "cmp-sced", version, about = "Security-constrained economic dispatch with emergency line ratings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one model over the case horizon and write periods.csv and lmp.csv.
    Run(RunArgs),
    /// Run both models on each case and tabulate cost, shed and zone counts.
    Compare(CompareArgs),
    /// Sweep (ε, γℓ, γs) and rank the cells by total cost.
    GridSearch(GridArgs),
    /// Certify DCA periods against exhaustive zone enumeration.
    Oracle(OracleArgs),
    /// Write a built-in or random case file.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct CaseArgs {
    /// Case file.
    #[arg(long)]
    case: PathBuf,
    /// Multiplies every demand series.
    #[arg(long, default_value_t = 1.0)]
    load_scale: f64,
    /// Overrides the period length in hours.
    #[arg(long)]
    dt: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LmpArg {
    FinalSubproblem,
    Resolve,
}

#[derive(Args)]
struct DcaArgs {
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma_l: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma_s: f64,
    #[command(flatten)]
    iteration: IterationArgs,
}

#[derive(Args)]
struct IterationArgs {
    /// Proximal weight on flow changes between DCA iterates.
    #[arg(long, default_value_t = 1e-3)]
    prox: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_obj: f64,
    /// Flow-change tolerance in MW.
    #[arg(long, default_value_t = 1e-4)]
    tol_x: f64,
    #[arg(long, default_value_t = 50)]
    max_iters: usize,
    #[arg(long, value_enum, default_value_t = LmpArg::FinalSubproblem)]
    lmp_source: LmpArg,
}

impl DcaArgs {
    fn config(&self) -> DcaConfig {
        DcaConfig {
            epsilon: self.epsilon,
            gamma_l: self.gamma_l,
            gamma_s: self.gamma_s,
            ..self.iteration.config()
        }
    }
}

impl IterationArgs {
    fn config(&self) -> DcaConfig {
        DcaConfig {
            prox_c: self.prox,
            tol_obj: self.tol_obj,
            tol_x: self.tol_x,
            max_iters: self.max_iters,
            lmp_source: match self.lmp_source {
                LmpArg::FinalSubproblem => LmpSource::FinalSubproblem,
                LmpArg::Resolve => LmpSource::Resolve,
            },
            ..DcaConfig::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Cmp,
    Strict,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Cmp => Mode::Cmp,
            ModeArg::Strict => Mode::Strict,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    case: CaseArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Cmp)]
    mode: ModeArg,
    #[command(flatten)]
    dca: DcaArgs,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// Case files, one scenario each.
    #[arg(long = "case", required = true)]
    cases: Vec<PathBuf>,
    /// Demand multipliers; every case runs once per value.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    load_scale: Vec<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[command(flatten)]
    dca: DcaArgs,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for scenarios (default: logical cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    case: CaseArgs,
    /// ε values (default 1e-4,1e-3,1e-2,1e-1,1).
    #[arg(long, value_delimiter = ',')]
    epsilons: Vec<f64>,
    /// γℓ values (default 0.1 to 1.0 by 0.1).
    #[arg(long, value_delimiter = ',')]
    gammas_l: Vec<f64>,
    /// γs values (default 0.1 to 1.0 by 0.1).
    #[arg(long, value_delimiter = ',')]
    gammas_s: Vec<f64>,
    #[command(flatten)]
    iteration: IterationArgs,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for grid cells (default: logical cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    case: CaseArgs,
    #[command(flatten)]
    dca: DcaArgs,
    /// Certify only this period (default: every period).
    #[arg(long)]
    period: Option<usize>,
    /// Also write oracle.csv here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the enumeration (default: logical cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    TwoBus,
    OneBus,
    Random,
    RtsLike,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Case file to write; series go next to it.
    #[arg(long)]
    out: PathBuf,
    /// Demand per period for the fixed networks.
    #[arg(long, value_delimiter = ',', default_value = "80")]
    demand: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Horizon for random networks.
    #[arg(long)]
    horizon: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CMP_SCED_LOG", "warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => commands::run(a),
        Command::Compare(a) => commands::compare(a),
        Command::GridSearch(a) => commands::grid(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Generate(a) => commands::generate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", commands::describe(&e));
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
