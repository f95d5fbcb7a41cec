use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qpq", version, about = "Simulate and audit SARG04-based quantum private queries")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random stream.
    #[arg(long, global = true, env = "QPQ_SEED")]
    pub seed: Option<u64>,
    /// JSON file with default parameters; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report path [default: qpq-<command>.json].
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads [default: available parallelism].
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Include per-qubit records and print full reports.
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Args, Default)]
pub struct ProtocolArgs {
    /// Database size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of raw substrings per final key.
    #[arg(long)]
    pub k: Option<usize>,
    /// Detection probability per qubit.
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One honest query; prints a transcript summary.
    Run {
        #[command(flatten)]
        protocol: ProtocolArgs,
        /// Database index to retrieve.
        #[arg(long)]
        target: Option<usize>,
        /// File of ASCII 0/1 characters used as the database.
        #[arg(long)]
        db: Option<PathBuf>,
    },
    /// Analytic key statistics for the six worked parameter choices.
    Table1,
    /// Attacks by the user on database security.
    AttackAlice {
        #[arg(long, value_enum)]
        strategy: AliceAttack,
        #[command(flatten)]
        protocol: ProtocolArgs,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Attacks by the database owner on user privacy.
    AttackBob {
        #[arg(long, value_enum)]
        strategy: BobAttack,
        /// Hilbert angle of the biased state, in radians.
        #[arg(long)]
        phi: Option<f64>,
        /// Register measurement for the entangled attack.
        #[arg(long, value_enum)]
        mode: Option<RegisterArg>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// No-signaling audit over biased states and both register modes.
    Sweep {
        /// Grid points over [0, π).
        #[arg(long)]
        points: Option<usize>,
        /// Rounds per strategy.
        #[arg(long)]
        trials: Option<u64>,
        /// CSV path [default: qpq-sweep.csv].
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Joint unambiguous-discrimination bound against k.
    UsdCurve {
        #[arg(long)]
        k_max: Option<usize>,
        /// CSV path [default: qpq-usd-curve.csv].
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Combine several oblivious keys with chosen relative shifts.
    Combine {
        /// Number of strings per trial.
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        protocol: ProtocolArgs,
        #[arg(long)]
        trials: Option<u64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Run { .. } => "run",
            Command::Table1 => "table1",
            Command::AttackAlice { .. } => "attack-alice",
            Command::AttackBob { .. } => "attack-bob",
            Command::Sweep { .. } => "sweep",
            Command::UsdCurve { .. } => "usd-curve",
            Command::Combine { .. } => "combine",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AliceAttack {
    Usd,
    Helstrom,
    Bb84,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BobAttack {
    Bias,
    Entangle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegisterArg {
    Honest,
    Conclusiveness,
}
