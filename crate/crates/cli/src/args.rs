use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hhl_poisson::analysis::{DEFAULT_CNOT_ERROR, REFERENCE_GATE_ACCURACY};
use hhl_poisson::Mode;

#[derive(Debug, Parser)]
#[command(name = "hhl-poisson", version, about = "Simulate an HHL solver for the 1D Poisson equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the quantum solver and compare against the classical solution.
    Solve(SolveArgs),
    /// Solve classically with both reference solvers.
    Classical(ClassicalArgs),
    /// Solve once per value of one parameter and tabulate the errors.
    Sweep(SweepArgs),
    /// Estimate the CNOT cost and hardware fidelity of the solver circuit.
    Estimate(EstimateArgs),
    /// Run the compact circuit under Pauli-trajectory CNOT noise.
    Noisy(NoisyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Faithful,
    Compact,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Faithful => Mode::Faithful,
            ModeArg::Compact => Mode::Compact,
        }
    }
}

/// Built-in right-hand sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    /// The reference 3x3 input for N=4 and 7x7 input for N=8, uniform otherwise.
    Reference,
    /// Equal overlap with every eigenvector.
    Flat,
    /// Equal amplitude on every interior point.
    Uniform,
    /// Lowest eigenvector.
    Lowest,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Grid count N (power of two).
    #[arg(long = "n", default_value_t = 4)]
    pub n_grid: usize,
    /// Right-hand side as N comma-separated amplitudes, or @path to a file with one per line.
    #[arg(long, allow_hyphen_values = true)]
    pub rhs: Option<String>,
    /// Built-in right-hand side used when --rhs is absent.
    #[arg(long, value_enum, default_value_t = Profile::Reference)]
    pub rhs_profile: Profile,
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    /// Fractional bits f of the eigenvalue register.
    #[arg(long, default_value_t = 2)]
    pub frac_bits: usize,
    /// Eigenvalue amplification exponent i.
    #[arg(long = "amp", default_value_t = 0)]
    pub amp_exponent: usize,
    /// Register-A width l (raised to the eigenvalue register width in faithful mode).
    #[arg(long, default_value_t = 0)]
    pub reg_a_bits: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Compact)]
    pub mode: ModeArg,
    /// Fail when the ancilla success probability is at or below this.
    #[arg(long)]
    pub min_success: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Include wall-clock timing (makes reports run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub circuit: CircuitArgs,
    /// Cost-rule overrides (TOML, `kind = cnots`).
    #[arg(long)]
    pub rules: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    FracBits,
    Amp,
    N,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    /// Comma-separated parameter values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Per-CNOT error rate for the (1 - p)^c fidelity.
    #[arg(long, default_value_t = DEFAULT_CNOT_ERROR)]
    pub cnot_error: f64,
    /// Per-CNOT accuracy for the accuracy^c fidelity.
    #[arg(long, default_value_t = REFERENCE_GATE_ACCURACY)]
    pub accuracy: f64,
    /// Use this CNOT count instead of the circuit estimate.
    #[arg(long, conflicts_with = "empty")]
    pub cnots: Option<u64>,
    /// Estimate an empty circuit (zero CNOTs).
    #[arg(long)]
    pub empty: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct NoisyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[arg(long)]
    pub rules: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CNOT_ERROR)]
    pub cnot_error: f64,
    #[arg(long, default_value_t = 1000)]
    pub trajectories: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}
