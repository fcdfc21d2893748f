use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opspace_core::monotones::RenyiIndex;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "opspace",
    version,
    about = "Operator entanglement, magic monotones and exact ensemble averages"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Serialize)]
pub struct Common {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,

    /// Output format. Defaults to csv for per-sample streams and table
    /// dumps, json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for sampling loops.
    #[arg(long, global = true, env = "OPSPACE_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,

    /// Evaluate samples one after another on the calling thread.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub sequential: bool,

    /// Omit the timestamp so repeated runs produce identical bytes.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// LOE, OSE, nullity and T-count of a circuit acting on a Pauli.
    Monotones(MonotonesArgs),
    /// Exact average operator purity.
    ExactPurity(ExactArgs),
    /// Monte Carlo average operator purity.
    McPurity(McArgs),
    /// Check LOE ≤ OSE ≤ nullity ≤ T-count on random samples.
    VerifyHierarchy(HierarchyArgs),
    /// Dump fourth-moment Weingarten matrices.
    Weingarten(WeingartenArgs),
    /// Run the built-in oracle comparisons.
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Monotones(_) => "monotones",
            Command::ExactPurity(_) => "exact-purity",
            Command::McPurity(_) => "mc-purity",
            Command::VerifyHierarchy(_) => "verify-hierarchy",
            Command::Weingarten(_) => "weingarten",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleName {
    Haar,
    Clifford,
    #[value(alias = "nu-compressible")]
    Nu,
    #[value(alias = "t-doped")]
    Tdoped,
    /// Random Clifford+T gate sequences (hierarchy checks only).
    RandomCircuits,
}

#[derive(Args, Debug, Serialize)]
pub struct EnsembleArgs {
    #[arg(long, value_enum)]
    pub ensemble: EnsembleName,

    /// Number of qubits.
    #[arg(long = "N")]
    pub n: usize,

    /// Haar block size of the ν-compressible ensemble.
    #[arg(long, conflicts_with = "nu")]
    pub ell: Option<usize>,

    /// Nullity of the ν-compressible ensemble; the block has ⌈ν/2⌉ qubits.
    #[arg(long)]
    pub nu: Option<usize>,

    /// Number of T gates.
    #[arg(long)]
    pub tau: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct MonotonesArgs {
    /// Circuit description in JSON.
    #[arg(long)]
    pub circuit: PathBuf,

    /// Initial Pauli such as "+XII" (qubit 0 leftmost). Default: Z on qubit 0.
    #[arg(long)]
    pub initial: Option<String>,

    /// Qubits of subsystem A. Default: the first half.
    #[arg(long, value_delimiter = ',')]
    pub cut: Option<Vec<usize>>,

    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
    #[serde(serialize_with = "ser_alphas")]
    pub alphas: Vec<RenyiIndex>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Closed,
    Sum,
    Both,
}

#[derive(Args, Debug, Serialize)]
pub struct ExactArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,

    /// Dimension of subsystem A. Default: square root of the full dimension.
    #[arg(long = "dA")]
    pub d_a: Option<u64>,

    #[arg(long, value_enum, default_value = "both")]
    pub backend: BackendChoice,

    /// Also report the half-cut lower bounds on the average second Rényi LOE.
    #[arg(long)]
    pub bounds: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct McArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,

    /// Qubits of subsystem A. Default: the first half.
    #[arg(long, value_delimiter = ',')]
    pub cut: Option<Vec<usize>>,

    #[arg(long, default_value_t = 1000)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Initial Pauli such as "+ZII". Default: Z on qubit 0.
    #[arg(long)]
    pub initial: Option<String>,

    /// Qubit carrying the T gates of the T-doped ensemble.
    #[arg(long, default_value_t = 0)]
    pub t_site: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct HierarchyArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,

    #[arg(long, default_value_t = 100)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
    #[serde(serialize_with = "ser_alphas")]
    pub alphas: Vec<RenyiIndex>,

    /// Initial Pauli. Default: Z on qubit 0.
    #[arg(long)]
    pub initial: Option<String>,

    /// Largest T-count of random circuits.
    #[arg(long, default_value_t = 6)]
    pub max_tau: usize,

    /// Clifford gates per random circuit.
    #[arg(long, default_value_t = 40)]
    pub gates: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeingartenKind {
    Haar,
    Clifford,
}

#[derive(Args, Debug, Serialize)]
pub struct WeingartenArgs {
    /// Local dimension.
    #[arg(long)]
    pub d: u64,

    #[arg(long, value_enum, default_value = "haar")]
    pub kind: WeingartenKind,
}

fn ser_alphas<S: serde::Serializer>(alphas: &[RenyiIndex], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(alphas.iter().map(|a| a.to_string()))
}
