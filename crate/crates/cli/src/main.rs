//! `uclab`: batch analysis of union-closed families.
//!
//! Exit codes: 0 success, 1 verification failed, 2 input error, 3 resource guard.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used by Monte Carlo subcommands unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Parser, Debug)]
#[command(name = "uclab", version, about = "Union-closed family analysis and verification")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// More output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Union-closedness, frequencies, blocks and the entropy certificate of a .ucf family.
    Analyze { file: PathBuf },
    /// Rigorous interval verification of an inequality, or the ψ_k table.
    Verify(VerifyArgs),
    /// Re-check a certificate produced by `verify` (use `-` for stdin).
    Replay { file: PathBuf },
    /// Generate a named family; writes .ucf when `-o` is given.
    Construct(ConstructArgs),
    /// Exhaustive search over all families on [n], n ≤ 4.
    Enumerate(EnumerateArgs),
    /// Monte Carlo experiment on the approximately union-closed slice family.
    ApproxUc(ApproxArgs),
    /// Entropy gain H(A^δ) − H(A) of the perturbed distribution over a δ grid.
    EntropyGain(GainArgs),
    /// Floating-point scan of h(xy)/(h(x)y + h(y)x) over (0,1)² (not rigorous).
    Scan {
        #[arg(long, default_value_t = 1000)]
        resolution: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    KeyLemma,
    GilmerRefinement,
    PsiTable,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub target: VerifyTarget,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Largest k in the ψ_k table.
    #[arg(long, default_value_t = 10)]
    pub k_max: u32,
    /// Also write the full certificate to this file.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[command(subcommand)]
    pub kind: ConstructKind,
    /// Output .ucf path.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Member encoding of the written file.
    #[arg(long, value_enum, global = true, default_value_t = UcfStyle::Braces)]
    pub style: UcfStyle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum UcfStyle {
    Braces,
    Bitstring,
}

#[derive(Subcommand, Debug)]
pub enum ConstructKind {
    /// All subsets of [m] plus the initial segments [k], m < k ≤ m².
    Fm {
        #[arg(long)]
        m: usize,
    },
    /// Subsets of [n] of size at most / at least / exactly k.
    Binomial {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::AtMost)]
        mode: ModeArg,
    },
    /// The twelve-element family with exactly two abundant elements.
    S12_4,
    /// S^n_k: k ≥ 3, n even, n ≥ 10k.
    Snk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    AtMost,
    AtLeast,
    Exact,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    /// Write the family attaining the minimum to this .ucf file.
    #[arg(long)]
    pub emit_worst: Option<PathBuf>,
    /// Also count how many non-union-closed families the entropy certificate proves (n ≤ 3).
    #[arg(long)]
    pub coverage: bool,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Args, Debug)]
pub struct GainArgs {
    pub file: PathBuf,
    /// Comma-separated δ values in (0, 1]; default 2^-1, …, 2^-20.
    #[arg(long, value_delimiter = ',')]
    pub deltas: Option<Vec<f64>>,
}

pub struct Ctx {
    pub format: Format,
    pub seed: u64,
    pub verbose: u8,
}

/// Outcome of a successful run: exit 0, or exit 1 when a verification did not succeed.
pub enum Outcome {
    Success,
    VerificationFailed,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<uclab::Error>() {
            return match e {
                uclab::Error::Resource(_) => 3,
                _ => 2,
            };
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx { format: cli.format, seed: cli.seed, verbose: cli.verbose };
    let result = match cli.command {
        Command::Analyze { file } => commands::analyze(&ctx, &file),
        Command::Verify(args) => commands::verify(&ctx, &args),
        Command::Replay { file } => commands::replay(&ctx, &file),
        Command::Construct(args) => commands::construct(&ctx, &args),
        Command::Enumerate(args) => commands::enumerate(&ctx, &args),
        Command::ApproxUc(args) => commands::approx_uc(&ctx, &args),
        Command::EntropyGain(args) => commands::entropy_gain(&ctx, &args),
        Command::Scan { resolution } => commands::scan(&ctx, resolution),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
