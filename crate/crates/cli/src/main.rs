use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod input;

use commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "tropsing", version, about = "Tropical invariants of monomial psh singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Vertices and facets of the Newton polyhedron.
    Polyhedron(Common),
    /// Directional Lelong numbers for the given weights (default: all ones).
    Nu(Common),
    /// Relative type against --psi or a directional weight, with certificate weights.
    Type(Common),
    /// Integrability index of the indicator and the log canonical threshold.
    Lct(Common),
    /// Covolume of the Newton polyhedron.
    Covol(Common),
    /// Mixed covolume of the components of a map.
    MixedCovol(Common),
    /// Kushnirenko and Bernstein bounds, and m_F for monomial maps.
    Bound(Common),
    /// Dequantization convergence table.
    Dequantize(Common),
    /// Full property suite; exits 3 on any violation.
    Check(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON document (germ, map or polyhedron) or a file holding a polynomial.
    #[arg(long, conflicts_with_all = ["poly", "json"])]
    input: Option<PathBuf>,
    /// Polynomial text, e.g. "x1^2 + 3*x2^3"; requires --n.
    #[arg(long, requires = "n", conflicts_with = "json")]
    poly: Option<String>,
    /// Inline JSON document.
    #[arg(long)]
    json: Option<String>,
    /// Number of variables for --poly or a polynomial --input.
    #[arg(long)]
    n: Option<usize>,
    /// Weight vector a1,a2,... (repeatable).
    #[arg(short = 'a', long = "weight", value_name = "A1,A2,...")]
    weights: Vec<String>,
    /// Weight polyhedron for `type`.
    #[arg(long)]
    psi: Option<PathBuf>,
    /// Increasing dequantization scales.
    #[arg(long, value_delimiter = ',', default_value = "64,256,1024")]
    m_schedule: Vec<u32>,
    /// Random phase vectors per sample.
    #[arg(long, default_value_t = 16)]
    phases: usize,
    /// Grid point t1,t2,... for `dequantize` (repeatable; default 5 per axis on [-2,-1/2]).
    #[arg(long = "t", value_name = "T1,T2,...", allow_hyphen_values = true)]
    grid: Vec<String>,
    /// Error tolerance at the final scale.
    #[arg(long, default_value_t = tropsing::dequant::DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[arg(long, env = "TROPSING_SEED", default_value_t = 0)]
    seed: u64,
    /// Add Monte Carlo and grid cross-checks.
    #[arg(long)]
    verify: bool,
    /// Monte Carlo sample count for --verify.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Polyhedron(c) => commands::polyhedron(c),
        Command::Nu(c) => commands::nu(c),
        Command::Type(c) => commands::relative_type(c),
        Command::Lct(c) => commands::lct(c),
        Command::Covol(c) => commands::covol(c),
        Command::MixedCovol(c) => commands::mixed_covol(c),
        Command::Bound(c) => commands::bound(c),
        Command::Dequantize(c) => commands::dequantize(c),
        Command::Check(c) => commands::check(c),
    };
    let (output, err) = match result {
        Ok(out) => (Some(out), None),
        Err(CliError::Reported { output, error }) => (Some(output), Some(*error)),
        Err(e) => (None, Some(e)),
    };
    if let Some(text) = output {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(text.as_bytes());
        if !text.ends_with('\n') {
            let _ = stdout.write_all(b"\n");
        }
    }
    match err {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("tropsing: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
