mod commands;
mod io;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "msta",
    version,
    about = "Multi-qubit states in the correlated Pauli algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Output format; tables default to csv, reports to text.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BellArg {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local-unitary invariants of a 2- or 3-qubit pure state.
    ///
    /// For three qubits the report holds the Bloch lengths, vbar2, vbar3,
    /// I2..I6, the hyperdeterminant 3-tangle, the feasibility verdict and
    /// the solved vector-sum angle sets.
    Invariants {
        /// JSON state file: {"n_qubits": N, "amplitudes": [[re, im], ...]}.
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Feasibility of (vbar2, vbar3) on a grid for fixed Bloch lengths.
    ///
    /// CSV columns, in order: row,label,vbar2,vbar3,p_ok,b_value,b_ok,feasible,i6.
    /// `row` is `grid` for the grid x grid points (vbar3 outer, vbar2 inner)
    /// and `marker` for the special points A (seed), B (negative seed or
    /// zero 3-tangle) and C (maximum 3-tangle), which follow the grid rows.
    #[command(name = "region-scan", verbatim_doc_comment)]
    RegionScan {
        /// Common Bloch length; overridden per qubit by --v-a/--v-b/--v-c.
        #[arg(long)]
        v: Option<f64>,
        #[arg(long)]
        v_a: Option<f64>,
        #[arg(long)]
        v_b: Option<f64>,
        #[arg(long)]
        v_c: Option<f64>,
        /// Points per axis.
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Evolves a 2-qubit state under the exchange Hamiltonian
    /// (w_x xx + w_y yy + w_z zz)/4 + (beta_a z_a + beta_b z_b)/2.
    ///
    /// CSV columns, in order: t,a_x,a_y,a_z,b_x,b_y,b_z,entropy,purity.
    #[command(verbatim_doc_comment)]
    Evolve {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        omega_x: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        omega_y: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        omega_z: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        beta_a: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        beta_b: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        t1: f64,
        /// Number of intervals; steps + 1 rows are written.
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Maximal CHSH value of a 2-qubit state and the directions reaching it.
    Chsh {
        #[arg(long)]
        state: PathBuf,
        /// Seed for the optimizer's random restarts.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Expansion of a Bell state in the Pauli algebra.
    Bell {
        #[arg(value_enum)]
        which: BellArg,
        #[command(flatten)]
        output: Output,
    },
    /// Randomized campaigns against the dense-matrix oracle: algebra
    /// isomorphism, I6 versus the hyperdeterminant and the solver round trip.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Samples per campaign.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn run(cli: Cli) -> io::CliResult<()> {
    match cli.command {
        Command::Invariants { state, output } => commands::invariants(&state, &output),
        Command::RegionScan {
            v,
            v_a,
            v_b,
            v_c,
            grid,
            output,
        } => {
            let pick = |x: Option<f64>| {
                x.or(v).ok_or_else(|| {
                    io::CliError::Validation("give --v or all of --v-a, --v-b, --v-c".into())
                })
            };
            commands::region_scan([pick(v_a)?, pick(v_b)?, pick(v_c)?], grid, &output)
        }
        Command::Evolve {
            state,
            omega_x,
            omega_y,
            omega_z,
            beta_a,
            beta_b,
            t0,
            t1,
            steps,
            output,
        } => {
            let h = msta::dynamics::ExchangeHamiltonian {
                omega_x,
                omega_y,
                omega_z,
                beta_a,
                beta_b,
            };
            commands::evolve(&state, &h, (t0, t1, steps), &output)
        }
        Command::Chsh {
            state,
            seed,
            output,
        } => commands::chsh(&state, seed, &output),
        Command::Bell { which, output } => commands::bell(which, &output),
        Command::Verify {
            seed,
            samples,
            output,
        } => verify::run(seed, samples, &output),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("msta: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
