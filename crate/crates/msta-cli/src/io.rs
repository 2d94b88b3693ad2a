//! State files, output sinks and the exit-code mapping.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use msta::{Complex64, DensityOperator};
use serde::{Deserialize, Serialize};

/// Failures grouped by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input or infeasible invariants; exit code 2.
    Validation(String),
    /// The vector-sum solver found nothing for feasible input; exit code 3.
    Solver(String),
    /// Unreadable or unwritable files; exit code 4.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Solver(m) => write!(f, "solver failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<msta::Error> for CliError {
    fn from(e: msta::Error) -> Self {
        match e {
            msta::Error::SolverFailure => CliError::Solver(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

const NORM_TOL: f64 = 1e-9;

/// `{"n_qubits": N, "amplitudes": [[re, im], ...]}`, computational basis
/// with qubit `a` as the most significant index bit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_amplitudes(amps: &[Complex64]) -> Self {
        StateFile {
            n_qubits: amps.len().trailing_zeros() as usize,
            amplitudes: amps.iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn load(path: &Path) -> CliResult<StateFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let file: StateFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        file.validate()?;
        Ok(file)
    }

    fn validate(&self) -> CliResult<()> {
        if !(1..=msta::algebra::MAX_QUBITS).contains(&self.n_qubits) {
            return Err(CliError::Validation(format!(
                "n_qubits = {} outside 1..=12",
                self.n_qubits
            )));
        }
        if self.amplitudes.len() != 1 << self.n_qubits {
            return Err(CliError::Validation(format!(
                "{} amplitudes for {} qubits, expected {}",
                self.amplitudes.len(),
                self.n_qubits,
                1usize << self.n_qubits
            )));
        }
        if self.amplitudes.iter().flatten().any(|x| !x.is_finite()) {
            return Err(CliError::Validation("non-finite amplitude".into()));
        }
        let norm: f64 = self
            .amplitudes
            .iter()
            .map(|[re, im]| re * re + im * im)
            .sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(CliError::Validation(format!(
                "amplitudes have norm^2 {norm}, expected 1"
            )));
        }
        Ok(())
    }

    /// Amplitudes rescaled to unit norm (the file is within 1e-9 of it).
    pub fn amplitudes(&self) -> Vec<Complex64> {
        let norm: f64 = self
            .amplitudes
            .iter()
            .map(|[re, im]| re * re + im * im)
            .sum::<f64>()
            .sqrt();
        self.amplitudes
            .iter()
            .map(|[re, im]| Complex64::new(re / norm, im / norm))
            .collect()
    }

    pub fn density(&self) -> CliResult<DensityOperator> {
        Ok(msta::states::pure_state(&self.amplitudes())?)
    }
}

/// Opens `--out` or stdout.
pub fn sink(out: Option<&PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}
