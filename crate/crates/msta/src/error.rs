use thiserror::Error;

/// Errors raised by the algebra, state constructors and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count {0} outside the supported range 1..=12")]
    QubitCountOutOfRange(usize),
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),
    #[error("multivector is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    NotUnitTrace(f64),
    #[error("state is not pure (max deviation of rho^2 - rho is {0:e})")]
    NotPure(f64),
    #[error("amplitudes are not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("matrix dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("axis is not a unit vector (norm {0})")]
    NonUnitAxis(f64),
    #[error("Bloch vector longer than one (norm {0})")]
    BlochOutOfRange(f64),
    #[error("product states are not orthogonal")]
    NotOrthogonal,
    #[error("product states do not share the same per-qubit axes")]
    MismatchedAxes,
    #[error("measurement outcome has vanishing probability {0:e}")]
    ImpossibleOutcome(f64),
    #[error("operator does not commute with the projector (deviation {0:e})")]
    NonCommuting(f64),
    #[error("rotor is not unitary (deviation {0:e})")]
    NonUnitaryRotor(f64),
    #[error("reduced Bloch vector of qubit {0} vanishes")]
    VanishingVector(char),
    #[error("pairwise invariants disagree: {0:?}")]
    InvariantMismatch([f64; 3]),
    #[error("negative expansion probability {0}")]
    NegativeProbability(f64),
    #[error("invariants are infeasible: {0}")]
    Infeasible(String),
    #[error("existence condition violated: {0}")]
    ExistenceViolated(&'static str),
    #[error("angles violate the pure-state closure (residual {0:e})")]
    ClosureViolation(f64),
    #[error("vector-sum solver found no solution for feasible invariants")]
    SolverFailure,
}

pub type Result<T> = std::result::Result<T, Error>;
