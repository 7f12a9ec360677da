use alloc::string::String;

use crate::circuit::QubitId;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("qubit {qubit} is out of range for a {qubit_count}-qubit circuit")]
    OperandOutOfRange { qubit: QubitId, qubit_count: usize },
    #[error("qubit {0} appears more than once in a gate")]
    DuplicateOperand(QubitId),
    #[error("single-qubit matrix is not unitary")]
    NonUnitary,
    #[error("multi-controlled X with {controls} controls needs {needed} scratch qubits, none bound")]
    ScratchUnavailable { controls: usize, needed: usize },
    #[error("gate `{0}` is not elementary")]
    UnsupportedGate(&'static str),
    #[error("parity fan-in needs at least one control")]
    EmptyControls,
    #[error("fanout source is also a target")]
    SourceInTargets,
    #[error("needed {needed} scratch qubits, only {available} free")]
    InsufficientScratch { needed: usize, available: usize },
    #[error("amplitudes are not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("basis string {0} occurs twice")]
    DuplicateBasis(String),
    #[error("basis string has {found} bits, expected {expected}")]
    BadWidth { expected: usize, found: usize },
    #[error("basis string contains a character other than 0/1: {0:?}")]
    BadBasisChar(String),
    #[error("term {0} has zero amplitude")]
    ZeroAmplitude(usize),
    #[error("ancilla budget {m} is below the feasibility floor {m_min}")]
    BudgetTooSmall { m: usize, m_min: usize },
    #[error("invalid parameter override: {0}")]
    InvalidOverride(String),
    #[error("{count} target strings exceed the {k} available slots")]
    TooManyTargets { count: usize, k: usize },
    #[error("gate `{0}` does not permute basis states")]
    NonPermutationGate(&'static str),
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
