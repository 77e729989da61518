//! Dense complex linear algebra and the state metrics built on it.

mod eig;
mod matrix;
mod metrics;
mod state;

use thiserror::Error;

pub use eig::{hermitian_eig, Eigen, JACOBI_TOLERANCE, MAX_SWEEPS};
pub use matrix::{kron, kron_all, pauli, ComplexMatrix, C64};
pub use metrics::{fidelity, partial_trace, sqrt_psd, trace_distance, trace_norm_distance, SUPPORT_CUTOFF};
pub use state::{DensityMatrix, StateVector, EIGENVALUE_FLOOR};

pub(crate) use matrix::{ONE, ZERO};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmathError {
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max asymmetry {max_asymmetry}")]
    NotHermitian { max_asymmetry: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension {dim} is not a power of two")]
    NotPowerOfTwo { dim: usize },
    #[error("state norm {norm} differs from 1")]
    NotNormalized { norm: f64 },
    #[error("trace {trace} differs from 1")]
    TraceNotOne { trace: f64 },
    #[error("eigenvalue {value:e} is below the physical floor")]
    NegativeEigenvalue { value: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("qubit {qubit} listed twice")]
    DuplicateQubit { qubit: usize },
}
