//! Shot-sampled tomography of one- and two-qubit states.

mod pipeline;
mod reconstruct;
mod sampling;

use thiserror::Error;

use crate::qmath::QmathError;

pub use pipeline::{estimate_expectations, tomo_pipeline, Shots, TomographyReport};
pub use reconstruct::{exact_expectations, project_physical, project_spectrum, reconstruct, TomogramRaw};
pub use sampling::{
    basis_probabilities, basis_stream, expectation, measure_shots, measurement_bases, pauli_expectation, pauli_labels,
    ShotCounts,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TomoError {
    #[error("invalid measurement basis `{0}`")]
    InvalidBasis(String),
    #[error("invalid basis character `{0}`")]
    InvalidBasisChar(char),
    #[error("malformed outcome `{0}`")]
    BadOutcome(String),
    #[error("basis `{basis}` does not cover {num_qubits} qubit(s)")]
    BasisLength { basis: String, num_qubits: usize },
    #[error("zero shots")]
    ZeroShots,
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("Pauli `{pauli}` cannot be estimated from basis `{basis}`")]
    IncompatiblePauli { pauli: String, basis: String },
    #[error("missing expectation for `{0}`")]
    MissingExpectation(String),
    #[error("tomography supports 1 or 2 qubits, got {0}")]
    UnsupportedWidth(usize),
    #[error(transparent)]
    Qmath(#[from] QmathError),
}
