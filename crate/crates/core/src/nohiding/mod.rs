//! Erasure, recovery and imperfect-erasure experiments.

mod builders;
mod experiment;
mod randomizer;

use thiserror::Error;

use crate::circuits::CircuitError;
use crate::qmath::QmathError;
use crate::tomo::TomoError;

pub use builders::{
    build_bleaching_prefix, build_erasure_circuit, build_full_circuit, build_imperfect_circuit,
    build_imperfect_circuit_with, channel_pauli_images, decoder_gates, default_psi, fig2_circuit, imperfect_wires,
    induced_system_map, psi_prep_circuit, u3_prep_circuit,
};
pub use experiment::{
    default_grid, derive_seed, fidelity_lower_bound, run_perfect, run_point, run_sweep, sweep_to_csv, sweep_to_json,
    ExperimentRecord, PerfectReport, SystemTomography, SWEEP_CSV_HEADER,
};
pub use randomizer::{build_randomizer, expected_bell_state, RandomizerVariant, Variant};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NohidingError {
    #[error("unknown randomizer variant `{0}` (expected eq1, eq2 or eq6)")]
    UnknownVariant(String),
    #[error("p = {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("expected a single-qubit state, got {0} qubits")]
    NotSingleQubit(usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Tomo(#[from] TomoError),
    #[error(transparent)]
    Qmath(#[from] QmathError),
}
