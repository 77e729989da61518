//! Circuit IR, text format, exact simulators and Kraus channels.

mod channel;
mod circuit;
mod gate;
mod parse;
mod sim;

use thiserror::Error;

pub use channel::{depolarizing_channel, Channel, CPTP_TOLERANCE};
pub use circuit::Circuit;
pub use gate::{embed, gate_matrix, u3_matrix, Gate, GateKind, UNITARY_TOLERANCE};
pub use parse::{parse_circuit, render_circuit, ParseError, ParseErrorKind};
pub use sim::{apply_channel, circuit_unitary, run_density, run_statevector, ChannelPlacement};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("`{gate}` acts on {expected} qubit(s), got {found}")]
    Arity {
        gate: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("qubit {qubit} repeated in one gate")]
    RepeatedQubit { qubit: usize },
    #[error("qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("invalid gate payload: {0}")]
    BadPayload(String),
    #[error("expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("channel is not CPTP: {0}")]
    NotCptp(String),
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("channel position {position} beyond circuit length {len}")]
    ChannelPosition { position: usize, len: usize },
    #[error("`{0}` gates have no text representation")]
    Unrenderable(&'static str),
}
