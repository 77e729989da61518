//! Exact simulators. Both consume the same gate IR; the statevector path
//! applies gates locally, the density path conjugates by embedded matrices.

use crate::qmath::{ComplexMatrix, DensityMatrix, StateVector, C64, ZERO};

use super::channel::Channel;
use super::circuit::Circuit;
use super::gate::{embed, gate_matrix};
use super::CircuitError;

/// A channel attached after the first `position` gates of a circuit.
#[derive(Clone, Debug)]
pub struct ChannelPlacement {
    pub channel: Channel,
    pub qubits: Vec<usize>,
    pub position: usize,
}

impl ChannelPlacement {
    pub fn new(channel: Channel, qubits: Vec<usize>, position: usize) -> Self {
        Self {
            channel,
            qubits,
            position,
        }
    }
}

/// Applies a 2^k local matrix to `targets` of a statevector in place.
fn apply_local(amps: &mut [C64], local: &ComplexMatrix, targets: &[usize], num_qubits: usize) {
    let k = targets.len();
    let sub_dim = 1usize << k;
    let bits: Vec<usize> = targets.iter().map(|&q| num_qubits - 1 - q).collect();
    let mask: usize = bits.iter().map(|b| 1usize << b).sum();
    let offset = |sub: usize| -> usize {
        bits.iter()
            .enumerate()
            .fold(0, |acc, (pos, &b)| acc | (((sub >> (k - 1 - pos)) & 1) << b))
    };
    let offsets: Vec<usize> = (0..sub_dim).map(offset).collect();
    let mut scratch = vec![ZERO; sub_dim];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (s, off) in scratch.iter_mut().zip(&offsets) {
            *s = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            amps[base | off] = local.row(r).iter().zip(&scratch).map(|(a, b)| a * b).sum();
        }
    }
}

pub fn run_statevector(circuit: &Circuit, input: &StateVector) -> Result<StateVector, CircuitError> {
    let n = circuit.num_qubits();
    if input.num_qubits() != n {
        return Err(CircuitError::DimensionMismatch {
            expected: n,
            found: input.num_qubits(),
        });
    }
    let mut amps = input.amplitudes().to_vec();
    for g in circuit.gates() {
        apply_local(&mut amps, &g.local_matrix(), &g.targets, n);
    }
    Ok(StateVector::from_raw(n, amps))
}

/// Unitary of the whole circuit as a product of embedded gate matrices.
pub fn circuit_unitary(circuit: &Circuit) -> Result<ComplexMatrix, CircuitError> {
    let n = circuit.num_qubits();
    circuit
        .gates()
        .iter()
        .try_fold(ComplexMatrix::identity(1 << n), |acc, g| Ok(gate_matrix(g, n)?.matmul(&acc)))
}

/// Applies `channel` to `qubits` of a full density matrix.
pub fn apply_channel(
    rho: &ComplexMatrix,
    channel: &Channel,
    qubits: &[usize],
    num_qubits: usize,
) -> Result<ComplexMatrix, CircuitError> {
    if channel.num_qubits() != qubits.len() {
        return Err(CircuitError::DimensionMismatch {
            expected: qubits.len(),
            found: channel.num_qubits(),
        });
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q >= num_qubits {
            return Err(CircuitError::QubitOutOfRange { qubit: q, num_qubits });
        }
        if qubits[..i].contains(&q) {
            return Err(CircuitError::RepeatedQubit { qubit: q });
        }
    }
    let dim = rho.rows();
    Ok(channel.kraus_ops().iter().fold(ComplexMatrix::zeros(dim, dim), |acc, k| {
        &acc + &rho.conjugate_by(&embed(k, qubits, num_qubits))
    }))
}

/// Interleaves unitary conjugation with the placed Kraus channels. Channels
/// sharing a position run in list order.
pub fn run_density(
    circuit: &Circuit,
    channels: &[ChannelPlacement],
    input: &DensityMatrix,
) -> Result<DensityMatrix, CircuitError> {
    let n = circuit.num_qubits();
    if input.num_qubits() != n {
        return Err(CircuitError::DimensionMismatch {
            expected: n,
            found: input.num_qubits(),
        });
    }
    if let Some(bad) = channels.iter().find(|c| c.position > circuit.len()) {
        return Err(CircuitError::ChannelPosition {
            position: bad.position,
            len: circuit.len(),
        });
    }
    for c in channels {
        if c.channel.completeness_deviation() > super::channel::CPTP_TOLERANCE {
            return Err(CircuitError::NotCptp("channel is not trace preserving".into()));
        }
    }

    let mut rho = input.matrix().clone();
    let attach = |rho: &mut ComplexMatrix, pos: usize| -> Result<(), CircuitError> {
        for c in channels.iter().filter(|c| c.position == pos) {
            *rho = apply_channel(rho, &c.channel, &c.qubits, n)?;
        }
        Ok(())
    };
    for (i, g) in circuit.gates().iter().enumerate() {
        attach(&mut rho, i)?;
        rho = rho.conjugate_by(&gate_matrix(g, n)?);
    }
    attach(&mut rho, circuit.len())?;
    Ok(DensityMatrix::from_matrix_unchecked(rho.hermitian_part()))
}
