use std::f64::consts::PI;

use crate::circuits::{run_density, Circuit, Gate};
use crate::qmath::{partial_trace, pauli, ComplexMatrix, DensityMatrix, StateVector, C64, ONE};

use super::randomizer::{build_randomizer, Variant};
use super::NohidingError;

/// Wire layout of the imperfect circuit after its final swaps.
pub mod imperfect_wires {
    pub const CONTROL: usize = 0;
    pub const SYSTEM: usize = 1;
    pub const ANCILLA_1: usize = 2;
    pub const ANCILLA_2: usize = 3;
}

/// cos(π/8)|0⟩ + sin(π/8)|1⟩
pub fn default_psi() -> StateVector {
    StateVector::qubit(C64::new((PI / 8.0).cos(), 0.0), C64::new((PI / 8.0).sin(), 0.0)).expect("unit norm")
}

/// H, T, H, S on qubit 0 of an `num_qubits` register. Prepares
/// [`default_psi`] up to the global phase e^{iπ/8}.
pub fn psi_prep_circuit(num_qubits: usize) -> Circuit {
    Circuit::from_gates(num_qubits, vec![Gate::h(0), Gate::t(0), Gate::h(0), Gate::s(0)])
        .expect("qubit 0 exists for num_qubits >= 1")
}

/// U3 preparation of an arbitrary single-qubit state on qubit 0, exact up to
/// global phase.
pub fn u3_prep_circuit(psi: &StateVector, num_qubits: usize) -> Result<Circuit, NohidingError> {
    if psi.num_qubits() != 1 {
        return Err(NohidingError::NotSingleQubit(psi.num_qubits()));
    }
    let [a, b] = [psi.amplitudes()[0], psi.amplitudes()[1]];
    let theta = 2.0 * b.norm().atan2(a.norm());
    let phi = b.arg() - a.arg();
    Ok(Circuit::from_gates(num_qubits, vec![Gate::u3(theta, phi, 0.0, 0)])?)
}

/// Ancillas to |++⟩, then the randomizer on (0, 1, 2).
pub fn build_erasure_circuit(v: Variant) -> Circuit {
    let u = build_randomizer(v).matrix;
    Circuit::from_gates(
        3,
        vec![Gate::h(1), Gate::h(2), Gate::unitary(u, vec![0, 1, 2]).expect("randomizer is unitary")],
    )
    .expect("fixed three-qubit layout")
}

/// Decoder acting on the ancilla pair `(a, b)`. Leaves ψ on `b`.
pub fn decoder_gates(v: Variant, a: usize, b: usize) -> Vec<Gate> {
    let core = [Gate::cnot(a, b), Gate::h(a), Gate::cnot(a, b)];
    match v {
        Variant::Eq2 => core.to_vec(),
        Variant::Eq1 => [Gate::z(a), Gate::x(b)].into_iter().chain(core).collect(),
        Variant::Eq6 => core.into_iter().chain([Gate::swap(a, b)]).collect(),
    }
}

/// Erasure followed by the variant's decoder on ancillas (1, 2).
pub fn build_full_circuit(v: Variant) -> Circuit {
    let mut c = build_erasure_circuit(v);
    for g in decoder_gates(v, 1, 2) {
        c.push(g).expect("ancilla indices in range");
    }
    c
}

/// The full circuit preceded by the H, T, H, S preparation of ψ.
pub fn fig2_circuit(v: Variant) -> Circuit {
    psi_prep_circuit(3).then(&build_full_circuit(v)).expect("same width")
}

fn check_probability(p: f64) -> Result<(), NohidingError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(NohidingError::ProbabilityOutOfRange(p));
    }
    Ok(())
}

/// Control preparation, two controlled-H gates and the randomizer. Wires:
/// system 0, ancilla 1 on 1, control 2, ancilla 2 on 3.
pub fn build_bleaching_prefix(v: Variant, p: f64) -> Result<Circuit, NohidingError> {
    check_probability(p)?;
    let theta = 2.0 * p.sqrt().asin();
    let u = build_randomizer(v).matrix;
    Ok(Circuit::from_gates(
        4,
        vec![Gate::u3(theta, 0.0, 0.0, 2), Gate::ch(2, 1), Gate::ch(2, 3), Gate::unitary(u, vec![0, 1, 3])?],
    )?)
}

/// Four-qubit imperfect erasure with decoding. After the final swaps the
/// wires follow [`imperfect_wires`].
pub fn build_imperfect_circuit_with(v: Variant, p: f64) -> Result<Circuit, NohidingError> {
    let mut c = build_bleaching_prefix(v, p)?;
    for g in decoder_gates(v, 1, 3) {
        c.push(g)?;
    }
    c.push(Gate::swap(0, 1))?;
    c.push(Gate::swap(0, 2))?;
    Ok(c)
}

pub fn build_imperfect_circuit(p: f64) -> Result<Circuit, NohidingError> {
    build_imperfect_circuit_with(Variant::Eq2, p)
}

/// Image of each Pauli (I, X, Y, Z) under the system-qubit map induced by the
/// bleaching prefix. Obtained from the physical inputs I/2, |0⟩, |+⟩ and |+i⟩
/// by linearity.
pub fn induced_system_map(v: Variant, p: f64) -> Result<[ComplexMatrix; 4], NohidingError> {
    let prefix = build_bleaching_prefix(v, p)?;
    let rest = StateVector::zero(3).to_density();
    let image = |rho: DensityMatrix| -> Result<ComplexMatrix, NohidingError> {
        let out = run_density(&prefix, &[], &rho.tensor(&rest))?;
        Ok(partial_trace(&out, &[0])?.into_matrix())
    };
    let i = C64::new(0.0, 1.0);
    let mixed = image(DensityMatrix::maximally_mixed(1))?;
    let zero = image(StateVector::zero(1).to_density())?;
    let plus = image(StateVector::qubit(ONE, ONE)?.to_density())?;
    let plus_i = image(StateVector::qubit(ONE, i)?.to_density())?;
    let two = C64::new(2.0, 0.0);
    let id = mixed.scale(two);
    Ok([
        id.clone(),
        &plus.scale(two) - &id,
        &plus_i.scale(two) - &id,
        &zero.scale(two) - &id,
    ])
}

/// Same Pauli images computed directly from a Kraus channel.
pub fn channel_pauli_images(channel: &crate::circuits::Channel) -> [ComplexMatrix; 4] {
    ['I', 'X', 'Y', 'Z'].map(|c| channel.apply_local(&pauli::by_label(c).expect("fixed labels")))
}
