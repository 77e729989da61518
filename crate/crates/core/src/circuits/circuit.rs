use super::gate::Gate;
use super::CircuitError;

/// Ordered gate list over an `num_qubits`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let mut c = Self::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self, CircuitError> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends every gate of `other`; registers must match.
    pub fn extend(&mut self, other: &Circuit) -> Result<&mut Self, CircuitError> {
        if other.num_qubits != self.num_qubits {
            return Err(CircuitError::DimensionMismatch {
                expected: self.num_qubits,
                found: other.num_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    pub fn then(mut self, other: &Circuit) -> Result<Self, CircuitError> {
        self.extend(other)?;
        Ok(self)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}
