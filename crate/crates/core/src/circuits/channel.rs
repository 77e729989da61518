use crate::qmath::{pauli, ComplexMatrix, C64};

use super::CircuitError;

/// Completeness Σ K†K = I must hold to this tolerance.
pub const CPTP_TOLERANCE: f64 = 1e-10;

/// Kraus-operator representation of a CPTP map.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    kraus_ops: Vec<ComplexMatrix>,
}

impl Channel {
    pub fn new(kraus_ops: Vec<ComplexMatrix>) -> Result<Self, CircuitError> {
        let first = kraus_ops.first().ok_or(CircuitError::NotCptp("no Kraus operators".into()))?;
        let dim = first.rows();
        if !dim.is_power_of_two() {
            return Err(CircuitError::NotCptp(format!("dimension {dim} is not a power of two")));
        }
        if kraus_ops.iter().any(|k| k.rows() != dim || k.cols() != dim) {
            return Err(CircuitError::NotCptp("Kraus operators differ in shape".into()));
        }
        let channel = Self { kraus_ops };
        let dev = channel.completeness_deviation();
        if dev > CPTP_TOLERANCE {
            return Err(CircuitError::NotCptp(format!("Σ K†K deviates from I by {dev:e}")));
        }
        Ok(channel)
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn dim(&self) -> usize {
        self.kraus_ops[0].rows()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    /// max |(Σ K†K − I)ᵢⱼ|
    pub fn completeness_deviation(&self) -> f64 {
        let dim = self.kraus_ops[0].rows();
        let sum = self
            .kraus_ops
            .iter()
            .fold(ComplexMatrix::zeros(dim, dim), |acc, k| &acc + &k.adjoint().matmul(k));
        sum.max_abs_diff(&ComplexMatrix::identity(dim))
    }

    /// Σ K ρ K† on a matrix of the channel's own dimension.
    pub fn apply_local(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let dim = rho.rows();
        self.kraus_ops
            .iter()
            .fold(ComplexMatrix::zeros(dim, dim), |acc, k| &acc + &rho.conjugate_by(k))
    }
}

/// Single-qubit depolarizing map ρ ↦ p·I/2 + (1−p)·ρ with Kraus set
/// {√(1−3p/4)·I, √(p/4)·X, √(p/4)·Y, √(p/4)·Z}. Zero-weight operators are dropped.
pub fn depolarizing_channel(p: f64) -> Result<Channel, CircuitError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CircuitError::ProbabilityOutOfRange(p));
    }
    let weights = [
        (1.0 - 0.75 * p, pauli::identity()),
        (0.25 * p, pauli::x()),
        (0.25 * p, pauli::y()),
        (0.25 * p, pauli::z()),
    ];
    let kraus = weights
        .into_iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|(w, m)| m.scale(C64::new(w.sqrt(), 0.0)))
        .collect();
    Channel::new(kraus)
}
