use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use super::{hermitian_eig, QmathError};

pub const NORM_TOLERANCE: f64 = 1e-10;
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-10;
pub const EIGENVALUE_FLOOR: f64 = -1e-9;

/// Pure state of `num_qubits` qubits. Qubit 0 is the most significant bit of
/// the amplitude index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self, QmathError> {
        let num_qubits = qubits_for_dim(amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QmathError::NotNormalized { norm });
        }
        Ok(Self { num_qubits, amplitudes })
    }

    /// Rescales to unit norm before validating.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self, QmathError> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QmathError::NotNormalized { norm });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(amplitudes)
    }

    /// Computational basis state |index⟩.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[index] = ONE;
        Self { num_qubits, amplitudes }
    }

    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    /// α|0⟩ + β|1⟩, normalized.
    pub fn qubit(alpha: C64, beta: C64) -> Result<Self, QmathError> {
        Self::normalized(vec![alpha, beta])
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self {
            num_qubits: self.num_qubits + other.num_qubits,
            amplitudes,
        }
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            num_qubits: self.num_qubits,
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }

    /// Equality up to a global phase, within `tol` entrywise.
    pub fn equal_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let overlap = self.inner(other);
        if overlap.norm() < 1e-15 {
            return false;
        }
        let phase = overlap / overlap.norm();
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .all(|(a, b)| (a * phase - b).norm() <= tol)
    }

    pub(crate) fn from_raw(num_qubits: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        Self { num_qubits, amplitudes }
    }
}

/// Mixed state: Hermitian, unit trace, positive semidefinite (within tolerance).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QmathError> {
        if !matrix.is_square() {
            return Err(QmathError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let num_qubits = qubits_for_dim(matrix.rows())?;
        let asym = matrix.hermitian_asymmetry();
        if asym > HERMITIAN_TOLERANCE {
            return Err(QmathError::NotHermitian { max_asymmetry: asym });
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > TRACE_TOLERANCE {
            return Err(QmathError::TraceNotOne { trace: tr.re });
        }
        let min = hermitian_eig(&matrix)?.values.last().copied().unwrap_or(0.0);
        if min < EIGENVALUE_FLOOR {
            return Err(QmathError::NegativeEigenvalue { value: min });
        }
        Ok(Self { num_qubits, matrix })
    }

    /// I / 2^n
    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1 << num_qubits;
        Self {
            num_qubits,
            matrix: ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    /// tr(ρ·O) for a Hermitian observable, real part.
    pub fn expectation(&self, observable: &ComplexMatrix) -> f64 {
        self.matrix.matmul(observable).trace().re
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            num_qubits: self.num_qubits + other.num_qubits,
            matrix: super::kron(&self.matrix, &other.matrix),
        }
    }

    /// Skips validation; used by simulators whose steps preserve the invariants.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let num_qubits = matrix.rows().trailing_zeros() as usize;
        Self { num_qubits, matrix }
    }
}

impl From<&StateVector> for DensityMatrix {
    fn from(s: &StateVector) -> Self {
        s.to_density()
    }
}

pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize, QmathError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(QmathError::NotPowerOfTwo { dim });
    }
    Ok(dim.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized() {
        assert!(StateVector::new(vec![ONE, ONE]).is_err());
        assert!(StateVector::new(vec![ONE, ZERO, ZERO]).is_err());
    }

    #[test]
    fn basis_ordering_is_msb_first() {
        // |01⟩: qubit 0 = 0, qubit 1 = 1 → index 1.
        let s = StateVector::basis(1, 0).tensor(&StateVector::basis(1, 1));
        assert_eq!(s.amplitudes()[1], ONE);
    }

    #[test]
    fn density_validation() {
        let bad_trace = ComplexMatrix::identity(2);
        assert!(matches!(DensityMatrix::new(bad_trace), Err(QmathError::TraceNotOne { .. })));
        let negative = ComplexMatrix::from_real(2, 2, &[1.1, 0.0, 0.0, -0.1]);
        assert!(matches!(DensityMatrix::new(negative), Err(QmathError::NegativeEigenvalue { .. })));
        assert!(DensityMatrix::new(DensityMatrix::maximally_mixed(2).into_matrix()).is_ok());
    }

    #[test]
    fn phase_comparator() {
        let a = StateVector::qubit(ONE, ONE).unwrap();
        let phase = C64::from_polar(1.0, 0.7);
        let b = StateVector::new(a.amplitudes().iter().map(|x| x * phase).collect()).unwrap();
        assert!(a.equal_up_to_phase(&b, 1e-12));
        assert_ne!(a, b);
        let c = StateVector::qubit(ONE, -ONE).unwrap();
        assert!(!a.equal_up_to_phase(&c, 1e-6));
    }
}
