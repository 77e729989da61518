use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::qmath::{hermitian_eig, pauli, ComplexMatrix, DensityMatrix, C64};

use super::sampling::pauli_labels;
use super::TomoError;

/// Linear-inversion estimate. Hermitian with unit trace, possibly not PSD.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomogramRaw {
    pub matrix: ComplexMatrix,
    pub min_eigenvalue: f64,
}

impl TomogramRaw {
    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue >= 0.0
    }
}

/// ρ = 2^{-n} Σ_P ⟨P⟩·P with ⟨I…I⟩ = 1. Every non-identity label must be present.
pub fn reconstruct(expectations: &BTreeMap<String, f64>, num_qubits: usize) -> Result<TomogramRaw, TomoError> {
    if !(1..=2).contains(&num_qubits) {
        return Err(TomoError::UnsupportedWidth(num_qubits));
    }
    let dim = 1usize << num_qubits;
    let mut rho = ComplexMatrix::identity(dim);
    for label in pauli_labels(num_qubits) {
        let value = *expectations
            .get(&label)
            .ok_or_else(|| TomoError::MissingExpectation(label.clone()))?;
        let p = pauli::string(&label).expect("generated labels are valid");
        rho = &rho + &p.scale(C64::new(value, 0.0));
    }
    let matrix = rho.scale(C64::new(1.0 / dim as f64, 0.0)).hermitian_part();
    let eig = hermitian_eig(&matrix)?;
    let min_eigenvalue = *eig.values.last().expect("nonempty spectrum");
    Ok(TomogramRaw { matrix, min_eigenvalue })
}

/// Exact ⟨P⟩ = tr(ρP) for every non-identity Pauli label.
pub fn exact_expectations(state: &DensityMatrix) -> BTreeMap<String, f64> {
    pauli_labels(state.num_qubits())
        .into_iter()
        .map(|l| {
            let v = state.expectation(&pauli::string(&l).expect("generated labels are valid"));
            (l, v)
        })
        .collect()
}

/// Euclidean projection of a spectrum onto the probability simplex: negative
/// entries are zeroed smallest-first, each deficit spread evenly over the
/// entries still standing.
pub fn project_spectrum(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = values.to_vec();
    let mut deficit = 0.0;
    for (pos, &i) in order.iter().enumerate() {
        let remaining = (n - pos) as f64;
        if values[i] + deficit / remaining < 0.0 {
            deficit += values[i];
            out[i] = 0.0;
        } else {
            let share = deficit / remaining;
            for &j in &order[pos..] {
                out[j] = values[j] + share;
            }
            break;
        }
    }
    out
}

/// Closest (Frobenius) unit-trace PSD matrix to a raw reconstruction.
pub fn project_physical(raw: &TomogramRaw) -> Result<DensityMatrix, TomoError> {
    let mut eig = hermitian_eig(&raw.matrix)?;
    // Absorb any trace drift before projecting.
    let shift = (1.0 - eig.values.iter().sum::<f64>()) / eig.values.len() as f64;
    let shifted: Vec<f64> = eig.values.iter().map(|l| l + shift).collect();
    eig.values = project_spectrum(&shifted);
    Ok(DensityMatrix::new(eig.reconstruct().hermitian_part())?)
}
