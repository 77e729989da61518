//! Seeded measurement sampling.
//!
//! Every call draws from a ChaCha8 generator seeded with `seed` on the stream
//! selected by [`basis_stream`], so the same (seed, basis) pair always yields
//! the same counts, and different bases of one run never share random bits.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::qmath::{kron_all, ComplexMatrix, DensityMatrix, C64};

use super::TomoError;

/// Outcome statistics of one measurement setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotCounts {
    pub basis: String,
    pub shots: u64,
    /// Bitstring (first character = first measured qubit) to count.
    pub counts: BTreeMap<String, u64>,
}

impl ShotCounts {
    pub fn new(basis: impl Into<String>, counts: BTreeMap<String, u64>) -> Result<Self, TomoError> {
        let basis = basis.into();
        validate_basis(&basis)?;
        for key in counts.keys() {
            if key.len() != basis.len() || !key.chars().all(|c| c == '0' || c == '1') {
                return Err(TomoError::BadOutcome(key.clone()));
            }
        }
        let shots = counts.values().sum();
        Ok(Self { basis, shots, counts })
    }

    pub fn frequency(&self, outcome: &str) -> f64 {
        if self.shots == 0 {
            return 0.0;
        }
        *self.counts.get(outcome).unwrap_or(&0) as f64 / self.shots as f64
    }
}

fn validate_basis(basis: &str) -> Result<(), TomoError> {
    if basis.is_empty() {
        return Err(TomoError::InvalidBasis(basis.to_string()));
    }
    if let Some(c) = basis.chars().find(|c| !matches!(c, 'X' | 'Y' | 'Z')) {
        return Err(TomoError::InvalidBasisChar(c));
    }
    Ok(())
}

/// Stream id for a measurement basis: base-3 code of the letters (X=0, Y=1,
/// Z=2) with the basis length in the upper 32 bits.
pub fn basis_stream(basis: &str) -> u64 {
    let code = basis.chars().fold(0u64, |acc, c| {
        acc * 3
            + match c {
                'X' => 0,
                'Y' => 1,
                _ => 2,
            }
    });
    ((basis.len() as u64) << 32) | code
}

/// Single-qubit rotation taking the measured eigenbasis onto Z:
/// X → H; Y → S† followed by H; Z → identity.
fn basis_rotation(c: char) -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    match c {
        'X' => ComplexMatrix::from_real(2, 2, &[h, h, h, -h]),
        // H · S†
        'Y' => ComplexMatrix::from_rows(&[
            vec![C64::new(h, 0.0), C64::new(0.0, -h)],
            vec![C64::new(h, 0.0), C64::new(0.0, h)],
        ]),
        _ => ComplexMatrix::identity(2),
    }
}

/// Born probabilities of each bitstring after rotating into `basis`.
pub fn basis_probabilities(state: &DensityMatrix, basis: &str) -> Result<Vec<f64>, TomoError> {
    validate_basis(basis)?;
    if basis.len() != state.num_qubits() {
        return Err(TomoError::BasisLength {
            basis: basis.to_string(),
            num_qubits: state.num_qubits(),
        });
    }
    let rotations: Vec<ComplexMatrix> = basis.chars().map(basis_rotation).collect();
    let r = kron_all(&rotations);
    let rotated = state.matrix().conjugate_by(&r);
    Ok((0..rotated.rows()).map(|i| rotated[(i, i)].re.max(0.0)).collect())
}

fn bitstring(index: usize, width: usize) -> String {
    (0..width)
        .map(|pos| if (index >> (width - 1 - pos)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Samples `shots` i.i.d. outcomes of measuring every qubit of `state` in `basis`.
pub fn measure_shots(state: &DensityMatrix, basis: &str, shots: u64, seed: u64) -> Result<ShotCounts, TomoError> {
    if shots == 0 {
        return Err(TomoError::ZeroShots);
    }
    let probs = basis_probabilities(state, basis)?;
    let dist = WeightedIndex::new(&probs).map_err(|e| TomoError::Sampling(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(basis_stream(basis));
    let mut tally = vec![0u64; probs.len()];
    for _ in 0..shots {
        tally[dist.sample(&mut rng)] += 1;
    }
    let counts = tally
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(i, &n)| (bitstring(i, basis.len()), n))
        .collect();
    Ok(ShotCounts {
        basis: basis.to_string(),
        shots,
        counts,
    })
}

/// Σ (−1)^parity(outcome) · count / shots over all measured qubits.
pub fn expectation(counts: &ShotCounts) -> Result<f64, TomoError> {
    let mask = "1".repeat(counts.basis.len());
    parity_expectation(counts, &mask)
}

/// Expectation of a Pauli string with identities, estimated from a basis
/// that agrees with it on every non-identity position.
pub fn pauli_expectation(counts: &ShotCounts, pauli: &str) -> Result<f64, TomoError> {
    if pauli.len() != counts.basis.len() {
        return Err(TomoError::IncompatiblePauli {
            pauli: pauli.to_string(),
            basis: counts.basis.clone(),
        });
    }
    let mut mask = String::with_capacity(pauli.len());
    for (p, b) in pauli.chars().zip(counts.basis.chars()) {
        match p {
            'I' => mask.push('0'),
            _ if p == b => mask.push('1'),
            _ => {
                return Err(TomoError::IncompatiblePauli {
                    pauli: pauli.to_string(),
                    basis: counts.basis.clone(),
                })
            }
        }
    }
    parity_expectation(counts, &mask)
}

fn parity_expectation(counts: &ShotCounts, mask: &str) -> Result<f64, TomoError> {
    if counts.shots == 0 {
        return Err(TomoError::ZeroShots);
    }
    let mut acc: i128 = 0;
    for (outcome, &n) in &counts.counts {
        let ones = outcome
            .chars()
            .zip(mask.chars())
            .filter(|&(o, m)| o == '1' && m == '1')
            .count();
        acc += if ones % 2 == 0 { n as i128 } else { -(n as i128) };
    }
    Ok(acc as f64 / counts.shots as f64)
}

/// All 3^n measurement bases over {X, Y, Z}, in lexicographic order.
pub fn measurement_bases(num_qubits: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..num_qubits {
        out = out
            .into_iter()
            .flat_map(|p| ['X', 'Y', 'Z'].into_iter().map(move |c| format!("{p}{c}")))
            .collect();
    }
    out
}

/// All 4^n − 1 non-identity Pauli labels, in lexicographic order over I, X, Y, Z.
pub fn pauli_labels(num_qubits: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..num_qubits {
        out = out
            .into_iter()
            .flat_map(|p| ['I', 'X', 'Y', 'Z'].into_iter().map(move |c| format!("{p}{c}")))
            .collect();
    }
    out.retain(|l| l.chars().any(|c| c != 'I'));
    out
}
