use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::qmath::{fidelity, partial_trace, trace_distance, DensityMatrix};

use super::reconstruct::{exact_expectations, project_physical, reconstruct, TomogramRaw};
use super::sampling::{measure_shots, measurement_bases, pauli_expectation, pauli_labels};
use super::TomoError;

/// Shot budget per measurement basis. `Exact` feeds tr(ρP) straight into the
/// reconstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shots {
    Exact,
    Count(u64),
}

impl std::fmt::Display for Shots {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Shots::Exact => f.write_str("exact"),
            Shots::Count(n) => write!(f, "{n}"),
        }
    }
}

impl std::str::FromStr for Shots {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("exact") {
            return Ok(Shots::Exact);
        }
        match s.parse::<u64>() {
            Ok(0) => Err("shots must be at least 1".into()),
            Ok(n) => Ok(Shots::Count(n)),
            Err(_) => Err(format!("expected a shot count or `exact`, got `{s}`")),
        }
    }
}

/// Estimates every non-identity Pauli expectation of `state`.
///
/// Each of the 3^n bases is sampled once. A label containing `I` is averaged
/// over all bases that agree with it on the non-identity positions.
pub fn estimate_expectations(state: &DensityMatrix, shots: Shots, seed: u64) -> Result<BTreeMap<String, f64>, TomoError> {
    let n = state.num_qubits();
    if !(1..=2).contains(&n) {
        return Err(TomoError::UnsupportedWidth(n));
    }
    let shots = match shots {
        Shots::Exact => return Ok(exact_expectations(state)),
        Shots::Count(0) => return Err(TomoError::ZeroShots),
        Shots::Count(s) => s,
    };
    let counts = measurement_bases(n)
        .into_iter()
        .map(|b| measure_shots(state, &b, shots, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = BTreeMap::new();
    for label in pauli_labels(n) {
        let mut sum = 0.0;
        let mut used = 0usize;
        for c in &counts {
            let compatible = label.chars().zip(c.basis.chars()).all(|(p, b)| p == 'I' || p == b);
            if compatible {
                sum += pauli_expectation(c, &label)?;
                used += 1;
            }
        }
        out.insert(label, sum / used as f64);
    }
    Ok(out)
}

/// Outcome of one tomography run against a known reference state.
#[derive(Clone, Debug)]
pub struct TomographyReport {
    pub raw: TomogramRaw,
    pub physical: DensityMatrix,
    /// Uhlmann fidelity of `physical` with the exact reduced state.
    pub fidelity: f64,
    /// Trace distance of `physical` from the exact reduced state.
    pub trace_distance: f64,
}

#[derive(Serialize)]
struct ReportJson {
    raw_min_eigenvalue: f64,
    fidelity: f64,
    trace_distance: f64,
    matrix_re: Vec<Vec<f64>>,
    matrix_im: Vec<Vec<f64>>,
}

impl TomographyReport {
    /// `{raw_min_eigenvalue, fidelity, trace_distance, matrix_re, matrix_im}`
    /// with the matrices taken from the projected state.
    pub fn to_json_value(&self) -> serde_json::Value {
        let m = self.physical.matrix();
        let rows = 0..m.rows();
        let body = ReportJson {
            raw_min_eigenvalue: self.raw.min_eigenvalue,
            fidelity: self.fidelity,
            trace_distance: self.trace_distance,
            matrix_re: rows.clone().map(|i| m.row(i).iter().map(|z| z.re).collect()).collect(),
            matrix_im: rows.map(|i| m.row(i).iter().map(|z| z.im).collect()).collect(),
        };
        serde_json::to_value(body).expect("plain numeric fields serialize")
    }
}

/// Reduces `state` to `qubits`, samples every basis, reconstructs, projects
/// and scores the result against the exact reduced state.
pub fn tomo_pipeline(state: &DensityMatrix, qubits: &[usize], shots: Shots, seed: u64) -> Result<TomographyReport, TomoError> {
    if !(1..=2).contains(&qubits.len()) {
        return Err(TomoError::UnsupportedWidth(qubits.len()));
    }
    let reduced = partial_trace(state, qubits)?;
    let expectations = estimate_expectations(&reduced, shots, seed)?;
    let raw = reconstruct(&expectations, qubits.len())?;
    let physical = project_physical(&raw)?;
    Ok(TomographyReport {
        fidelity: fidelity(&physical, &reduced)?,
        trace_distance: trace_distance(&physical, &reduced)?,
        raw,
        physical,
    })
}
