use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::circuits::{run_density, Circuit};
use crate::qmath::{fidelity, partial_trace, trace_distance, trace_norm_distance, DensityMatrix, StateVector};
use crate::tomo::{tomo_pipeline, Shots, TomographyReport};

use super::builders::{build_full_circuit, build_imperfect_circuit_with, imperfect_wires, psi_prep_circuit, u3_prep_circuit};
use super::randomizer::{expected_bell_state, Variant};
use super::NohidingError;

/// sin²(kπ/20) for k = 0…10.
pub fn default_grid() -> Vec<f64> {
    (0..=10).map(|k| (k as f64 * PI / 20.0).sin().powi(2)).collect()
}

/// Seed for entry `index` of a run seeded with `seed`. Entry 0 keeps `seed`.
pub fn derive_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// 1 − (1 − p)/2
pub fn fidelity_lower_bound(p: f64) -> f64 {
    1.0 - (1.0 - p) / 2.0
}

/// Tomography of the bleached system qubit, scored against I/2.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SystemTomography {
    /// From the raw (possibly nonphysical) reconstruction.
    pub trace_distance: f64,
    /// From the projected reconstruction.
    pub fidelity: f64,
    pub raw_min_eigenvalue: f64,
}

#[derive(Clone, Debug)]
pub struct ExperimentRecord {
    pub p: f64,
    pub bell_fidelity: f64,
    pub transfer_fidelity: f64,
    pub system_state: DensityMatrix,
    pub trace_distance_to_mixed: f64,
    pub fidelity_to_mixed: f64,
    pub fidelity_lower_bound: f64,
    pub seed: u64,
    pub tomography: SystemTomography,
}

#[derive(Serialize)]
struct RecordJson {
    p: f64,
    trace_distance_exact: f64,
    trace_distance_tomo: f64,
    fidelity_exact: f64,
    fidelity_tomo: f64,
    fidelity_bound: f64,
    raw_min_eigenvalue: f64,
    bell_fidelity: f64,
    transfer_fidelity: f64,
    seed: u64,
}

impl ExperimentRecord {
    fn json(&self) -> RecordJson {
        RecordJson {
            p: self.p,
            trace_distance_exact: self.trace_distance_to_mixed,
            trace_distance_tomo: self.tomography.trace_distance,
            fidelity_exact: self.fidelity_to_mixed,
            fidelity_tomo: self.tomography.fidelity,
            fidelity_bound: self.fidelity_lower_bound,
            raw_min_eigenvalue: self.tomography.raw_min_eigenvalue,
            bell_fidelity: self.bell_fidelity,
            transfer_fidelity: self.transfer_fidelity,
            seed: self.seed,
        }
    }
}

pub const SWEEP_CSV_HEADER: &str =
    "p,trace_distance_exact,trace_distance_tomo,fidelity_exact,fidelity_tomo,fidelity_bound,raw_min_eigenvalue";

/// Seventeen significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sweep_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in records {
        let cols = [
            r.p,
            r.trace_distance_to_mixed,
            r.tomography.trace_distance,
            r.fidelity_to_mixed,
            r.tomography.fidelity,
            r.fidelity_lower_bound,
            r.tomography.raw_min_eigenvalue,
        ];
        let line: Vec<String> = cols.iter().map(|&c| num(c)).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

pub fn sweep_to_json(records: &[ExperimentRecord]) -> String {
    let rows: Vec<RecordJson> = records.iter().map(ExperimentRecord::json).collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("numeric records serialize");
    s.push('\n');
    s
}

fn check_grid(p_values: &[f64]) -> Result<(), NohidingError> {
    match p_values.iter().find(|p| !(0.0..=1.0).contains(*p) || p.is_nan()) {
        Some(&bad) => Err(NohidingError::ProbabilityOutOfRange(bad)),
        None => Ok(()),
    }
}

/// One imperfect-erasure run at strength `p` with the default input state.
pub fn run_point(v: Variant, p: f64, shots: Shots, seed: u64) -> Result<ExperimentRecord, NohidingError> {
    let circuit = psi_prep_circuit(4).then(&build_imperfect_circuit_with(v, p)?)?;
    let out = run_density(&circuit, &[], &StateVector::zero(4).to_density())?;
    let mixed = DensityMatrix::maximally_mixed(1);
    let system = partial_trace(&out, &[imperfect_wires::SYSTEM])?;
    let psi = super::builders::default_psi().to_density();

    let pair = partial_trace(&out, &[imperfect_wires::SYSTEM, imperfect_wires::ANCILLA_1])?;
    let recovered = partial_trace(&out, &[imperfect_wires::ANCILLA_2])?;

    let report = tomo_pipeline(&out, &[imperfect_wires::SYSTEM], shots, seed)?;
    let tomography = SystemTomography {
        trace_distance: trace_norm_distance(&report.raw.matrix, mixed.matrix())?,
        fidelity: fidelity(&report.physical, &mixed)?,
        raw_min_eigenvalue: report.raw.min_eigenvalue,
    };

    Ok(ExperimentRecord {
        p,
        bell_fidelity: fidelity(&pair, &expected_bell_state(v).to_density())?,
        transfer_fidelity: fidelity(&recovered, &psi)?,
        trace_distance_to_mixed: trace_distance(&system, &mixed)?,
        fidelity_to_mixed: fidelity(&system, &mixed)?,
        fidelity_lower_bound: fidelity_lower_bound(p),
        system_state: system,
        seed,
        tomography,
    })
}

/// Independent runs over `p_values`; entry `k` is sampled with
/// `derive_seed(seed, k)`.
pub fn run_sweep(v: Variant, p_values: &[f64], shots: Shots, seed: u64) -> Result<Vec<ExperimentRecord>, NohidingError> {
    check_grid(p_values)?;
    p_values
        .iter()
        .enumerate()
        .map(|(k, &p)| run_point(v, p, shots, derive_seed(seed, k)))
        .collect()
}

/// Erasure + decoding with tomography of the Bell pair and the recovered qubit.
#[derive(Clone, Debug)]
pub struct PerfectReport {
    pub variant: Variant,
    pub shots: Shots,
    pub seed: u64,
    /// Exact-simulation fidelities.
    pub bell_fidelity: f64,
    pub transfer_fidelity: f64,
    /// Reconstructions of qubits {0, 1} and {2}.
    pub bell_tomography: TomographyReport,
    pub transfer_tomography: TomographyReport,
    /// Fidelities of the projected reconstructions with the targets.
    pub bell_fidelity_tomo: f64,
    pub transfer_fidelity_tomo: f64,
}

impl PerfectReport {
    pub fn to_json(&self) -> String {
        let v = serde_json::json!({
            "variant": self.variant,
            "shots": self.shots.to_string(),
            "seed": self.seed,
            "bell_fidelity": self.bell_fidelity,
            "transfer_fidelity": self.transfer_fidelity,
            "bell_fidelity_tomo": self.bell_fidelity_tomo,
            "transfer_fidelity_tomo": self.transfer_fidelity_tomo,
            "bell_tomography": self.bell_tomography.to_json_value(),
            "transfer_tomography": self.transfer_tomography.to_json_value(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("numeric report serializes");
        s.push('\n');
        s
    }
}

/// Runs the three-qubit experiment on `psi` (the H, T, H, S state if `None`).
pub fn run_perfect(v: Variant, psi: Option<&StateVector>, shots: Shots, seed: u64) -> Result<PerfectReport, NohidingError> {
    let (prep, target): (Circuit, StateVector) = match psi {
        None => (psi_prep_circuit(3), super::builders::default_psi()),
        Some(s) => (u3_prep_circuit(s, 3)?, s.clone()),
    };
    let circuit = prep.then(&build_full_circuit(v))?;
    let out = run_density(&circuit, &[], &StateVector::zero(3).to_density())?;
    let bell = expected_bell_state(v).to_density();
    let target = target.to_density();

    let pair = partial_trace(&out, &[0, 1])?;
    let recovered = partial_trace(&out, &[2])?;
    let bell_tomography = tomo_pipeline(&out, &[0, 1], shots, seed)?;
    let transfer_tomography = tomo_pipeline(&out, &[2], shots, derive_seed(seed, 1))?;
    Ok(PerfectReport {
        variant: v,
        shots,
        seed,
        bell_fidelity: fidelity(&pair, &bell)?,
        transfer_fidelity: fidelity(&recovered, &target)?,
        bell_fidelity_tomo: fidelity(&bell_tomography.physical, &bell)?,
        transfer_fidelity_tomo: fidelity(&transfer_tomography.physical, &target)?,
        bell_tomography,
        transfer_tomography,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_contains_quoted_values() {
        let g = default_grid();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert!((g[10] - 1.0).abs() < 1e-15);
        assert!((g[1] - 0.024471742).abs() < 1e-9);
        assert!((g[2] - 0.095491503).abs() < 1e-9);
    }

    #[test]
    fn exact_endpoints() {
        let r = run_sweep(Variant::Eq2, &[0.0, 1.0], Shots::Exact, 0).unwrap();
        assert!((r[0].trace_distance_to_mixed - 0.5).abs() < 1e-12);
        assert!((r[0].fidelity_to_mixed - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(r[1].trace_distance_to_mixed < 1e-12);
        assert!((r[1].fidelity_to_mixed - 1.0).abs() < 1e-12);
        assert!((r[1].bell_fidelity - 1.0).abs() < 1e-12);
        assert!((r[1].transfer_fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quoted_point() {
        let r = run_point(Variant::Eq2, 0.095491503, Shots::Exact, 0).unwrap();
        assert!((r.trace_distance_to_mixed - 0.4522543).abs() < 1e-7);
        assert!((r.tomography.trace_distance - r.trace_distance_to_mixed).abs() < 1e-10);
    }

    #[test]
    fn csv_layout() {
        let r = run_sweep(Variant::Eq2, &[0.5], Shots::Exact, 0).unwrap();
        let csv = sweep_to_csv(&r);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(SWEEP_CSV_HEADER));
        let row: Vec<f64> = lines.next().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(row.len(), 7);
        assert_eq!(row[0], 0.5);
        assert_eq!(row[5], 0.75);
    }

    #[test]
    fn bad_grid() {
        assert!(matches!(
            run_sweep(Variant::Eq2, &[0.1, -0.2], Shots::Exact, 0),
            Err(NohidingError::ProbabilityOutOfRange(p)) if p == -0.2
        ));
    }

    #[test]
    fn perfect_exact() {
        for v in Variant::ALL {
            let r = run_perfect(v, None, Shots::Exact, 0).unwrap();
            assert!((r.bell_fidelity - 1.0).abs() < 1e-10, "{v}");
            assert!((r.transfer_fidelity - 1.0).abs() < 1e-10, "{v}");
            assert!((r.bell_fidelity_tomo - 1.0).abs() < 1e-10, "{v}");
        }
    }

    #[test]
    fn seeds_are_distinct() {
        assert_eq!(derive_seed(42, 0), 42);
        assert_ne!(derive_seed(42, 1), derive_seed(42, 2));
    }
}
