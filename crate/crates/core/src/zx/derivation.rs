//! The hand-scripted rewrite sequence showing that the erased qubit ends up
//! in the ancillas, plus the translated EQ6 erase-and-decode circuit used by
//! the automatic simplifier.

use std::f64::consts::FRAC_PI_4;

use crate::circuits::{circuit_unitary, run_statevector, Circuit, Gate};
use crate::nohiding::{decoder_gates, default_psi, Variant};
use crate::qmath::{fidelity, partial_trace, trace_distance, ComplexMatrix, DensityMatrix, StateVector, C64};

use super::diagram::{normalize_phase, ZXDiagram};
use super::eval::{evaluate, proportionality, scaled_deviation};
use super::rules::{apply_rule, match_rule, Location, RewriteStep, Rule, StepJson};
use super::translate::circuit_to_zx_with_map;
use super::ZxError;

const CHECK_TOLERANCE: f64 = 1e-9;

/// Ancilla preparation and the randomizer as drawn: H on both ancillas, then
/// CX(1,0), CX(2,0) and a CX(1,0) conjugated by H on the system.
pub fn derivation_circuit() -> Circuit {
    Circuit::from_gates(
        3,
        vec![
            Gate::h(1),
            Gate::h(2),
            Gate::cnot(1, 0),
            Gate::cnot(2, 0),
            Gate::h(0),
            Gate::cnot(1, 0),
            Gate::h(0),
        ],
    )
    .expect("static three-qubit circuit")
}

/// EQ6 erasure followed by its decoder, in gates the translation accepts.
pub fn eq6_full_circuit() -> Circuit {
    let mut gates = vec![
        Gate::h(1),
        Gate::h(2),
        Gate::h(0),
        Gate::cnot(1, 0),
        Gate::h(0),
        Gate::cnot(1, 0),
        Gate::cnot(2, 0),
    ];
    gates.extend(decoder_gates(Variant::Eq6, 1, 2));
    Circuit::from_gates(3, gates).expect("static three-qubit circuit")
}

/// Columns of the circuit unitary with both ancillas in |0⟩.
fn ancilla_zero_columns(c: &Circuit) -> Result<ComplexMatrix, ZxError> {
    let u = circuit_unitary(c).map_err(|e| ZxError::InvalidDiagram(e.to_string()))?;
    let mut m = ComplexMatrix::zeros(8, 2);
    for r in 0..8 {
        for j in 0..2 {
            m[(r, j)] = u[(r, 4 * j)];
        }
    }
    Ok(m)
}

/// Translates `c` and plugs |0⟩ into inputs 1 and 2, checking the result
/// against the circuit's own unitary.
fn translate_with_ancillas(c: &Circuit) -> Result<(ZXDiagram, Vec<Vec<usize>>), ZxError> {
    let (mut d, map) = circuit_to_zx_with_map(c)?;
    d.plug_input_zero(2)?;
    d.plug_input_zero(1)?;
    let want = ancilla_zero_columns(c)?;
    match proportionality(&want, &evaluate(&d)?) {
        Some((_, dev)) if dev < CHECK_TOLERANCE => Ok((d, map)),
        _ => Err(ZxError::InvalidDiagram("translation disagrees with the circuit".into())),
    }
}

/// One input (the system) and three outputs (system, ancilla 1, ancilla 2).
pub fn derivation_diagram() -> Result<ZXDiagram, ZxError> {
    translate_with_ancillas(&derivation_circuit()).map(|(d, _)| d)
}

pub fn eq6_full_diagram() -> Result<ZXDiagram, ZxError> {
    translate_with_ancillas(&eq6_full_circuit()).map(|(d, _)| d)
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub label: &'static str,
    pub steps: Vec<RewriteStep>,
    /// Diagram after the stage.
    pub diagram: ZXDiagram,
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub initial: ZXDiagram,
    pub stages: Vec<Stage>,
}

impl Derivation {
    pub fn steps(&self) -> Vec<RewriteStep> {
        self.stages.iter().flat_map(|s| s.steps.iter().cloned()).collect()
    }

    pub fn final_diagram(&self) -> &ZXDiagram {
        self.stages.last().map_or(&self.initial, |s| &s.diagram)
    }

    pub fn scalar(&self) -> C64 {
        self.stages.iter().flat_map(|s| &s.steps).map(|s| s.scalar_check).product()
    }
}

struct Script {
    cur: ZXDiagram,
    steps: Vec<RewriteStep>,
    stage: usize,
}

impl Script {
    fn apply(&mut self, rule: Rule, loc: Location) -> Result<(), ZxError> {
        let (next, step) = apply_rule(&self.cur, rule, &loc).map_err(|e| ZxError::StageFailed {
            stage: self.stage,
            reason: e.to_string(),
        })?;
        self.cur = next;
        self.steps.push(step);
        Ok(())
    }

    /// Colour change at `s`, then cancel every H-box pair touching `s`.
    fn colour_change(&mut self, s: usize) -> Result<(), ZxError> {
        self.apply(Rule::C, Location::at([s]))?;
        loop {
            let near = self.cur.neighbors(s);
            let hit = match_rule(&self.cur, Rule::HH)
                .into_iter()
                .find(|l| l.nodes.iter().any(|n| near.contains(n)));
            match hit {
                Some(loc) => self.apply(Rule::HH, loc)?,
                None => return Ok(()),
            }
        }
    }
}

fn check_stage(stage: usize, before: &ZXDiagram, s: &Stage) -> Result<(), ZxError> {
    let fail = |reason: String| ZxError::StageFailed { stage, reason };
    let scalar: C64 = s.steps.iter().map(|st| st.scalar_check).product();
    let a = evaluate(before).map_err(|e| fail(e.to_string()))?;
    let b = evaluate(&s.diagram).map_err(|e| fail(e.to_string()))?;
    let dev = scaled_deviation(&a, &b, scalar);
    if dev > CHECK_TOLERANCE {
        return Err(fail(format!("value changed by {dev:e} beyond the tracked scalar")));
    }
    Ok(())
}

/// Structural and semantic checks on the end of the derivation. `split` is
/// the spider left holding −π/4 next to the input, `half` the new π/4
/// spider and `branch` the spider feeding the system output.
fn check_final(stage: usize, d: &ZXDiagram, split: usize, half: usize, branch: usize) -> Result<(), ZxError> {
    let fail = |reason: &str| ZxError::StageFailed {
        stage,
        reason: reason.to_string(),
    };
    let psi_in = d.inputs()[0];
    let [sys_out, a1_out, a2_out] = d.outputs()[..] else {
        return Err(fail("expected three outputs"));
    };
    if d.neighbors(psi_in) != [split] || d.edge_multiplicity(split, half) != 1 {
        return Err(fail("input does not feed the split spider pair"));
    }
    if !d.connected(psi_in, a1_out) || !d.connected(psi_in, a2_out) {
        return Err(fail("input is not connected to both ancilla outputs"));
    }
    if d.reachable_avoiding(psi_in, sys_out, &[branch]) {
        return Err(fail("system output reachable without its branch spider"));
    }
    if !d.reachable_avoiding(half, a1_out, &[split, branch]) || !d.reachable_avoiding(half, a2_out, &[split, branch]) {
        return Err(fail("ancilla outputs hang off the system branch"));
    }
    if (normalize_phase(-FRAC_PI_4) - d.node(split)?.phase).abs() > 1e-12 {
        return Err(fail("split spider does not hold -pi/4"));
    }
    let p = d.node(half)?.phase;
    if (p - FRAC_PI_4).abs() > 1e-12 {
        return Err(fail("unfused phase is not pi/4"));
    }

    let m = evaluate(d)?;
    let psi = default_psi();
    let out = StateVector::normalized(m.apply(psi.amplitudes())).map_err(|e| fail(&e.to_string()))?;
    let sys = partial_trace(&out.to_density(), &[0]).map_err(|e| fail(&e.to_string()))?;
    let td = trace_distance(&sys, &DensityMatrix::maximally_mixed(1)).map_err(|e| fail(&e.to_string()))?;
    if td > CHECK_TOLERANCE {
        return Err(fail("system output is not maximally mixed"));
    }
    let decoder = Circuit::from_gates(3, decoder_gates(Variant::Eq1, 1, 2)).expect("decoder on three qubits");
    let decoded = run_statevector(&decoder, &out).map_err(|e| fail(&e.to_string()))?;
    let recovered = partial_trace(&decoded.to_density(), &[2]).map_err(|e| fail(&e.to_string()))?;
    let f = fidelity(&recovered, &psi.to_density()).map_err(|e| fail(&e.to_string()))?;
    if (1.0 - f).abs() > CHECK_TOLERANCE {
        return Err(fail("decoder does not recover the input from the ancillas"));
    }
    Ok(())
}

/// Seven scripted stages from the translated circuit to a diagram in which
/// the input feeds a phase-split red spider whose second half connects only
/// to the ancilla outputs. Every stage is checked against tensor evaluation;
/// a failed check aborts with `StageFailed`.
pub fn scripted_derivation() -> Result<Derivation, ZxError> {
    let (initial, map) = translate_with_ancillas(&derivation_circuit())?;
    let (z_a, x_a) = (map[2][0], map[2][1]);
    let (z_b, x_b) = (map[3][0], map[3][1]);
    let (z_c, x_c) = (map[5][0], map[5][1]);
    let (prep1, prep2) = (1, 2);
    let sys_out = initial.outputs()[0];
    let a2_out = initial.outputs()[2];

    type StageScript = Box<dyn Fn(&mut Script) -> Result<(), ZxError>>;
    let script: Vec<(&'static str, StageScript)> = vec![
        (
            "C",
            Box::new(move |s| {
                s.colour_change(x_c)?;
                s.colour_change(prep1)?;
                s.colour_change(prep2)
            }),
        ),
        (
            "S1",
            Box::new(move |s| {
                s.apply(Rule::S1, Location::at([z_a, prep1]))?;
                s.apply(Rule::S1, Location::at([z_b, prep2]))
            }),
        ),
        ("S1", Box::new(move |s| s.apply(Rule::S1, Location::at([x_a, x_b])))),
        ("S1", Box::new(move |s| s.apply(Rule::S1, Location::at([z_a, z_c])))),
        ("T", Box::new(move |s| s.apply(Rule::S2, Location::at([z_b])))),
        ("T,S1", Box::new(move |s| s.apply(Rule::S1, Location::unfuse(x_c, &[sys_out], 0.0)))),
        (
            "S1",
            Box::new(move |s| s.apply(Rule::S1, Location::unfuse(x_a, &[z_a, a2_out], FRAC_PI_4))),
        ),
    ];

    let mut stages = Vec::with_capacity(script.len());
    let mut before = initial.clone();
    for (i, (label, run)) in script.iter().enumerate() {
        let mut s = Script {
            cur: before.clone(),
            steps: Vec::new(),
            stage: i + 1,
        };
        run(&mut s)?;
        let stage = Stage {
            label,
            steps: s.steps,
            diagram: s.cur,
        };
        check_stage(i + 1, &before, &stage)?;
        before = stage.diagram.clone();
        stages.push(stage);
    }

    let last = &stages.last().expect("seven stages").diagram;
    let new_spider = *last.nodes().keys().next_back().expect("nonempty diagram");
    check_final(stages.len(), last, x_a, new_spider, x_c)?;
    Ok(Derivation { initial, stages })
}

/// Re-applies `steps` to `initial`, checking each recorded scalar.
pub fn replay(initial: &ZXDiagram, steps: &[RewriteStep]) -> Result<ZXDiagram, ZxError> {
    let mut cur = initial.clone();
    for step in steps {
        let (next, got) = apply_rule(&cur, step.rule, &step.location)?;
        if (got.scalar_check - step.scalar_check).norm() > 1e-12 {
            return Err(ZxError::PatternMismatch {
                rule: step.rule,
                reason: format!("recorded scalar {} but rule gives {}", step.scalar_check, got.scalar_check),
            });
        }
        cur = next;
    }
    Ok(cur)
}

pub fn steps_to_json(steps: &[RewriteStep]) -> String {
    let rows: Vec<StepJson> = steps.iter().map(StepJson::from).collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("steps serialize");
    s.push('\n');
    s
}

pub fn steps_from_json(text: &str) -> Result<Vec<RewriteStep>, ZxError> {
    let rows: Vec<StepJson> = serde_json::from_str(text).map_err(|e| ZxError::Json(e.to_string()))?;
    Ok(rows.into_iter().map(RewriteStep::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nohiding::{build_randomizer, expected_bell_state};
    use crate::qmath::kron;
    use crate::zx::diagram::NodeKind;
    use crate::zx::simplify::verified_simplify;

    fn randomizer_on_plus(v: Variant) -> ComplexMatrix {
        let h = crate::circuits::Gate::h(0).local_matrix();
        let prep = kron(&ComplexMatrix::identity(2), &kron(&h, &h));
        let u = build_randomizer(v).matrix.matmul(&prep);
        let mut m = ComplexMatrix::zeros(8, 2);
        for r in 0..8 {
            for j in 0..2 {
                m[(r, j)] = u[(r, 4 * j)];
            }
        }
        m
    }

    #[test]
    fn drawn_diagram_is_the_plus_iy_randomizer() {
        let m = evaluate(&derivation_diagram().unwrap()).unwrap();
        let (_, dev) = proportionality(&randomizer_on_plus(Variant::Eq1), &m).unwrap();
        assert!(dev < 1e-12);
        assert!(proportionality(&randomizer_on_plus(Variant::Eq6), &m).unwrap().1 > 0.1);
    }

    #[test]
    fn corrected_randomizer_gates() {
        let gates = eq6_full_circuit().gates()[2..7].to_vec();
        let u = circuit_unitary(&Circuit::from_gates(3, gates).unwrap()).unwrap();
        assert!(u.approx_eq(&build_randomizer(Variant::Eq6).matrix, 1e-12));
    }

    #[test]
    fn derivation_runs_and_ends_split() {
        let d = scripted_derivation().unwrap();
        assert_eq!(d.stages.len(), 7);
        let labels: Vec<&str> = d.stages.iter().map(|s| s.label).collect();
        assert_eq!(labels, ["C", "S1", "S1", "S1", "T", "T,S1", "S1"]);
        let last = d.final_diagram();
        assert_eq!(last.count_kind(NodeKind::HBox), 1);
        let dev = scaled_deviation(&evaluate(&d.initial).unwrap(), &evaluate(last).unwrap(), d.scalar());
        assert!(dev < 1e-12);
    }

    #[test]
    fn replay_reproduces_final() {
        let d = scripted_derivation().unwrap();
        let steps = steps_from_json(&steps_to_json(&d.steps())).unwrap();
        assert_eq!(&replay(&d.initial, &steps).unwrap(), d.final_diagram());
    }

    #[test]
    fn replay_rejects_tampered_scalar() {
        let d = scripted_derivation().unwrap();
        let mut steps = d.steps();
        steps[0].scalar_check = C64::new(2.0, 0.0);
        assert!(matches!(replay(&d.initial, &steps), Err(ZxError::PatternMismatch { .. })));
    }

    #[test]
    fn eq6_round_trip_simplifies_proportionally() {
        let d = eq6_full_diagram().unwrap();
        let s = verified_simplify(&d);
        assert!(s.stopped.is_none(), "{:?}", s.stopped);
        assert!(s.diagram.num_nodes() < d.num_nodes());
        let m = evaluate(&s.diagram).unwrap();
        let (_, dev) = proportionality(&ancilla_zero_columns(&eq6_full_circuit()).unwrap(), &m).unwrap();
        assert!(dev < 1e-10);

        let psi = default_psi();
        let out = StateVector::normalized(m.apply(psi.amplitudes())).unwrap();
        let rho = out.to_density();
        let pair = partial_trace(&rho, &[0, 1]).unwrap();
        let bell = expected_bell_state(Variant::Eq6).to_density();
        assert!((fidelity(&pair, &bell).unwrap() - 1.0).abs() < 1e-10);
        let rec = partial_trace(&rho, &[2]).unwrap();
        assert!((fidelity(&rec, &psi.to_density()).unwrap() - 1.0).abs() < 1e-10);
    }
}
