use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::circuits::{Circuit, GateKind};

use super::diagram::{NodeKind, ZXDiagram};
use super::ZxError;

/// Translation together with the node ids created for each gate, in gate
/// order. CNOT contributes `[control, target]`; SWAP contributes nothing.
pub fn circuit_to_zx_with_map(c: &Circuit) -> Result<(ZXDiagram, Vec<Vec<usize>>), ZxError> {
    let mut d = ZXDiagram::new();
    let mut frontier: Vec<usize> = (0..c.num_qubits()).map(|_| d.add_input()).collect();
    let mut created = Vec::with_capacity(c.len());

    let single = |d: &mut ZXDiagram, frontier: &mut Vec<usize>, q: usize, kind: NodeKind, phase: f64| -> usize {
        let n = d.add_node(kind, phase);
        d.add_edge(frontier[q], n);
        frontier[q] = n;
        n
    };

    for g in c.gates() {
        let t = &g.targets;
        let ids = match &g.kind {
            GateKind::H => vec![single(&mut d, &mut frontier, t[0], NodeKind::HBox, 0.0)],
            GateKind::Z => vec![single(&mut d, &mut frontier, t[0], NodeKind::Z, PI)],
            GateKind::S => vec![single(&mut d, &mut frontier, t[0], NodeKind::Z, FRAC_PI_2)],
            GateKind::T => vec![single(&mut d, &mut frontier, t[0], NodeKind::Z, FRAC_PI_4)],
            GateKind::X => vec![single(&mut d, &mut frontier, t[0], NodeKind::X, PI)],
            // X·Z = −iY
            GateKind::Y => vec![
                single(&mut d, &mut frontier, t[0], NodeKind::Z, PI),
                single(&mut d, &mut frontier, t[0], NodeKind::X, PI),
            ],
            GateKind::Cnot => {
                let ctrl = single(&mut d, &mut frontier, t[0], NodeKind::Z, 0.0);
                let tgt = single(&mut d, &mut frontier, t[1], NodeKind::X, 0.0);
                d.add_edge(ctrl, tgt);
                vec![ctrl, tgt]
            }
            GateKind::Swap => {
                frontier.swap(t[0], t[1]);
                vec![]
            }
            k => return Err(ZxError::Untranslatable(k.mnemonic().to_string())),
        };
        created.push(ids);
    }
    for f in frontier {
        let o = d.add_output();
        d.add_edge(f, o);
    }
    d.validate()?;
    Ok((d, created))
}

/// Spiders for Z-axis phases (Z, S, T) and X, H-boxes for H, a green–red
/// pair for CNOT. SWAP only crosses wires. Other gates are rejected.
pub fn circuit_to_zx(c: &Circuit) -> Result<ZXDiagram, ZxError> {
    circuit_to_zx_with_map(c).map(|(d, _)| d)
}
