#![allow(dead_code)]

use std::f64::consts::PI;

use nohiding_lab::circuits::{Circuit, Gate};
use nohiding_lab::qmath::{StateVector, C64};
use nohiding_lab::zx::{Node, NodeKind, ZXDiagram};
use rand::Rng;

/// Haar-random qubit: cos θ uniform on [−1, 1], φ uniform on [0, 2π).
pub fn haar_qubit(rng: &mut impl Rng) -> StateVector {
    let cos_t: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let c = ((1.0 + cos_t) / 2.0).sqrt();
    let s = ((1.0 - cos_t) / 2.0).sqrt();
    StateVector::qubit(C64::new(c, 0.0), C64::from_polar(s, phi)).expect("unit norm")
}

/// Random 1–3 qubit circuit over H, X, Y, Z, S, T and CNOT.
pub fn random_supported_circuit(rng: &mut impl Rng) -> Circuit {
    let n = rng.gen_range(1..=3usize);
    let len = rng.gen_range(1..=12usize);
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let q = rng.gen_range(0..n);
        let g = match rng.gen_range(0..7) {
            0 => Gate::h(q),
            1 => Gate::x(q),
            2 => Gate::y(q),
            3 => Gate::z(q),
            4 => Gate::s(q),
            5 => Gate::t(q),
            _ if n > 1 => {
                let t = (q + rng.gen_range(1..n)) % n;
                Gate::cnot(q, t)
            }
            _ => Gate::h(q),
        };
        c.push(g).expect("indices in range");
    }
    c
}

/// Connected diagram with one input, one output and 2–6 interior nodes in a
/// chain, plus a few extra spider–spider edges. Phases are multiples of π/4,
/// zero half the time.
pub fn random_small_diagram(rng: &mut impl Rng) -> ZXDiagram {
    let n = rng.gen_range(2..=6usize);
    let mut nodes = vec![
        (0, Node { kind: NodeKind::Input, phase: 0.0 }),
        (1, Node { kind: NodeKind::Output, phase: 0.0 }),
    ];
    let mut kinds = Vec::with_capacity(n);
    for i in 0..n {
        let kind = match rng.gen_range(0..5) {
            0 | 1 => NodeKind::Z,
            2 | 3 => NodeKind::X,
            _ => NodeKind::HBox,
        };
        let phase = if kind.is_spider() && rng.gen_bool(0.5) { rng.gen_range(1..8) as f64 * PI / 4.0 } else { 0.0 };
        kinds.push(kind);
        nodes.push((i + 2, Node { kind, phase }));
    }
    let mut edges = vec![(0, 2), (n + 1, 1)];
    for i in 2..n + 1 {
        edges.push((i, i + 1));
    }
    for _ in 0..rng.gen_range(0..6) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b && kinds[a].is_spider() && kinds[b].is_spider() {
            edges.push((a + 2, b + 2));
        }
    }
    ZXDiagram::from_parts(nodes, edges, vec![0], vec![1]).expect("generator builds valid diagrams")
}
