use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::ZxError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    /// Green spider.
    Z,
    /// Red spider.
    X,
    #[serde(rename = "hbox")]
    HBox,
    Input,
    Output,
}

impl NodeKind {
    pub fn is_spider(self) -> bool {
        matches!(self, NodeKind::Z | NodeKind::X)
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, NodeKind::Input | NodeKind::Output)
    }

    pub fn toggled(self) -> Self {
        match self {
            NodeKind::Z => NodeKind::X,
            NodeKind::X => NodeKind::Z,
            k => k,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    /// Radians in [0, 2π); always 0 for non-spiders.
    pub phase: f64,
}

/// Reduces a phase to [0, 2π), snapping values within 1e-12 of 2π to 0.
pub fn normalize_phase(phase: f64) -> f64 {
    let r = phase.rem_euclid(TAU);
    if TAU - r < 1e-12 {
        0.0
    } else {
        r
    }
}

pub fn phase_is_zero(phase: f64) -> bool {
    let r = normalize_phase(phase);
    r < 1e-12 || TAU - r < 1e-12
}

/// Open graph of spiders, H-boxes and boundaries. Edges form a multiset of
/// unordered pairs, stored sorted.
#[derive(Clone, Debug)]
pub struct ZXDiagram {
    nodes: BTreeMap<usize, Node>,
    edges: Vec<(usize, usize)>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    next_id: usize,
}

/// Structural equality; the id allocator is not compared.
impl PartialEq for ZXDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges && self.inputs == other.inputs && self.outputs == other.outputs
    }
}

impl Default for ZXDiagram {
    fn default() -> Self {
        Self::new()
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl ZXDiagram {
    pub fn new() -> Self {
        Self {
            nodes: BTreeMap::new(),
            edges: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            next_id: 0,
        }
    }

    /// Builds and validates a diagram from explicit parts.
    pub fn from_parts(
        nodes: impl IntoIterator<Item = (usize, Node)>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
    ) -> Result<Self, ZxError> {
        let nodes: BTreeMap<usize, Node> = nodes
            .into_iter()
            .map(|(id, n)| {
                let phase = if n.kind.is_spider() { normalize_phase(n.phase) } else { 0.0 };
                (id, Node { kind: n.kind, phase })
            })
            .collect();
        let next_id = nodes.keys().next_back().map_or(0, |k| k + 1);
        let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| ordered(a, b)).collect();
        edges.sort_unstable();
        let d = Self {
            nodes,
            edges,
            inputs,
            outputs,
            next_id,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), ZxError> {
        let bad = |msg: String| Err(ZxError::InvalidDiagram(msg));
        for &(a, b) in &self.edges {
            for id in [a, b] {
                if !self.nodes.contains_key(&id) {
                    return bad(format!("edge references missing node {id}"));
                }
            }
            if a == b {
                return bad(format!("self-loop on node {a}"));
            }
        }
        for (&id, n) in &self.nodes {
            let deg = self.degree(id);
            match n.kind {
                NodeKind::Input | NodeKind::Output if deg != 1 => {
                    return bad(format!("boundary {id} has degree {deg}"));
                }
                NodeKind::HBox if deg != 2 => return bad(format!("H-box {id} has degree {deg}")),
                _ => {}
            }
        }
        let mut seen = BTreeSet::new();
        let listed = self
            .inputs
            .iter()
            .map(|&i| (i, NodeKind::Input))
            .chain(self.outputs.iter().map(|&o| (o, NodeKind::Output)));
        for (id, want) in listed {
            match self.nodes.get(&id) {
                Some(n) if n.kind == want => {}
                _ => return bad(format!("boundary list entry {id} is not a {want:?} node")),
            }
            if !seen.insert(id) {
                return bad(format!("boundary {id} listed twice"));
            }
        }
        let listed = seen.len();
        let boundaries = self.nodes.values().filter(|n| n.kind.is_boundary()).count();
        if listed != boundaries {
            return bad("boundary node missing from inputs/outputs".into());
        }
        Ok(())
    }

    pub fn nodes(&self) -> &BTreeMap<usize, Node> {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> Result<Node, ZxError> {
        self.nodes.get(&id).copied().ok_or(ZxError::UnknownNode(id))
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn count_kind(&self, kind: NodeKind) -> usize {
        self.nodes.values().filter(|n| n.kind == kind).count()
    }

    pub fn degree(&self, id: usize) -> usize {
        self.edges.iter().map(|&(a, b)| usize::from(a == id) + usize::from(b == id)).sum()
    }

    /// Neighbours of `id` with multiplicity, sorted.
    pub fn neighbors(&self, id: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == id {
                    Some(b)
                } else if b == id {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn edge_multiplicity(&self, a: usize, b: usize) -> usize {
        let e = ordered(a, b);
        self.edges.iter().filter(|&&x| x == e).count()
    }

    // Mutators below keep the edge list sorted but do not re-validate; rule
    // code calls `validate` once the rewrite is complete.

    pub(crate) fn add_node(&mut self, kind: NodeKind, phase: f64) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        let phase = if kind.is_spider() { normalize_phase(phase) } else { 0.0 };
        self.nodes.insert(id, Node { kind, phase });
        id
    }

    pub(crate) fn add_input(&mut self) -> usize {
        let id = self.add_node(NodeKind::Input, 0.0);
        self.inputs.push(id);
        id
    }

    pub(crate) fn add_output(&mut self) -> usize {
        let id = self.add_node(NodeKind::Output, 0.0);
        self.outputs.push(id);
        id
    }

    pub(crate) fn add_edge(&mut self, a: usize, b: usize) {
        let e = ordered(a, b);
        let pos = self.edges.partition_point(|&x| x < e);
        self.edges.insert(pos, e);
    }

    /// Removes one copy of the edge; returns whether it existed.
    pub(crate) fn remove_edge(&mut self, a: usize, b: usize) -> bool {
        let e = ordered(a, b);
        match self.edges.iter().position(|&x| x == e) {
            Some(i) => {
                self.edges.remove(i);
                true
            }
            None => false,
        }
    }

    /// Removes the node and every incident edge.
    pub(crate) fn remove_node(&mut self, id: usize) {
        self.nodes.remove(&id);
        self.edges.retain(|&(a, b)| a != id && b != id);
        self.inputs.retain(|&i| i != id);
        self.outputs.retain(|&o| o != id);
    }

    pub(crate) fn set_node(&mut self, id: usize, kind: NodeKind, phase: f64) {
        let phase = if kind.is_spider() { normalize_phase(phase) } else { 0.0 };
        self.nodes.insert(id, Node { kind, phase });
    }

    /// Drops self-loops on spiders. Exact (scalar 1) for both colours under
    /// the spider normalization used by `evaluate`.
    pub(crate) fn eliminate_self_loops(&mut self) {
        self.edges.retain(|&(a, b)| a != b);
    }

    /// Turns input `index` into a 1-leg red spider, i.e. plugs |0⟩ (times √2).
    pub fn plug_input_zero(&mut self, index: usize) -> Result<usize, ZxError> {
        let id = *self
            .inputs
            .get(index)
            .ok_or_else(|| ZxError::InvalidDiagram(format!("no input {index}")))?;
        self.inputs.remove(index);
        self.set_node(id, NodeKind::X, 0.0);
        Ok(id)
    }

    /// Node sets of the connected components, each sorted, in order of their
    /// smallest id.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.nodes.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = vec![start];
            seen.insert(start);
            let mut i = 0;
            while i < comp.len() {
                for n in self.neighbors(comp[i]) {
                    if seen.insert(n) {
                        comp.push(n);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.components().iter().any(|c| c.contains(&a) && c.contains(&b))
    }

    /// Whether `to` is reachable from `from` without passing through `avoid`.
    pub fn reachable_avoiding(&self, from: usize, to: usize, avoid: &[usize]) -> bool {
        let mut seen: BTreeSet<usize> = avoid.iter().copied().collect();
        if seen.contains(&from) {
            return false;
        }
        let mut stack = vec![from];
        seen.insert(from);
        while let Some(n) = stack.pop() {
            if n == to {
                return true;
            }
            for m in self.neighbors(n) {
                if seen.insert(m) {
                    stack.push(m);
                }
            }
        }
        false
    }

    /// Renames every node through `map`, which must be injective on the
    /// current ids.
    pub fn relabel(&self, map: &BTreeMap<usize, usize>) -> Result<Self, ZxError> {
        let get = |id: usize| map.get(&id).copied().ok_or(ZxError::UnknownNode(id));
        let nodes = self
            .nodes
            .iter()
            .map(|(&id, &n)| Ok((get(id)?, n)))
            .collect::<Result<Vec<_>, ZxError>>()?;
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| Ok((get(a)?, get(b)?)))
            .collect::<Result<Vec<_>, ZxError>>()?;
        let inputs = self.inputs.iter().map(|&i| get(i)).collect::<Result<_, _>>()?;
        let outputs = self.outputs.iter().map(|&o| get(o)).collect::<Result<_, _>>()?;
        if nodes.iter().map(|(id, _)| id).collect::<BTreeSet<_>>().len() != nodes.len() {
            return Err(ZxError::InvalidDiagram("relabelling is not injective".into()));
        }
        Self::from_parts(nodes, edges, inputs, outputs)
    }

    /// Relabels nodes 0…n−1 by a structure-only ordering: boundaries first in
    /// list order, then breadth-first with ties broken by colour refinement.
    /// Diagrams that differ only in node ids and edge order map to the same
    /// canonical diagram (up to automorphism, which does not change it).
    pub fn canonicalize(&self) -> Self {
        let ids: Vec<usize> = self.nodes.keys().copied().collect();
        let pos: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let adj: Vec<Vec<usize>> = ids.iter().map(|&id| self.neighbors(id).iter().map(|n| pos[n]).collect()).collect();

        // Initial colours from node kind, quantized phase and boundary slot.
        let mut colour: Vec<String> = ids
            .iter()
            .map(|&id| {
                let n = self.nodes[&id];
                let slot = match n.kind {
                    NodeKind::Input => self.inputs.iter().position(|&x| x == id).map(|p| p as i64).unwrap_or(-1),
                    NodeKind::Output => self.outputs.iter().position(|&x| x == id).map(|p| p as i64).unwrap_or(-1),
                    _ => -1,
                };
                format!("{:?}|{:.9}|{}", n.kind, n.phase, slot)
            })
            .collect();

        let refine = |colour: &mut Vec<String>| loop {
            let classes_before = colour.iter().collect::<BTreeSet<_>>().len();
            let signatures: Vec<String> = (0..colour.len())
                .map(|i| {
                    let mut nb: Vec<&str> = adj[i].iter().map(|&j| colour[j].as_str()).collect();
                    nb.sort_unstable();
                    format!("{}[{}]", colour[i], nb.join(","))
                })
                .collect();
            let ranks: BTreeMap<&String, usize> = signatures
                .iter()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .enumerate()
                .map(|(r, s)| (s, r))
                .collect();
            let next: Vec<String> = signatures.iter().map(|s| format!("c{}", ranks[s])).collect();
            let classes_after = next.iter().collect::<BTreeSet<_>>().len();
            *colour = next;
            if classes_after == classes_before {
                break;
            }
        };

        refine(&mut colour);
        // Individualize until every class is a singleton.
        loop {
            let mut counts: BTreeMap<&String, usize> = BTreeMap::new();
            for c in &colour {
                *counts.entry(c).or_default() += 1;
            }
            let Some(tied) = counts.iter().find(|(_, &n)| n > 1).map(|(c, _)| (*c).clone()) else {
                break;
            };
            let pick = colour.iter().position(|c| *c == tied).expect("class is nonempty");
            colour[pick] = format!("{tied}*");
            refine(&mut colour);
        }

        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.sort_by(|&a, &b| colour[a].cmp(&colour[b]));
        let map: BTreeMap<usize, usize> = order.iter().enumerate().map(|(new, &old)| (ids[old], new)).collect();
        self.relabel(&map).expect("permutation of valid diagram")
    }
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    kind: NodeKind,
    phase: f64,
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    nodes: Vec<NodeJson>,
    edges: Vec<[usize; 2]>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl ZXDiagram {
    pub fn to_json_value(&self) -> serde_json::Value {
        let body = DiagramJson {
            nodes: self
                .nodes
                .iter()
                .map(|(&id, n)| NodeJson {
                    id,
                    kind: n.kind,
                    phase: n.phase,
                })
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
        };
        serde_json::to_value(body).expect("diagram fields serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("diagram fields serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ZxError> {
        let body: DiagramJson = serde_json::from_str(text).map_err(|e| ZxError::Json(e.to_string()))?;
        Self::from_parts(
            body.nodes.into_iter().map(|n| {
                (
                    n.id,
                    Node {
                        kind: n.kind,
                        phase: n.phase,
                    },
                )
            }),
            body.edges.into_iter().map(|[a, b]| (a, b)),
            body.inputs,
            body.outputs,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wire_through_spider() -> ZXDiagram {
        let mut d = ZXDiagram::new();
        let i = d.add_input();
        let s = d.add_node(NodeKind::Z, 0.5);
        let o = d.add_output();
        d.add_edge(i, s);
        d.add_edge(s, o);
        d
    }

    #[test]
    fn validation_catches_bad_degree() {
        let mut d = wire_through_spider();
        assert!(d.validate().is_ok());
        let h = d.add_node(NodeKind::HBox, 0.0);
        d.add_edge(h, 1);
        assert!(d.validate().is_err());
    }

    #[test]
    fn self_loops_rejected() {
        let nodes = [(0, Node { kind: NodeKind::Z, phase: 0.0 })];
        assert!(ZXDiagram::from_parts(nodes, [(0, 0)], vec![], vec![]).is_err());
    }

    #[test]
    fn phase_normalization() {
        assert_eq!(normalize_phase(-std::f64::consts::PI), std::f64::consts::PI);
        assert_eq!(normalize_phase(TAU - 1e-14), 0.0);
        assert!(phase_is_zero(4.0 * std::f64::consts::PI));
    }

    #[test]
    fn json_round_trip() {
        let d = wire_through_spider();
        let back = ZXDiagram::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn canonical_form_ignores_ids() {
        let d = wire_through_spider();
        let map: BTreeMap<usize, usize> = [(0, 7), (1, 3), (2, 11)].into();
        let r = d.relabel(&map).unwrap();
        assert_ne!(r, d);
        assert_eq!(r.canonicalize(), d.canonicalize());
    }
}
