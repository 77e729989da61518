//! Local rewrites. Each application returns the rewritten diagram and the
//! scalar `s` with `evaluate(after) = s · evaluate(before)`.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qmath::C64;

use super::diagram::{NodeKind, ZXDiagram};
use super::ZxError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// Spider fusion, or unfusion when a phase is given.
    S1,
    /// Removal of a phase-free 2-leg spider.
    S2,
    /// Colour change: toggle a spider and put an H-box on every leg.
    C,
    /// Bialgebra, either direction.
    B2,
    /// Cancellation of two adjacent H-boxes.
    HH,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::S1 => "S1",
            Rule::S2 => "S2",
            Rule::C => "C",
            Rule::B2 => "B2",
            Rule::HH => "HH",
        };
        f.write_str(s)
    }
}

/// Where a rule applies.
///
/// | rule | `nodes` | `phase` |
/// |------|---------|---------|
/// | S1 fuse | `[keep, absorbed]` | `None` |
/// | S1 unfuse | `[spider, leg neighbours…]` | `Some(β)`, given to the new spider |
/// | S2 | `[spider]` | |
/// | C | `[spider]` | |
/// | HH | `[h1, h2]` | |
/// | B2 forward | `[z, x]` | |
/// | B2 reverse | `[z1, z2, x1, x2]` | |
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub nodes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
}

impl Location {
    pub fn at(nodes: impl Into<Vec<usize>>) -> Self {
        Self {
            nodes: nodes.into(),
            phase: None,
        }
    }

    pub fn unfuse(spider: usize, legs: &[usize], phase: f64) -> Self {
        let mut nodes = vec![spider];
        nodes.extend_from_slice(legs);
        Self {
            nodes,
            phase: Some(phase),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteStep {
    pub rule: Rule,
    pub location: Location,
    pub scalar_check: C64,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct StepJson {
    pub rule: Rule,
    pub location: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    pub scalar_re: f64,
    pub scalar_im: f64,
}

impl From<&RewriteStep> for StepJson {
    fn from(s: &RewriteStep) -> Self {
        StepJson {
            rule: s.rule,
            location: s.location.nodes.clone(),
            phase: s.location.phase,
            scalar_re: s.scalar_check.re,
            scalar_im: s.scalar_check.im,
        }
    }
}

impl From<StepJson> for RewriteStep {
    fn from(j: StepJson) -> Self {
        RewriteStep {
            rule: j.rule,
            location: Location {
                nodes: j.location,
                phase: j.phase,
            },
            scalar_check: C64::new(j.scalar_re, j.scalar_im),
        }
    }
}

fn mismatch(rule: Rule, reason: impl Into<String>) -> ZxError {
    ZxError::PatternMismatch {
        rule,
        reason: reason.into(),
    }
}

fn kind_of(d: &ZXDiagram, id: usize) -> Result<NodeKind, ZxError> {
    d.node(id).map(|n| n.kind)
}

fn spider(d: &ZXDiagram, rule: Rule, id: usize) -> Result<(NodeKind, f64), ZxError> {
    let n = d.node(id)?;
    if !n.kind.is_spider() {
        return Err(mismatch(rule, format!("node {id} is not a spider")));
    }
    Ok((n.kind, n.phase))
}

fn arity(rule: Rule, loc: &Location, n: usize) -> Result<(), ZxError> {
    if loc.nodes.len() != n {
        return Err(mismatch(rule, format!("expected {n} node(s), got {}", loc.nodes.len())));
    }
    Ok(())
}

fn finish(mut d: ZXDiagram, rule: Rule, location: &Location, scalar: C64) -> Result<(ZXDiagram, RewriteStep), ZxError> {
    d.eliminate_self_loops();
    d.validate()?;
    Ok((
        d,
        RewriteStep {
            rule,
            location: location.clone(),
            scalar_check: scalar,
        },
    ))
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn fuse(d: &ZXDiagram, loc: &Location) -> Result<(ZXDiagram, RewriteStep), ZxError> {
    arity(Rule::S1, loc, 2)?;
    let (a, b) = (loc.nodes[0], loc.nodes[1]);
    let (ka, pa) = spider(d, Rule::S1, a)?;
    let (kb, pb) = spider(d, Rule::S1, b)?;
    if a == b || ka != kb {
        return Err(mismatch(Rule::S1, format!("{a} and {b} are not two spiders of one colour")));
    }
    if d.edge_multiplicity(a, b) == 0 {
        return Err(mismatch(Rule::S1, format!("{a} and {b} are not adjacent")));
    }
    let mut out = d.clone();
    for n in d.neighbors(b) {
        out.remove_edge(b, n);
        if n != a {
            out.add_edge(a, n);
        }
    }
    out.remove_node(b);
    out.set_node(a, ka, pa + pb);
    finish(out, Rule::S1, loc, one())
}

fn unfuse(d: &ZXDiagram, loc: &Location, beta: f64) -> Result<(ZXDiagram, RewriteStep), ZxError> {
    let Some((&a, legs)) = loc.nodes.split_first() else {
        return Err(mismatch(Rule::S1, "empty location"));
    };
    let (k, alpha) = spider(d, Rule::S1, a)?;
    let distinct: BTreeSet<usize> = legs.iter().copied().collect();
    for &n in &distinct {
        let want = legs.iter().filter(|&&x| x == n).count();
        if n == a || d.edge_multiplicity(a, n) < want {
            return Err(mismatch(Rule::S1, format!("{a} has fewer than {want} leg(s) to {n}")));
        }
    }
    let mut out = d.clone();
    let s = out.add_node(k, beta);
    for &n in legs {
        out.remove_edge(a, n);
        out.add_edge(s, n);
    }
    out.add_edge(a, s);
    out.set_node(a, k, alpha - beta);
    finish(out, Rule::S1, loc, one())
}

fn two_neighbours(d: &ZXDiagram, id: usize) -> Option<(usize, usize)> {
    match d.neighbors(id)[..] {
        [u, w] => Some((u, w)),
        _ => None,
    }
}

/// Replaces the 2-leg node `id` by a plain wire between its neighbours.
fn splice(d: &ZXDiagram, rule: Rule, id: usize) -> Result<ZXDiagram, ZxError> {
    let (u, w) = two_neighbours(d, id).ok_or_else(|| mismatch(rule, format!("node {id} does not have two legs")))?;
    let mut out = d.clone();
    out.remove_node(id);
    if u == w {
        if !kind_of(d, u)?.is_spider() {
            return Err(mismatch(rule, format!("wire would close a loop on non-spider {u}")));
        }
    } else {
        out.add_edge(u, w);
    }
    Ok(out)
}

fn remove_identity(d: &ZXDiagram, loc: &Location) -> Result<(ZXDiagram, RewriteStep), ZxError> {
    arity(Rule::S2, loc, 1)?;
    let id = loc.nodes[0];
    let (_, phase) = spider(d, Rule::S2, id)?;
    if !super::diagram::phase_is_zero(phase) {
        return Err(mismatch(Rule::S2, format!("spider {id} has a nonzero phase")));
    }
    let out = splice(d, Rule::S2, id)?;
    finish(out, Rule::S2, loc, one())
}

fn colour_change(d: &ZXDiagram, loc: &Location) -> Result<(ZXDiagram, RewriteStep), ZxError> {
    arity(Rule::C, loc, 1)?;
    let id = loc.nodes[0];
    let (k, phase) = spider(d, Rule::C, id)?;
    let mut out = d.clone();
    for n in d.neighbors(id) {
        out.remove_edge(id, n);
        let h = out.add_node(NodeKind::HBox, 0.0);
        out.add_edge(id, h);
        out.add_edge(h, n);
    }
    out.set_node(id, k.toggled(), phase);
    finish(out, Rule::C, loc, one())
}

fn cancel_hh(d: &ZXDiagram, loc: &Location) -> Result<(ZXDiagram, RewriteStep), ZxError> {
    arity(Rule::HH, loc, 2)?;
    let (a, b) = (loc.nodes[0], loc.nodes[1]);
    if kind_of(d, a)? != NodeKind::HBox || kind_of(d, b)? != NodeKind::HBox || a == b {
        return Err(mismatch(Rule::HH, format!("{a} and {b} are not two H-boxes")));
    }
    if d.edge_multiplicity(a, b) != 1 {
        return Err(mismatch(Rule::HH, format!("{a} and {b} are not joined by exactly one wire")));
    }
    let mut out = d.clone();
    out.remove_edge(a, b);
    let u = out.neighbors(a)[0];
    let w = out.neighbors(b)[0];
    out.remove_node(a);
    out.remove_node(b);
    if u == w {
        if !kind_of(d, u)?.is_spider() {
            return Err(mismatch(Rule::HH, format!("wire would close a loop on non-spider {u}")));
        }
    } else {
        out.add_edge(u, w);
    }
    finish(out, Rule::HH, loc, one())
}

fn plain_degree3(d: &ZXDiagram, id: usize, kind: NodeKind) -> bool {
    d.node(id)
        .map(|n| n.kind == kind && super::diagram::phase_is_zero(n.phase) && d.degree(id) == 3)
        .unwrap_or(false)
}

fn bialgebra_forward(d: &ZXDiagram, loc: &Location) -> Result<(ZXDiagram, RewriteStep), ZxError> {
    let (z, x) = (loc.nodes[0], loc.nodes[1]);
    if !plain_degree3(d, z, NodeKind::Z) || !plain_degree3(d, x, NodeKind::X) {
        return Err(mismatch(Rule::B2, "needs a phase-free 3-leg Z and X pair"));
    }
    if d.edge_multiplicity(z, x) != 1 {
        return Err(mismatch(Rule::B2, format!("{z} and {x} are not joined by exactly one wire")));
    }
    let outer = |id: usize, other: usize| -> Vec<usize> {
        let mut ns = d.neighbors(id);
        let i = ns.iter().position(|&n| n == other).expect("adjacent");
        ns.remove(i);
        ns
    };
    let (za, xb) = (outer(z, x), outer(x, z));
    let mut out = d.clone();
    out.remove_node(z);
    out.remove_node(x);
    let reds: Vec<usize> = za
        .iter()
        .map(|&n| {
            let r = out.add_node(NodeKind::X, 0.0);
            out.add_edge(r, n);
            r
        })
        .collect();
    let greens: Vec<usize> = xb
        .iter()
        .map(|&n| {
            let g = out.add_node(NodeKind::Z, 0.0);
            out.add_edge(g, n);
            g
        })
        .collect();
    for &r in &reds {
        for &g in &greens {
            out.add_edge(r, g);
        }
    }
    finish(out, Rule::B2, loc, C64::new(FRAC_1_SQRT_2, 0.0))
}

/// Outer neighbour of a 3-leg node whose other two legs go into `inner`.
fn k22_outer(d: &ZXDiagram, id: usize, inner: &[usize]) -> Option<usize> {
    let outer: Vec<usize> = d.neighbors(id).into_iter().filter(|n| !inner.contains(n)).collect();
    match outer[..] {
        [o] => Some(o),
        _ => None,
    }
}

fn bialgebra_reverse(d: &ZXDiagram, loc: &Location) -> Result<(ZXDiagram, RewriteStep), ZxError> {
    let [z1, z2, x1, x2] = loc.nodes[..] else {
        return Err(mismatch(Rule::B2, "reverse form takes four nodes"));
    };
    let all = [z1, z2, x1, x2];
    if all.iter().collect::<BTreeSet<_>>().len() != 4 {
        return Err(mismatch(Rule::B2, "nodes must be distinct"));
    }
    let ok = plain_degree3(d, z1, NodeKind::Z)
        && plain_degree3(d, z2, NodeKind::Z)
        && plain_degree3(d, x1, NodeKind::X)
        && plain_degree3(d, x2, NodeKind::X)
        && [z1, z2].iter().all(|&z| [x1, x2].iter().all(|&x| d.edge_multiplicity(z, x) == 1));
    if !ok {
        return Err(mismatch(Rule::B2, "not a phase-free K2,2 of 3-leg spiders"));
    }
    let outers: Option<Vec<usize>> = all.iter().map(|&n| k22_outer(d, n, &all)).collect();
    let Some(outers) = outers else {
        return Err(mismatch(Rule::B2, "K2,2 spiders must each have one outside leg"));
    };
    let mut out = d.clone();
    for n in all {
        out.remove_node(n);
    }
    let g = out.add_node(NodeKind::Z, 0.0);
    let r = out.add_node(NodeKind::X, 0.0);
    out.add_edge(g, r);
    out.add_edge(r, outers[0]);
    out.add_edge(r, outers[1]);
    out.add_edge(g, outers[2]);
    out.add_edge(g, outers[3]);
    finish(out, Rule::B2, loc, C64::new(SQRT_2, 0.0))
}

/// Applies `rule` at `location`, failing with `PatternMismatch` when the
/// pattern is absent.
pub fn apply_rule(d: &ZXDiagram, rule: Rule, location: &Location) -> Result<(ZXDiagram, RewriteStep), ZxError> {
    for &id in &location.nodes {
        d.node(id)?;
    }
    match rule {
        Rule::S1 => match location.phase {
            None => fuse(d, location),
            Some(beta) => unfuse(d, location, beta),
        },
        Rule::S2 => remove_identity(d, location),
        Rule::C => colour_change(d, location),
        Rule::HH => cancel_hh(d, location),
        Rule::B2 => match location.nodes.len() {
            2 => bialgebra_forward(d, location),
            4 => bialgebra_reverse(d, location),
            n => Err(mismatch(Rule::B2, format!("expected 2 or 4 nodes, got {n}"))),
        },
    }
}

/// Every location where `rule` applies, sorted by node ids. S1 lists fusions
/// only; B2 lists both directions.
pub fn match_rule(d: &ZXDiagram, rule: Rule) -> Vec<Location> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    let ids: Vec<usize> = d.nodes().keys().copied().collect();
    let kind = |id: usize| d.nodes()[&id].kind;
    let pairs = || {
        let mut p: Vec<(usize, usize)> = d.edges().iter().copied().filter(|&(a, b)| a != b).collect();
        p.dedup();
        p
    };
    match rule {
        Rule::S1 => {
            for (a, b) in pairs() {
                if kind(a).is_spider() && kind(a) == kind(b) {
                    found.push(vec![a, b]);
                }
            }
        }
        Rule::S2 => {
            for &id in &ids {
                let n = d.nodes()[&id];
                if n.kind.is_spider() && super::diagram::phase_is_zero(n.phase) {
                    if let Some((u, w)) = two_neighbours(d, id) {
                        if u != w || kind(u).is_spider() {
                            found.push(vec![id]);
                        }
                    }
                }
            }
        }
        Rule::C => {
            for &id in &ids {
                if kind(id).is_spider() {
                    found.push(vec![id]);
                }
            }
        }
        Rule::HH => {
            for (a, b) in pairs() {
                if kind(a) == NodeKind::HBox && kind(b) == NodeKind::HBox && d.edge_multiplicity(a, b) == 1 {
                    let u = d.neighbors(a).into_iter().find(|&n| n != b);
                    let w = d.neighbors(b).into_iter().find(|&n| n != a);
                    if let (Some(u), Some(w)) = (u, w) {
                        if u != w || kind(u).is_spider() {
                            found.push(vec![a, b]);
                        }
                    }
                }
            }
        }
        Rule::B2 => {
            for (a, b) in pairs() {
                let (z, x) = match (kind(a), kind(b)) {
                    (NodeKind::Z, NodeKind::X) => (a, b),
                    (NodeKind::X, NodeKind::Z) => (b, a),
                    _ => continue,
                };
                let loc = Location::at([z, x]);
                if bialgebra_forward(d, &loc).is_ok() {
                    found.push(loc.nodes);
                }
            }
            let greens: Vec<usize> = ids.iter().copied().filter(|&id| plain_degree3(d, id, NodeKind::Z)).collect();
            for (i, &z1) in greens.iter().enumerate() {
                for &z2 in &greens[i + 1..] {
                    let common: Vec<usize> = d
                        .neighbors(z1)
                        .into_iter()
                        .filter(|&x| plain_degree3(d, x, NodeKind::X) && d.edge_multiplicity(z2, x) == 1)
                        .collect();
                    for (j, &x1) in common.iter().enumerate() {
                        for &x2 in &common[j + 1..] {
                            let loc = Location::at([z1, z2, x1, x2]);
                            if bialgebra_reverse(d, &loc).is_ok() {
                                found.push(loc.nodes);
                            }
                        }
                    }
                }
            }
        }
    }
    found.sort();
    found.dedup();
    found.into_iter().map(Location::at).collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use proptest::prelude::*;

    use super::*;
    use crate::zx::diagram::Node;
    use crate::zx::eval::{evaluate, scaled_deviation};

    fn sound(before: &ZXDiagram, rule: Rule, loc: &Location) -> (ZXDiagram, RewriteStep) {
        let (after, step) = apply_rule(before, rule, loc).unwrap();
        let dev = scaled_deviation(&evaluate(before).unwrap(), &evaluate(&after).unwrap(), step.scalar_check);
        assert!(dev < 1e-12, "{rule} at {loc:?}: deviation {dev}");
        (after, step)
    }

    fn node(kind: NodeKind, phase: f64) -> Node {
        Node { kind, phase }
    }

    /// in — Z(α) — X(0)⟨out1, out2⟩, with an extra Z(β) hanging off Z(α).
    fn sample() -> ZXDiagram {
        ZXDiagram::from_parts(
            [
                (0, node(NodeKind::Input, 0.0)),
                (1, node(NodeKind::Z, 0.3)),
                (2, node(NodeKind::Z, 1.1)),
                (3, node(NodeKind::X, 0.0)),
                (4, node(NodeKind::Output, 0.0)),
                (5, node(NodeKind::Output, 0.0)),
                (6, node(NodeKind::Z, 0.0)),
            ],
            [(0, 1), (1, 2), (1, 3), (3, 4), (2, 6), (6, 5)],
            vec![0],
            vec![4, 5],
        )
        .unwrap()
    }

    #[test]
    fn fusion_adds_phases() {
        let (after, _) = sound(&sample(), Rule::S1, &Location::at([1, 2]));
        assert!((after.node(1).unwrap().phase - 1.4).abs() < 1e-12);
        assert!(after.node(2).is_err());
    }

    #[test]
    fn unfusion_splits_phase() {
        let (after, _) = sound(&sample(), Rule::S1, &Location::unfuse(1, &[0, 3], 0.2));
        assert!((after.node(1).unwrap().phase - 0.1).abs() < 1e-12);
        assert_eq!(after.num_nodes(), 8);
    }

    #[test]
    fn fusion_across_parallel_edges_drops_loops() {
        let d = ZXDiagram::from_parts(
            [
                (0, node(NodeKind::Input, 0.0)),
                (1, node(NodeKind::X, 0.5)),
                (2, node(NodeKind::X, 0.0)),
                (3, node(NodeKind::Output, 0.0)),
            ],
            [(0, 1), (1, 2), (1, 2), (2, 3)],
            vec![0],
            vec![3],
        )
        .unwrap();
        let (after, _) = sound(&d, Rule::S1, &Location::at([1, 2]));
        assert_eq!(after.edges(), &[(0, 1), (1, 3)]);
    }

    #[test]
    fn identity_removal() {
        let (after, _) = sound(&sample(), Rule::S2, &Location::at([6]));
        assert_eq!(after.edge_multiplicity(2, 5), 1);
        let err = apply_rule(&sample(), Rule::S2, &Location::at([2])).unwrap_err();
        assert!(matches!(err, ZxError::PatternMismatch { rule: Rule::S2, .. }));
    }

    #[test]
    fn colour_change_then_cancel() {
        let (after, _) = sound(&sample(), Rule::C, &Location::at([3]));
        assert_eq!(after.count_kind(NodeKind::HBox), 2);
        assert_eq!(after.node(3).unwrap().kind, NodeKind::Z);
        let (back, _) = sound(&after, Rule::C, &Location::at([3]));
        let mut d = back;
        while let Some(loc) = match_rule(&d, Rule::HH).into_iter().next() {
            d = sound(&d, Rule::HH, &loc).0;
        }
        assert_eq!(d.canonicalize(), sample().canonicalize());
    }

    #[test]
    fn bialgebra_both_ways() {
        let d = ZXDiagram::from_parts(
            [
                (0, node(NodeKind::Input, 0.0)),
                (1, node(NodeKind::Input, 0.0)),
                (2, node(NodeKind::Z, 0.0)),
                (3, node(NodeKind::X, 0.0)),
                (4, node(NodeKind::Output, 0.0)),
                (5, node(NodeKind::Output, 0.0)),
            ],
            [(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)],
            vec![0, 1],
            vec![4, 5],
        )
        .unwrap();
        let (k22, step) = sound(&d, Rule::B2, &Location::at([2, 3]));
        assert!((step.scalar_check.re - FRAC_1_SQRT_2).abs() < 1e-15);
        let rev = match_rule(&k22, Rule::B2);
        let back = rev.iter().find(|l| l.nodes.len() == 4).unwrap();
        let (again, step) = sound(&k22, Rule::B2, back);
        assert!((step.scalar_check.re - SQRT_2).abs() < 1e-15);
        assert_eq!(again.canonicalize(), d.canonicalize());
    }

    #[test]
    fn hh_refuses_closed_loop() {
        let d = ZXDiagram::from_parts(
            [
                (0, node(NodeKind::Input, 0.0)),
                (1, node(NodeKind::Z, PI)),
                (2, node(NodeKind::HBox, 0.0)),
                (3, node(NodeKind::HBox, 0.0)),
                (4, node(NodeKind::Output, 0.0)),
            ],
            [(0, 1), (1, 2), (2, 3), (1, 3), (1, 4)],
            vec![0],
            vec![4],
        )
        .unwrap();
        let (after, _) = sound(&d, Rule::HH, &Location::at([2, 3]));
        assert_eq!(after.num_nodes(), 3);
    }

    #[test]
    fn rejects_wrong_shapes() {
        let d = sample();
        for (rule, loc) in [
            (Rule::S1, Location::at([1, 3])),
            (Rule::S1, Location::at([0, 1])),
            (Rule::HH, Location::at([1, 2])),
            (Rule::B2, Location::at([1, 3])),
            (Rule::C, Location::at([0])),
            (Rule::S1, Location::unfuse(1, &[4], 0.0)),
        ] {
            assert!(
                matches!(apply_rule(&d, rule, &loc), Err(ZxError::PatternMismatch { .. })),
                "{rule} {loc:?}"
            );
        }
        assert!(matches!(apply_rule(&d, Rule::S2, &Location::at([99])), Err(ZxError::UnknownNode(99))));
    }

    #[test]
    fn step_json_round_trip() {
        let step = RewriteStep {
            rule: Rule::S1,
            location: Location::unfuse(3, &[1, 2], FRAC_PI_2),
            scalar_check: C64::new(0.5, -0.25),
        };
        let text = serde_json::to_string(&StepJson::from(&step)).unwrap();
        let back: RewriteStep = serde_json::from_str::<StepJson>(&text).unwrap().into();
        assert_eq!(back, step);
    }

    /// Random connected diagram: a chain of 2–5 interior nodes from the input
    /// to the output, plus a few extra spider–spider edges.
    pub(crate) fn arb_diagram() -> impl Strategy<Value = ZXDiagram> {
        let interior = prop::collection::vec((0u8..3, 0u8..8), 2..6);
        (interior, prop::collection::vec((0usize..16, 0usize..16), 0..5)).prop_map(|(spec, extra)| {
            let n = spec.len();
            let mut nodes = vec![(0, node(NodeKind::Input, 0.0)), (1, node(NodeKind::Output, 0.0))];
            for (i, &(k, ph)) in spec.iter().enumerate() {
                let kind = match k {
                    0 => NodeKind::Z,
                    1 => NodeKind::X,
                    _ => NodeKind::HBox,
                };
                nodes.push((i + 2, node(kind, ph as f64 * PI / 4.0)));
            }
            let mut edges = vec![(0, 2), (n + 1, 1)];
            for i in 2..n + 1 {
                edges.push((i, i + 1));
            }
            let is_h = |id: usize| spec.get(id.wrapping_sub(2)).is_some_and(|s| s.0 == 2);
            for (a, b) in extra {
                let (a, b) = (a % n + 2, b % n + 2);
                if a != b && !is_h(a) && !is_h(b) {
                    edges.push((a, b));
                }
            }
            ZXDiagram::from_parts(nodes, edges, vec![0], vec![1]).expect("generator builds valid diagrams")
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn every_match_is_sound(d in arb_diagram(), pick in 0usize..64, beta in 0u8..8) {
            let before = evaluate(&d).unwrap();
            for rule in [Rule::S1, Rule::S2, Rule::C, Rule::B2, Rule::HH] {
                let locs = match_rule(&d, rule);
                if locs.is_empty() {
                    continue;
                }
                let loc = &locs[pick % locs.len()];
                let (after, step) = apply_rule(&d, rule, loc).unwrap();
                let dev = scaled_deviation(&before, &evaluate(&after).unwrap(), step.scalar_check);
                prop_assert!(dev < 1e-10, "{} at {:?}: {}", rule, loc, dev);
            }
            let spiders: Vec<usize> = match_rule(&d, Rule::C).into_iter().map(|l| l.nodes[0]).collect();
            if !spiders.is_empty() {
                let s = spiders[pick % spiders.len()];
                let legs: Vec<usize> = d.neighbors(s).into_iter().step_by(2).collect();
                let loc = Location::unfuse(s, &legs, beta as f64 * PI / 4.0);
                let (after, step) = apply_rule(&d, Rule::S1, &loc).unwrap();
                let dev = scaled_deviation(&before, &evaluate(&after).unwrap(), step.scalar_check);
                prop_assert!(dev < 1e-10, "unfuse {:?}: {}", loc, dev);
            }
        }
    }
}
