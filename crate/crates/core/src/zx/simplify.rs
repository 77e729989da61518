use crate::qmath::C64;

use super::diagram::{NodeKind, ZXDiagram};
use super::eval::{evaluate, scaled_deviation};
use super::rules::{apply_rule, match_rule, Location, RewriteStep, Rule};
use super::ZxError;

const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Simplified {
    pub diagram: ZXDiagram,
    pub steps: Vec<RewriteStep>,
    /// Product of the step scalars.
    pub scalar: C64,
    /// Set when verification rejected a step; `diagram` is the last state
    /// that passed.
    pub stopped: Option<String>,
}

/// Colour change at `s` followed by every H-box cancellation it makes
/// possible, kept only if it leaves `s` fusable with a neighbour or lowers
/// the H-box count.
fn colour_change_trial(d: &ZXDiagram, s: usize) -> Option<(ZXDiagram, Vec<RewriteStep>)> {
    let (mut cur, step) = apply_rule(d, Rule::C, &Location::at([s])).ok()?;
    let mut steps = vec![step];
    loop {
        let near: Vec<usize> = cur.neighbors(s);
        let hit = match_rule(&cur, Rule::HH)
            .into_iter()
            .find(|l| l.nodes.iter().any(|n| near.contains(n)));
        let Some(loc) = hit else { break };
        let (next, step) = apply_rule(&cur, Rule::HH, &loc).ok()?;
        cur = next;
        steps.push(step);
    }
    let enables = match_rule(&cur, Rule::S1).iter().any(|l| l.nodes.contains(&s));
    let fewer = cur.count_kind(NodeKind::HBox) < d.count_kind(NodeKind::HBox);
    (enables || fewer).then_some((cur, steps))
}

/// One round of the strategy: the first applicable of H-box cancellation,
/// identity removal, fusion, an enabling colour change and reverse
/// bialgebra, each at its lowest-id match.
fn next_steps(d: &ZXDiagram, colour_budget: &mut usize) -> Option<(ZXDiagram, Vec<RewriteStep>)> {
    for rule in [Rule::HH, Rule::S2, Rule::S1] {
        if let Some(loc) = match_rule(d, rule).into_iter().next() {
            let (next, step) = apply_rule(d, rule, &loc).expect("matched location applies");
            return Some((next, vec![step]));
        }
    }
    if *colour_budget > 0 {
        for loc in match_rule(d, Rule::C) {
            if let Some(found) = colour_change_trial(d, loc.nodes[0]) {
                *colour_budget -= 1;
                return Some(found);
            }
        }
    }
    let rev = match_rule(d, Rule::B2).into_iter().find(|l| l.nodes.len() == 4)?;
    let (next, step) = apply_rule(d, Rule::B2, &rev).expect("matched location applies");
    Some((next, vec![step]))
}

fn run(d: &ZXDiagram, verify: bool) -> Simplified {
    let mut colour_budget = 2 * d.count_kind(NodeKind::HBox);
    let mut cur = d.clone();
    let mut steps = Vec::new();
    let mut scalar = C64::new(1.0, 0.0);
    let mut current_value = if verify { evaluate(d).ok() } else { None };
    let mut stopped = None;
    while let Some((next, new_steps)) = next_steps(&cur, &mut colour_budget) {
        let s: C64 = new_steps.iter().map(|st| st.scalar_check).product();
        if let Some(before) = &current_value {
            match evaluate(&next) {
                Ok(after) => {
                    let dev = scaled_deviation(before, &after, s);
                    if dev > VERIFY_TOLERANCE {
                        stopped = Some(format!("{} step deviates by {dev:e}", new_steps[0].rule));
                        break;
                    }
                    current_value = Some(after);
                }
                Err(ZxError::TooLarge { .. }) => current_value = None,
                Err(e) => {
                    stopped = Some(e.to_string());
                    break;
                }
            }
        }
        cur = next;
        scalar *= s;
        steps.extend(new_steps);
    }
    Simplified {
        diagram: cur,
        steps,
        scalar,
        stopped,
    }
}

/// Greedy rewriting to a fixed point. Always terminates: every rule but C
/// removes nodes, and C is capped at twice the initial H-box count.
pub fn simplify(d: &ZXDiagram) -> (ZXDiagram, Vec<RewriteStep>) {
    let s = run(d, false);
    (s.diagram, s.steps)
}

/// `simplify` with every round checked against the tensor value while the
/// diagram is small enough to evaluate.
pub fn verified_simplify(d: &ZXDiagram) -> Simplified {
    run(d, true)
}
