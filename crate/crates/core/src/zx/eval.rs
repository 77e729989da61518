//! Dense tensor semantics of a diagram.
//!
//! Every edge is a binary variable. Spiders and H-boxes contribute factors
//! over their incident edges; boundary edges stay open. Internal variables
//! are summed out one at a time, always picking the one whose elimination
//! produces the smallest intermediate factor.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::qmath::{ComplexMatrix, C64};

use super::diagram::{NodeKind, ZXDiagram};
use super::ZxError;

/// Largest intermediate factor (in variables) `evaluate` will build.
pub const MAX_FACTOR_WIDTH: usize = 22;

#[derive(Clone, Debug)]
struct Factor {
    /// Variable `vars[i]` is bit `len − 1 − i` of a data index.
    vars: Vec<usize>,
    data: Vec<C64>,
}

impl Factor {
    fn bit_of(&self, var: usize) -> Option<usize> {
        self.vars.iter().position(|&v| v == var).map(|i| self.vars.len() - 1 - i)
    }

    fn product(&self, other: &Factor) -> Factor {
        let mut vars = self.vars.clone();
        for &v in &other.vars {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let n = vars.len();
        let project = |f: &Factor, idx: usize| -> usize {
            f.vars.iter().fold(0, |acc, v| {
                let pos = vars.iter().position(|x| x == v).expect("union contains var");
                (acc << 1) | ((idx >> (n - 1 - pos)) & 1)
            })
        };
        let data = (0..1usize << n)
            .map(|idx| self.data[project(self, idx)] * other.data[project(other, idx)])
            .collect();
        Factor { vars, data }
    }

    fn sum_out(&self, var: usize) -> Factor {
        let Some(bit) = self.bit_of(var) else { return self.clone() };
        let vars: Vec<usize> = self.vars.iter().copied().filter(|&v| v != var).collect();
        let low_mask = (1usize << bit) - 1;
        let data = (0..1usize << vars.len())
            .map(|j| {
                let hi = (j & !low_mask) << 1;
                let base = hi | (j & low_mask);
                self.data[base] + self.data[base | (1 << bit)]
            })
            .collect();
        Factor { vars, data }
    }

    fn value(&self, assignment: impl Fn(usize) -> usize) -> C64 {
        let idx = self.vars.iter().fold(0, |acc, &v| (acc << 1) | assignment(v));
        self.data[idx]
    }
}

/// Tensor entry of one node given the bits on its legs.
pub(crate) fn node_entry(kind: NodeKind, phase: f64, bits: &[usize]) -> C64 {
    let k = bits.len() as i32;
    match kind {
        NodeKind::Z => {
            let ones = bits.iter().filter(|&&b| b == 1).count();
            let mut v = C64::new(0.0, 0.0);
            if ones == 0 {
                v += 1.0;
            }
            if ones == bits.len() {
                v += C64::from_polar(1.0, phase);
            }
            v
        }
        NodeKind::X => {
            let parity = bits.iter().sum::<usize>() % 2;
            let sign = if parity == 0 { 1.0 } else { -1.0 };
            (C64::new(1.0, 0.0) + C64::from_polar(sign, phase)) * FRAC_1_SQRT_2.powi(k)
        }
        NodeKind::HBox => {
            let s = if bits.iter().all(|&b| b == 1) && k == 2 { -1.0 } else { 1.0 };
            C64::new(s * FRAC_1_SQRT_2, 0.0)
        }
        NodeKind::Input | NodeKind::Output => C64::new(1.0, 0.0),
    }
}

struct EdgeVars {
    /// One factor per non-boundary node, over its legs in edge order.
    factors: Vec<Factor>,
    /// Edge variable attached to each input / output boundary.
    input_vars: Vec<usize>,
    output_vars: Vec<usize>,
}

fn build_factors(d: &ZXDiagram) -> Result<EdgeVars, ZxError> {
    let edges = d.edges();
    let boundary_var = |id: usize| -> usize {
        edges
            .iter()
            .position(|&(a, b)| a == id || b == id)
            .expect("validated boundary has one edge")
    };
    let input_vars = d.inputs().iter().map(|&i| boundary_var(i)).collect();
    let output_vars = d.outputs().iter().map(|&o| boundary_var(o)).collect();
    let mut factors = Vec::new();
    for (&id, node) in d.nodes() {
        if node.kind.is_boundary() {
            continue;
        }
        let vars: Vec<usize> = edges
            .iter()
            .enumerate()
            .flat_map(|(e, &(a, b))| std::iter::repeat_n(e, usize::from(a == id) + usize::from(b == id)))
            .collect();
        if vars.len() > MAX_FACTOR_WIDTH {
            return Err(ZxError::TooLarge { width: vars.len() });
        }
        let k = vars.len();
        let data = (0..1usize << k)
            .map(|idx| {
                let bits: Vec<usize> = (0..k).map(|i| (idx >> (k - 1 - i)) & 1).collect();
                node_entry(node.kind, node.phase, &bits)
            })
            .collect();
        factors.push(Factor { vars, data });
    }
    Ok(EdgeVars {
        factors,
        input_vars,
        output_vars,
    })
}

/// The 2^|outputs| × 2^|inputs| linear map of the diagram. Output and input
/// lists are read most-significant first.
pub fn evaluate(d: &ZXDiagram) -> Result<ComplexMatrix, ZxError> {
    let EdgeVars {
        mut factors,
        input_vars,
        output_vars,
    } = build_factors(d)?;
    let open: BTreeSet<usize> = input_vars.iter().chain(&output_vars).copied().collect();
    let mut internal: BTreeSet<usize> = (0..d.edges().len()).filter(|e| !open.contains(e)).collect();

    while !internal.is_empty() {
        let width = |v: usize| -> usize {
            factors
                .iter()
                .filter(|f| f.vars.contains(&v))
                .flat_map(|f| f.vars.iter().copied())
                .collect::<BTreeSet<_>>()
                .len()
        };
        let var = *internal
            .iter()
            .min_by_key(|&&v| (width(v), v))
            .expect("nonempty");
        let w = width(var);
        if w > MAX_FACTOR_WIDTH {
            return Err(ZxError::TooLarge { width: w });
        }
        internal.remove(&var);
        let (touching, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.vars.contains(&var));
        factors = rest;
        if let Some(first) = touching.first() {
            let merged = touching[1..].iter().fold(first.clone(), |acc, f| acc.product(f));
            factors.push(merged.sum_out(var));
        }
    }

    let total = factors.iter().fold(
        Factor {
            vars: vec![],
            data: vec![C64::new(1.0, 0.0)],
        },
        |acc, f| acc.product(f),
    );
    let (n_out, n_in) = (output_vars.len(), input_vars.len());
    let mut m = ComplexMatrix::zeros(1 << n_out, 1 << n_in);
    for r in 0..1usize << n_out {
        for c in 0..1usize << n_in {
            let mut assign: Vec<(usize, usize)> = Vec::with_capacity(n_out + n_in);
            for (k, &v) in output_vars.iter().enumerate() {
                assign.push((v, (r >> (n_out - 1 - k)) & 1));
            }
            for (k, &v) in input_vars.iter().enumerate() {
                assign.push((v, (c >> (n_in - 1 - k)) & 1));
            }
            let consistent = assign
                .iter()
                .all(|&(v, b)| assign.iter().all(|&(w, b2)| v != w || b == b2));
            if !consistent {
                continue;
            }
            let lookup = |v: usize| assign.iter().find(|&&(w, _)| w == v).map(|&(_, b)| b).unwrap_or(0);
            m[(r, c)] = total.value(lookup);
        }
    }
    Ok(m)
}

/// Scalar `s` minimizing ‖b − s·a‖ and the residual relative to ‖b‖.
/// Two zero maps are proportional with `s = 1`; a zero `a` against a
/// nonzero `b` is not proportional at all.
pub fn proportionality(a: &ComplexMatrix, b: &ComplexMatrix) -> Option<(C64, f64)> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return None;
    }
    let aa: f64 = a.entries().iter().map(|z| z.norm_sqr()).sum();
    let bb: f64 = b.entries().iter().map(|z| z.norm_sqr()).sum();
    if aa == 0.0 {
        return if bb == 0.0 { Some((C64::new(1.0, 0.0), 0.0)) } else { None };
    }
    let ab: C64 = a.entries().iter().zip(b.entries()).map(|(x, y)| x.conj() * y).sum();
    let s = ab / aa;
    let resid: f64 = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (y - s * x).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Some((s, resid / bb.sqrt().max(f64::MIN_POSITIVE)))
}

/// Frobenius norm below which a map counts as zero.
pub const ZERO_MAP_NORM: f64 = 1e-12;

/// ‖after − s·before‖ / max(‖after‖, ‖s·before‖), or 0 when both vanish.
pub fn scaled_deviation(before: &ComplexMatrix, after: &ComplexMatrix, s: C64) -> f64 {
    let scaled = before.scale(s);
    let diff = (after - &scaled).frobenius_norm();
    let norm = after.frobenius_norm().max(scaled.frobenius_norm());
    if norm < ZERO_MAP_NORM {
        0.0
    } else {
        diff / norm
    }
}
