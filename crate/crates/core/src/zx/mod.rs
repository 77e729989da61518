//! ZX diagrams with H-boxes: circuit translation, tensor evaluation, rewrite
//! rules with exact scalar tracking, simplification and the scripted
//! derivation of where the erased qubit goes.
//!
//! Conventions: a Z spider with phase α is 1 on all-0 legs plus e^{iα} on
//! all-1 legs. An X spider with k legs is (1/√2)^k (1 + e^{iα}(−1)^{|b|}). An
//! H-box is the Hadamard matrix. Under these, every rule except B2 is exact.

mod derivation;
mod diagram;
mod eval;
mod rules;
mod simplify;
mod translate;

use thiserror::Error;

pub use derivation::{
    derivation_circuit, derivation_diagram, eq6_full_circuit, eq6_full_diagram, replay, scripted_derivation,
    steps_from_json, steps_to_json, Derivation, Stage,
};
pub use diagram::{normalize_phase, phase_is_zero, Node, NodeKind, ZXDiagram};
pub use eval::{evaluate, proportionality, scaled_deviation, MAX_FACTOR_WIDTH};
pub use rules::{apply_rule, match_rule, Location, RewriteStep, Rule};
pub use simplify::{simplify, verified_simplify, Simplified};
pub use translate::{circuit_to_zx, circuit_to_zx_with_map};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZxError {
    #[error("gate `{0}` has no ZX translation")]
    Untranslatable(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("no node with id {0}")]
    UnknownNode(usize),
    #[error("contraction needs a factor over {width} edges")]
    TooLarge { width: usize },
    #[error("{rule} does not apply here: {reason}")]
    PatternMismatch { rule: Rule, reason: String },
    #[error("derivation stage {stage} failed: {reason}")]
    StageFailed { stage: usize, reason: String },
    #[error("malformed JSON: {0}")]
    Json(String),
}
