//! Quantum bleaching and recovery lab.
//!
//! The crate simulates the erasure of a qubit into two ancillas, the local
//! decoder that recovers it, an imperfect (depolarizing) variant swept over its
//! strength, shot-sampled state tomography of the results, and a ZX-calculus
//! rewrite engine that traces where the erased information goes.
//!
//! Modules, bottom-up:
//!
//! - [`qmath`]: dense complex matrices, Jacobi eigensolver, trace distance,
//!   Uhlmann fidelity, partial trace.
//! - [`circuits`]: gate IR, text format, statevector and density-matrix
//!   simulators, Kraus channels.
//! - [`tomo`]: seeded measurement sampling, linear-inversion reconstruction,
//!   projection onto physical states.
//! - [`nohiding`]: randomizer unitaries, experiment circuits, the `p` sweep.
//! - [`zx`]: ZX diagrams, circuit translation, tensor evaluation, rewrite
//!   rules, simplification and the scripted derivation.
//! - [`cli`]: the command surface used by the `nohiding-lab` binary.
//!
//! Qubit 0 is always the most significant bit of a basis-state index.

pub mod circuits;
pub mod cli;
pub mod nohiding;
pub mod qmath;
pub mod tomo;
pub mod zx;
