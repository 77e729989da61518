use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use crate::qmath::{pauli, ComplexMatrix, C64, ONE, ZERO};

use super::CircuitError;

/// Unitary payloads must pass `is_unitary` at this tolerance.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    T,
    /// Angles in radians.
    U3 { theta: f64, phi: f64, lambda: f64 },
    Cnot,
    Ch,
    Swap,
    Unitary(ComplexMatrix),
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Ch | GateKind::Swap => 2,
            GateKind::Unitary(m) => m.rows().trailing_zeros() as usize,
            _ => 1,
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::T => "t",
            GateKind::U3 { .. } => "u3",
            GateKind::Cnot => "cx",
            GateKind::Ch => "ch",
            GateKind::Swap => "swap",
            GateKind::Unitary(_) => "unitary",
        }
    }

    /// The gate's own 2^k × 2^k matrix; the first target is the most
    /// significant qubit.
    pub fn local_matrix(&self) -> ComplexMatrix {
        match self {
            GateKind::H => ComplexMatrix::from_real(2, 2, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2]),
            GateKind::X => pauli::x(),
            GateKind::Y => pauli::y(),
            GateKind::Z => pauli::z(),
            GateKind::S => ComplexMatrix::diagonal(&[ONE, C64::new(0.0, 1.0)]),
            GateKind::T => ComplexMatrix::diagonal(&[ONE, C64::from_polar(1.0, FRAC_PI_4)]),
            GateKind::U3 { theta, phi, lambda } => u3_matrix(*theta, *phi, *lambda),
            GateKind::Cnot => {
                ComplexMatrix::from_real(4, 4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.])
            }
            GateKind::Ch => {
                let h = FRAC_1_SQRT_2;
                ComplexMatrix::from_real(4, 4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., h, h, 0., 0., h, -h])
            }
            GateKind::Swap => {
                ComplexMatrix::from_real(4, 4, &[1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.])
            }
            GateKind::Unitary(m) => m.clone(),
        }
    }
}

/// U3(θ,φ,λ) = [[cos(θ/2), −e^{iλ}sin(θ/2)], [e^{iφ}sin(θ/2), e^{i(φ+λ)}cos(θ/2)]]
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    ComplexMatrix::from_rows(&[
        vec![C64::new(c, 0.0), -C64::from_polar(s, lambda)],
        vec![C64::from_polar(s, phi), C64::from_polar(c, phi + lambda)],
    ])
}

/// A gate bound to qubits. For controlled kinds the control comes first.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
}

impl Gate {
    /// Checks arity, index distinctness and (for `Unitary`) unitarity.
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Result<Self, CircuitError> {
        if let GateKind::Unitary(m) = &kind {
            if !m.is_square() || !m.rows().is_power_of_two() || m.rows() < 2 {
                return Err(CircuitError::BadPayload("unitary payload must be 2^k x 2^k".into()));
            }
            if !m.is_unitary(UNITARY_TOLERANCE) {
                return Err(CircuitError::BadPayload("payload is not unitary".into()));
            }
        }
        if targets.len() != kind.arity() {
            return Err(CircuitError::Arity {
                gate: kind.mnemonic(),
                expected: kind.arity(),
                found: targets.len(),
            });
        }
        for (i, q) in targets.iter().enumerate() {
            if targets[..i].contains(q) {
                return Err(CircuitError::RepeatedQubit { qubit: *q });
            }
        }
        Ok(Self { kind, targets })
    }

    fn single(kind: GateKind, q: usize) -> Self {
        Self { kind, targets: vec![q] }
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }
    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q)
    }
    pub fn y(q: usize) -> Self {
        Self::single(GateKind::Y, q)
    }
    pub fn z(q: usize) -> Self {
        Self::single(GateKind::Z, q)
    }
    pub fn s(q: usize) -> Self {
        Self::single(GateKind::S, q)
    }
    pub fn t(q: usize) -> Self {
        Self::single(GateKind::T, q)
    }
    pub fn u3(theta: f64, phi: f64, lambda: f64, q: usize) -> Self {
        Self::single(GateKind::U3 { theta, phi, lambda }, q)
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Cnot,
            targets: vec![control, target],
        }
    }
    pub fn ch(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Ch,
            targets: vec![control, target],
        }
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Self {
            kind: GateKind::Swap,
            targets: vec![a, b],
        }
    }
    pub fn unitary(matrix: ComplexMatrix, targets: Vec<usize>) -> Result<Self, CircuitError> {
        Self::new(GateKind::Unitary(matrix), targets)
    }

    pub fn local_matrix(&self) -> ComplexMatrix {
        self.kind.local_matrix()
    }

    pub(crate) fn validate(&self, num_qubits: usize) -> Result<(), CircuitError> {
        Gate::new(self.kind.clone(), self.targets.clone())?;
        if let Some(&q) = self.targets.iter().find(|&&q| q >= num_qubits) {
            return Err(CircuitError::QubitOutOfRange { qubit: q, num_qubits });
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match &self.kind {
            GateKind::U3 { theta, phi, lambda } => format!("U3({theta},{phi},{lambda})"),
            GateKind::Unitary(m) => format!("UNITARY[{}x{}]", m.rows(), m.cols()),
            GateKind::Cnot => "CNOT".into(),
            GateKind::Ch => "CH".into(),
            other => other.mnemonic().to_uppercase(),
        };
        write!(f, "{label}")?;
        for q in &self.targets {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// Embeds a local unitary acting on `targets` into the full 2^n register.
pub fn embed(local: &ComplexMatrix, targets: &[usize], num_qubits: usize) -> ComplexMatrix {
    let dim = 1usize << num_qubits;
    let k = targets.len();
    debug_assert_eq!(local.rows(), 1 << k);
    let mask: usize = targets.iter().map(|&q| 1usize << (num_qubits - 1 - q)).sum();
    let sub = |idx: usize| -> usize {
        targets
            .iter()
            .enumerate()
            .fold(0, |acc, (pos, &q)| acc | (((idx >> (num_qubits - 1 - q)) & 1) << (k - 1 - pos)))
    };
    let mut out = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        let rs = sub(r);
        for c in 0..dim {
            if r & !mask != c & !mask {
                continue;
            }
            let v = local[(rs, sub(c))];
            if v != ZERO {
                out[(r, c)] = v;
            }
        }
    }
    out
}

/// Full 2^n-dimensional unitary for `gate` under the qubit-0-is-MSB convention.
pub fn gate_matrix(gate: &Gate, num_qubits: usize) -> Result<ComplexMatrix, CircuitError> {
    gate.validate(num_qubits)?;
    Ok(embed(&gate.local_matrix(), &gate.targets, num_qubits))
}
