use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qmath::{kron, pauli, ComplexMatrix, StateVector, C64, ZERO};

use super::NohidingError;

/// Which randomizing unitary the erasure step uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Eq1,
    Eq2,
    Eq6,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Eq1, Variant::Eq2, Variant::Eq6];

    pub fn tag(self) -> &'static str {
        match self {
            Variant::Eq1 => "eq1",
            Variant::Eq2 => "eq2",
            Variant::Eq6 => "eq6",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Variant {
    type Err = NohidingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "eq1" => Ok(Variant::Eq1),
            "eq2" => Ok(Variant::Eq2),
            "eq6" => Ok(Variant::Eq6),
            _ => Err(NohidingError::UnknownVariant(s.to_string())),
        }
    }
}

/// An 8×8 randomizer on (system, ancilla 1, ancilla 2), system qubit first.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomizerVariant {
    pub tag: Variant,
    pub matrix: ComplexMatrix,
}

/// |out⟩⟨in| on the two-ancilla register, both given as 2-bit indices.
fn ancilla_transition(out: usize, input: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(out, input)] = C64::new(1.0, 0.0);
    m
}

/// Σ coeff · P ⊗ |out⟩⟨in|
fn controlled_sum(terms: &[(C64, char, usize, usize)]) -> ComplexMatrix {
    terms.iter().fold(ComplexMatrix::zeros(8, 8), |acc, &(c, p, out, input)| {
        let sys = pauli::by_label(p).expect("fixed labels").scale(c);
        &acc + &kron(&sys, &ancilla_transition(out, input))
    })
}

pub fn build_randomizer(v: Variant) -> RandomizerVariant {
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let terms: [(C64, char, usize, usize); 4] = match v {
        Variant::Eq1 => [(one, 'I', 0b00, 0b00), (one, 'X', 0b01, 0b01), (i, 'Y', 0b10, 0b10), (one, 'Z', 0b11, 0b11)],
        Variant::Eq2 => [(one, 'I', 0b01, 0b00), (one, 'X', 0b00, 0b01), (-i, 'Y', 0b11, 0b10), (-one, 'Z', 0b10, 0b11)],
        Variant::Eq6 => [(one, 'I', 0b00, 0b00), (one, 'X', 0b01, 0b01), (-i, 'Y', 0b10, 0b10), (one, 'Z', 0b11, 0b11)],
    };
    RandomizerVariant {
        tag: v,
        matrix: controlled_sum(&terms),
    }
}

/// Bell state left on (system, ancilla 1) by the full circuit of each variant.
pub fn expected_bell_state(v: Variant) -> StateVector {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let amps = match v {
        Variant::Eq1 | Variant::Eq2 => vec![ZERO, h, h, ZERO],
        Variant::Eq6 => vec![h, ZERO, ZERO, h],
    };
    StateVector::new(amps).expect("normalized by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_unitary() {
        for v in Variant::ALL {
            assert!(build_randomizer(v).matrix.is_unitary(1e-12), "{v}");
        }
    }

    #[test]
    fn eq1_identity_block() {
        let u = build_randomizer(Variant::Eq1).matrix;
        let psi = StateVector::qubit(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        let input = psi.tensor(&StateVector::zero(2));
        let out = u.apply(input.amplitudes());
        for (a, b) in out.iter().zip(input.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn eq2_column_pairing() {
        let u = build_randomizer(Variant::Eq2).matrix;
        let (a, b) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        let psi = StateVector::qubit(a, b).unwrap();
        // |ψ⟩|01⟩ → X|ψ⟩|00⟩
        let out = u.apply(psi.tensor(&StateVector::basis(2, 0b01)).amplitudes());
        let x_psi = StateVector::qubit(b, a).unwrap().tensor(&StateVector::zero(2));
        for (l, r) in out.iter().zip(x_psi.amplitudes()) {
            assert!((l - r).norm() < 1e-15);
        }
    }

    #[test]
    fn eq6_differs_from_eq1_only_in_y_sign() {
        let d = &build_randomizer(Variant::Eq1).matrix - &build_randomizer(Variant::Eq6).matrix;
        // 2·iY ⊗ |10⟩⟨10| has exactly two nonzero entries of modulus 2.
        let nonzero: Vec<C64> = d.entries().iter().copied().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 2);
        assert!(nonzero.iter().all(|z| (z.norm() - 2.0).abs() < 1e-15));
    }

    #[test]
    fn variant_tags() {
        for v in Variant::ALL {
            assert_eq!(v.tag().parse::<Variant>().unwrap(), v);
        }
        assert_eq!("EQ6".parse::<Variant>().unwrap(), Variant::Eq6);
        assert!("eq3".parse::<Variant>().is_err());
    }
}
