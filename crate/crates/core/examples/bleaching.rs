//! Erases a qubit with the randomizer and shows that the system ends in I/2
//! for every input.

use nohiding_lab::circuits::run_density;
use nohiding_lab::nohiding::{build_erasure_circuit, u3_prep_circuit, Variant};
use nohiding_lab::qmath::{partial_trace, trace_distance, DensityMatrix, StateVector, C64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mixed = DensityMatrix::maximally_mixed(1);
    let inputs = [
        ("|0>", StateVector::basis(1, 0)),
        ("|1>", StateVector::basis(1, 1)),
        ("|+i>", StateVector::normalized(vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)])?),
        ("0.6|0>+0.8|1>", StateVector::normalized(vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)])?),
    ];
    for v in Variant::ALL {
        for (name, psi) in &inputs {
            let c = u3_prep_circuit(psi, 3)?.then(&build_erasure_circuit(v))?;
            let out = run_density(&c, &[], &StateVector::zero(3).to_density())?;
            let sys = partial_trace(&out, &[0])?;
            println!("{v:?} {name:>14}  D(rho_sys, I/2) = {:.2e}", trace_distance(&sys, &mixed)?);
        }
    }
    Ok(())
}
