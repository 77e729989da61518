//! Pauli tomography of a Bell pair: raw reconstruction, projection, and the
//! effect of the shot count.

use nohiding_lab::nohiding::{expected_bell_state, Variant};
use nohiding_lab::tomo::{tomo_pipeline, Shots};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bell = expected_bell_state(Variant::Eq2).to_density();
    for shots in [Shots::Count(64), Shots::Count(1024), Shots::Count(16384), Shots::Exact] {
        let r = tomo_pipeline(&bell, &[0, 1], shots, 3)?;
        println!(
            "shots {shots:>6}: raw min eigenvalue {:+.4}, fidelity {:.5}, trace distance {:.5}",
            r.raw.min_eigenvalue, r.fidelity, r.trace_distance
        );
    }
    Ok(())
}
