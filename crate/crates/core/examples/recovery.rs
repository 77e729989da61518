//! Erasure followed by decoding, with tomography of the Bell pair and the
//! recovered qubit.

use nohiding_lab::nohiding::{run_perfect, Variant};
use nohiding_lab::tomo::Shots;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for v in Variant::ALL {
        let exact = run_perfect(v, None, Shots::Exact, 0)?;
        let sampled = run_perfect(v, None, Shots::Count(8192), 42)?;
        println!(
            "{v:?}: exact F_bell = {:.6}, F_psi = {:.6}; 8192 shots F_bell = {:.5}, F_psi = {:.5}",
            exact.bell_fidelity, exact.transfer_fidelity, sampled.bell_fidelity_tomo, sampled.transfer_fidelity_tomo
        );
    }
    Ok(())
}
