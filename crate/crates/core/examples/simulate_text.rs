//! Parses a circuit in the text format and prints the output statevector.

use nohiding_lab::circuits::{parse_circuit, render_circuit, run_statevector};
use nohiding_lab::qmath::StateVector;

const SOURCE: &str = "\
# GHZ state
qubits 3
h 0
cx 0 1
cx 1 2
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => SOURCE.to_string(),
    };
    let c = parse_circuit(&text)?;
    print!("{}", render_circuit(&c)?);
    let out = run_statevector(&c, &StateVector::zero(c.num_qubits()))?;
    for (i, a) in out.amplitudes().iter().enumerate() {
        if a.norm() > 1e-12 {
            println!("|{i:0w$b}>  {:+.5}{:+.5}i", a.re, a.im, w = c.num_qubits());
        }
    }
    Ok(())
}
