//! Partial bleaching: trace distance from I/2 and the fidelity bound over the
//! default grid of p.

use nohiding_lab::nohiding::{default_grid, run_sweep, sweep_to_csv, Variant};
use nohiding_lab::tomo::Shots;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let records = run_sweep(Variant::Eq2, &default_grid(), Shots::Count(4096), 7)?;
    println!("{:>10} {:>10} {:>10} {:>10} {:>10}", "p", "D exact", "D tomo", "F exact", "F bound");
    for r in &records {
        println!(
            "{:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            r.p, r.trace_distance_to_mixed, r.tomography.trace_distance, r.fidelity_to_mixed, r.fidelity_lower_bound
        );
    }
    if std::env::args().any(|a| a == "--csv") {
        print!("{}", sweep_to_csv(&records));
    }
    Ok(())
}
