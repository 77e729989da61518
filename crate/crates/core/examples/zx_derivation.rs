//! Scripted ZX derivation of the bleaching diagram and automatic
//! simplification of the full circuit.

use nohiding_lab::zx::{eq6_full_diagram, evaluate, proportionality, scripted_derivation, verified_simplify};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = scripted_derivation()?;
    println!("initial: {} nodes", d.initial.num_nodes());
    for (i, s) in d.stages.iter().enumerate() {
        let rules: Vec<String> = s.steps.iter().map(|st| st.rule.to_string()).collect();
        println!("stage {} [{}]: {} -> {} nodes", i + 1, s.label, rules.join(" "), s.diagram.num_nodes());
    }
    println!("scalar {:.6}", d.scalar());

    let before = eq6_full_diagram()?;
    let s = verified_simplify(&before);
    let (_, dev) = proportionality(&evaluate(&before)?, &evaluate(&s.diagram)?).ok_or("zero map")?;
    println!(
        "simplify: {} -> {} nodes in {} steps, deviation {dev:.1e}",
        before.num_nodes(),
        s.diagram.num_nodes(),
        s.steps.len()
    );
    Ok(())
}
