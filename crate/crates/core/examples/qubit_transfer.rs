// Moving an atomic qubit onto a second atom through the Ising gate, and
// onto a pair of coherent states through the conditional phase gate.

use crosskerr::protocols::{transfer_qubit_to_cv, transfer_qubit_to_qubit, Settings};
use crosskerr::{CoherentLabel, Result};

pub fn run_example() -> Result<()> {
    let settings = Settings::default();
    let (a, b) = (0.6, 0.8);

    let r = transfer_qubit_to_qubit(a, b, &settings)?;
    for br in &r.branches {
        println!(
            "atom -> atom, outcome {}: p = {:.3}, fidelity after correction {:.12}",
            br.label,
            br.probability,
            br.fidelity.unwrap_or(f64::NAN)
        );
    }

    for alpha in [0.5, 1.0, 2.0] {
        let r = transfer_qubit_to_cv(a, b, CoherentLabel::from(alpha), false, &settings)?;
        for br in &r.branches {
            println!(
                "atom -> field, α = {alpha}, outcome {}: p = {:.4}, fidelity {:.6}",
                br.label,
                br.probability,
                br.fidelity.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
