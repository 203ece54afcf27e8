// Entanglement swapping between an atom pair and an entangled coherent
// state, leaving atom 1 entangled with mode a.

use crosskerr::protocols::{entanglement_swap, Settings, SwapDetector};
use crosskerr::Result;

pub fn run_example() -> Result<()> {
    for detector in [SwapDetector::Homodyne, SwapDetector::Ideal] {
        for alpha in [0.5, 1.0, 2.0] {
            let r = entanglement_swap(alpha.into(), detector, &Settings::default())?;
            println!("{detector:?}, α = {alpha}:");
            for b in &r.branches {
                println!(
                    "  {:<5} p = {:.4} kept = {:<5} entropy = {:.6}",
                    b.label,
                    b.probability,
                    b.kept,
                    b.entropy.unwrap_or(f64::NAN)
                );
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
