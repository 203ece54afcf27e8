// A Bell pair of atoms written onto two cavity modes. Equal x outcomes
// give the odd entangled coherent state (one ebit for any amplitude);
// opposite outcomes give the even one, whose entanglement depends on γ.

use crosskerr::protocols::{entanglement_transfer, Settings};
use crosskerr::{CoherentLabel, Result};

pub fn run_example() -> Result<()> {
    println!("{:>5} {:>8} {:>8} {:>12} {:>12}", "γ", "P(odd)", "P(even)", "E(odd)", "E(even)");
    for g in [0.25, 0.5, 1.0, 2.0, 3.0] {
        let gamma = CoherentLabel::new(0.0, g);
        let r = entanglement_transfer(gamma, gamma, &Settings::default())?;
        let get = |k: &str| r.get(k).unwrap_or(f64::NAN);
        println!(
            "{g:>5} {:>8.4} {:>8.4} {:>12.8} {:>12.8}",
            get("p_odd"),
            get("p_even"),
            get("entropy_odd"),
            get("entropy_even")
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
