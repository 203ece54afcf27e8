// Returning an entangled coherent state to two fresh atoms, with an ideal
// field measurement and with Gaussian measurement noise of width Δ.

use crosskerr::protocols::{
    fidelity_formula, reciprocation, ReciprocationMode, Settings,
};
use crosskerr::Result;

pub fn run_example() -> Result<()> {
    let settings = Settings::default();
    let ideal = reciprocation(2.0.into(), 2.0.into(), ReciprocationMode::Ideal, &settings)?;
    println!("ideal measurement, α = β = 2: fidelity {:.12}", ideal.get("fidelity").unwrap());

    println!("{:>3} {:>3} {:>5} {:>12} {:>12}", "α", "β", "Δ", "simulated", "closed form");
    for (a, b) in [(2.0, 2.0), (3.0, 3.0)] {
        for width in [0.0, 1.0, 3.0, 5.0] {
            let r = reciprocation(a.into(), b.into(), ReciprocationMode::Gaussian { width }, &settings)?;
            println!(
                "{a:>3} {b:>3} {width:>5} {:>12.7} {:>12.7}",
                r.get("fidelity").unwrap(),
                fidelity_formula(a, b, width)
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
