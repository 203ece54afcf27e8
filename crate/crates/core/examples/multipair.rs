// Several atom pairs mapped onto one pair of modes, whose entanglement
// grows to n ebits, and mapped back onto fresh atom pairs.

use crosskerr::protocols::{multipair_reciprocation, multipair_transfer, Settings};
use crosskerr::{CoherentLabel, Result};

pub fn run_example() -> Result<()> {
    let settings = Settings::default();
    let alpha = CoherentLabel::from(6.0);
    for n in 1..=3 {
        let r = multipair_transfer(n, alpha, None, &settings)?;
        println!(
            "{n} pair(s): embedded dimension {}, entropy in [{:.6}, {:.6}]",
            r.get("embedded_dim").unwrap(),
            r.get("entropy_min").unwrap(),
            r.get("entropy_max").unwrap()
        );
    }

    let r = multipair_reciprocation(2, alpha, Some("+-++"), &settings)?;
    println!(
        "2 pairs back to atoms: success probability {:.4}, fidelity {:.9}, entropy {:.6}",
        r.get("success_probability").unwrap(),
        r.get("fidelity").unwrap(),
        r.get("entropy").unwrap()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
