// Telling `|iα>` from `|-iα>` with a displacement and a resonant probe atom.
// A probe found excited identifies `|iα>`; a probe in the ground state is
// inconclusive.

use std::f64::consts::PI;

use crosskerr::dynamics::JCParams;
use crosskerr::hilbert::{coherent_state, default_cutoff};
use crosskerr::measurement::homodyne_phase_discriminator;
use crosskerr::{CoherentLabel, Result};

pub fn run_example() -> Result<()> {
    let probe = JCParams::new(0.0, 1.0, PI)?;
    println!("{:>5} {:>12} {:>12}", "|α|", "P(e | iα)", "P(e | -iα)");
    for a in [0.5, 1.0, 2.0, 3.0] {
        let alpha = CoherentLabel::from(a);
        let n = default_cutoff(a);
        let p_excited = |field: CoherentLabel| -> Result<f64> {
            let state = coherent_state(field, n)?;
            let out = homodyne_phase_discriminator(&state, 0, alpha, &probe, 1e-8)?;
            Ok(out.iter().find(|b| b.label == "e").map_or(0.0, |b| b.probability))
        };
        let up = alpha.rotated(PI / 2.0);
        println!("{a:>5} {:>12.6} {:>12.2e}", p_excited(up)?, p_excited(-up)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
