// The conditional phase gate: exact Jaynes-Cummings evolution at large
// detuning against the dispersive diagonal, plus the validity check.

use std::f64::consts::FRAC_PI_2;

use crosskerr::dynamics::{
    apply_dispersive, dispersive_validity, exact_jc_propagator, rotating_frame, DispersivePhase,
    JCParams,
};
use crosskerr::hilbert::{coherent_state, default_cutoff, HybridState};
use crosskerr::{CoherentLabel, Result};

pub fn run_example() -> Result<()> {
    let alpha = CoherentLabel::from(2.0);
    let n = default_cutoff(alpha.magnitude());
    let excited = HybridState::excited().tensor(&coherent_state(alpha, n)?);

    // Dispersive C_p: |e,α> -> -i|e,-iα>.
    let ideal = apply_dispersive(&excited, DispersivePhase::cp(), 0, 1)?;
    let target = HybridState::excited().tensor(&coherent_state(alpha.rotated(-FRAC_PI_2), n)?);
    println!("dispersive C_p fidelity with |e,-2i>: {:.12}", ideal.fidelity(&target)?);

    println!("{:>8} {:>14} {:>10}", "δ/λ", "1 - fidelity", "valid");
    for ratio in [10.0, 30.0, 100.0, 300.0] {
        let params = JCParams::for_dispersive_phase(ratio, FRAC_PI_2)?;
        let exact = exact_jc_propagator(&params, n)?.apply(&excited, &[0, 1])?;
        let exact = rotating_frame(params.delta, params.t).apply(&exact, &[0])?;
        let v = dispersive_validity(&params, alpha.magnitude().powi(2), alpha.magnitude(), 100.0)?;
        println!("{ratio:>8} {:>14.3e} {:>10}", 1.0 - exact.fidelity(&ideal)?, v.pass);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
