// Projective atom measurements in the x, y and z bases, and the
// renormalized projection of a mode onto coherent-state candidates.

use crosskerr::entanglement::psi_plus;
use crosskerr::hilbert::{coherent_state, default_cutoff, HybridState};
use crosskerr::measurement::{ideal_phase_projection, project_atom, AtomBasis};
use crosskerr::{CoherentLabel, Result, C64};

pub fn run_example() -> Result<()> {
    let bell = psi_plus();
    for basis in [AtomBasis::X, AtomBasis::Y, AtomBasis::Z] {
        for b in project_atom(&bell, 0, basis)? {
            println!("ψ₊, atom 1 in {basis:?}: outcome {} with p = {:.3}", b.label, b.probability);
        }
    }

    // Atom entangled with a field: |g,α> + |e,-α>.
    let alpha = CoherentLabel::from(1.0);
    let n = default_cutoff(alpha.magnitude());
    let hybrid = HybridState::ground()
        .tensor(&coherent_state(alpha, n)?)
        .add_scaled(C64::new(1.0, 0.0), &HybridState::excited().tensor(&coherent_state(-alpha, n)?))?
        .normalized()?;
    for b in ideal_phase_projection(&hybrid, 1, &[alpha, -alpha], 1e-8)? {
        let atom = b.state.expect("both outcomes possible");
        let excited = atom.amplitudes()[1].norm_sqr();
        println!("field found at candidate {:?}: p = {:.3}, atom excited population {excited:.4}", b.outcome, b.probability);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
