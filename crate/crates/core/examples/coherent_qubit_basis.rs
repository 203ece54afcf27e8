// Two coherent states as a logical qubit: the orthonormal basis built on
// `|α>` and `|β>`, the one-ebit test and entanglement in the embedded space.

use crosskerr::entanglement::{one_ebit_condition, CoherentQubitBasis, EbitQuery, EbitVariant};
use crosskerr::hilbert::default_cutoff;
use crosskerr::{CoherentLabel, Result};
use std::f64::consts::PI;

pub fn run_example() -> Result<()> {
    for a in [0.25, 0.5, 1.0, 2.0] {
        let alpha = CoherentLabel::from(a);
        let basis = CoherentQubitBasis::new(alpha, -alpha, default_cutoff(a))?;
        println!("α = {a}: θ = {:.6}, sin 2θ = {:.6}", basis.theta, basis.sin_two_theta());
    }

    println!("{:>5} {:>8} {:>10} {:>8}", "|α|", "ψ", "entropy", "1 ebit");
    for a in [0.5, 1.0, 2.0] {
        for psi in [0.0, PI] {
            let alpha = CoherentLabel::from(a);
            let q = EbitQuery {
                alpha: (alpha, alpha),
                beta: (-alpha, -alpha),
                psi,
                variant: EbitVariant::SameSame,
            };
            let check = one_ebit_condition(&q, 1e-9)?;
            println!("{a:>5} {psi:>8.4} {:>10.6} {:>8}", q.entropy()?, check.holds);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
