// Coherent states in a truncated Fock space: cutoff rule, truncation loss,
// overlaps and displacement.

use crosskerr::hilbert::{
    coherent_overlap, coherent_state, default_cutoff, displacement, truncation_loss, CutoffPolicy,
};
use crosskerr::{CoherentLabel, Result, C64};

pub fn run_example() -> Result<()> {
    for alpha in [0.5, 2.0, 6.0] {
        let n = default_cutoff(alpha);
        println!("|α| = {alpha}: n_max = {n}, truncation loss = {:.2e}", truncation_loss(alpha, n));
    }

    let alpha = CoherentLabel::new(0.0, 2.0);
    let n = default_cutoff(alpha.magnitude());
    let plus = coherent_state(alpha, n)?;
    let minus = coherent_state(-alpha, n)?;
    let numeric = plus.inner(&minus)?;
    let exact = coherent_overlap(alpha.0, -alpha.0);
    println!("<2i|-2i> numeric {numeric:.6e}, closed form {exact:.6e}");

    // D(α)|0> is the coherent state itself.
    let vacuum = coherent_state(0.0.into(), n)?;
    let d = displacement(alpha, n, 0.0, CutoffPolicy::Enforce)?;
    let shifted = d.apply(&vacuum, &[0])?;
    println!("fidelity of D(2i)|0> with |2i>: {:.12}", shifted.fidelity(&plus)?);

    let cat = plus.add_scaled(C64::new(-1.0, 0.0), &minus)?.normalized()?;
    let photons: f64 = cat
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, c)| k as f64 * c.norm_sqr())
        .sum();
    println!("odd cat |2i> - |-2i>: mean photon number {photons:.6}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
