use std::f64::consts::FRAC_PI_2;

use crate::dynamics::DispersivePhase;
use crate::entanglement::{embed_modes, entanglement_entropy, psi_plus, CoherentQubitBasis};
use crate::hilbert::{coherent_ket, coherent_state_with, CoherentLabel, HybridState, RegisterLayout};
use crate::measurement::AtomBasis;
use crate::protocols::{
    check_label, conditional_phase, measure_leading_atoms, BranchReport, BranchState,
    Diagnostics, Protocol, ProtocolReport, Settings,
};
use crate::{Error, Result, C64};

/// Normalized `|f_a, f_b> + c|s_a, s_b>` on two modes with the given
/// cutoffs (no truncation check).
pub fn coherent_pair_superposition(
    first: (CoherentLabel, CoherentLabel),
    second: (CoherentLabel, CoherentLabel),
    coefficient: C64,
    cutoffs: (usize, usize),
) -> Result<HybridState> {
    let mode = |l: CoherentLabel, n: usize| HybridState::mode(coherent_ket(l.0, n));
    let f = mode(first.0, cutoffs.0).tensor(&mode(first.1, cutoffs.1));
    let s = mode(second.0, cutoffs.0).tensor(&mode(second.1, cutoffs.1));
    f.add_scaled(coefficient, &s)?.normalized()
}

/// Atoms `|ψ₊>₁₂` and fields `|α, β>`: `C_p` on (1, a), `C_p†` on (2, b),
/// then both atoms measured in the x basis.
///
/// Equal outcomes leave the odd state `∝ |-iα,-iβ> - |iα,iβ>`, which carries
/// one ebit and is kept; opposite outcomes leave the even state
/// `∝ |-iα,-iβ> + |iα,iβ>`. Entropies are computed in the orthonormal
/// coherent-state bases of each mode.
pub fn entanglement_transfer(alpha: CoherentLabel, beta: CoherentLabel, settings: &Settings) -> Result<ProtocolReport> {
    entanglement_transfer_from(&psi_plus(), alpha, beta, settings)
}

/// [`entanglement_transfer`] from a given two-atom state. Branch targets
/// assume that state is `|ψ₊>` up to a phase.
pub fn entanglement_transfer_from(
    atoms: &HybridState,
    alpha: CoherentLabel,
    beta: CoherentLabel,
    settings: &Settings,
) -> Result<ProtocolReport> {
    settings.validate()?;
    check_label("alpha", alpha)?;
    check_label("beta", beta)?;
    if atoms.layout() != &RegisterLayout::qubits_only(2) {
        return Err(Error::Dimension("atom resource must be two qubits".into()));
    }
    crate::measurement::check_normalized(atoms)?;
    let mut diag = Diagnostics::default();
    let (na, pa) = settings.mode_cutoff(alpha.magnitude(), &mut diag);
    let (nb, pb) = settings.mode_cutoff(beta.magnitude(), &mut diag);
    settings.check_validity(alpha.magnitude().max(beta.magnitude()), &mut diag)?;

    let fields = coherent_state_with(alpha, na, pa)?.tensor(&coherent_state_with(beta, nb, pb)?);
    let state = atoms.tensor(&fields);
    let state = conditional_phase(&state, DispersivePhase::cp(), 0, 2, settings)?;
    let state = conditional_phase(&state, DispersivePhase::cp_dagger(), 1, 3, settings)?;

    let lo = (alpha.rotated(-FRAC_PI_2), beta.rotated(-FRAC_PI_2));
    let hi = (alpha.rotated(FRAC_PI_2), beta.rotated(FRAC_PI_2));
    let spans = match (
        CoherentQubitBasis::new(lo.0, hi.0, na),
        CoherentQubitBasis::new(lo.1, hi.1, nb),
    ) {
        (Ok(a), Ok(b)) => Some((a.span(), b.span())),
        _ => {
            diag.warnings.push("coherent pair is degenerate; entropies taken in the Fock basis".into());
            None
        }
    };

    let mut branches = Vec::new();
    for raw in measure_leading_atoms(&state, 2, AtomBasis::X)? {
        let odd = raw.outcome[0] == raw.outcome[1];
        let mut report = BranchReport::new(raw.label, raw.probability, odd);
        if let Some(s) = raw.state {
            let sign = if odd { -1.0 } else { 1.0 };
            if let Ok(target) = coherent_pair_superposition(lo, hi, C64::new(sign, 0.0), (na, nb)) {
                report.fidelity = Some(s.fidelity(&target)?);
            }
            report.entropy = Some(match &spans {
                Some((sa, sb)) => {
                    let e = embed_modes(&s, &[(0, sa), (1, sb)])?;
                    diag.note_residual(e.residual);
                    entanglement_entropy(&e.state, &[0])?
                }
                None => entanglement_entropy(&s, &[0])?,
            });
            report.purity = Some(1.0);
            report.state = Some(BranchState::Pure(s));
        }
        branches.push(report);
    }

    let mut report = ProtocolReport::new(Protocol::EntanglementTransfer, branches, diag);
    report.summarize_kept();
    let p = |l: &str| report.branch(l).map_or(0.0, |b| b.probability);
    let (p_odd, p_even) = (p("++") + p("--"), p("+-") + p("-+"));
    let e = |l: &str| report.branch(l).and_then(|b| b.entropy);
    let (e_odd, e_even) = (e("++"), e("+-"));
    report.set("p_odd", p_odd);
    report.set("p_even", p_even);
    if let Some(v) = e_odd {
        report.set("entropy_odd", v);
    }
    if let Some(v) = e_even {
        report.set("entropy_even", v);
    }
    Ok(report)
}
