use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use crate::dynamics::{hadamard, ising_gate, pauli_x, DispersivePhase};
use crate::entanglement::CoherentQubitBasis;
use crate::hilbert::{coherent_overlap, coherent_state_with, CoherentLabel, HybridState};
use crate::measurement::{project_atom, AtomBasis, BranchOutcome};
use crate::protocols::{
    as_array2, check_label, check_real_amplitudes, conditional_phase, BranchReport, BranchState,
    Diagnostics, Protocol, ProtocolReport, Settings,
};
use crate::{Result, C64};

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Branches of `(a|0> + b|1>)₁|+>₂ → ising_gate(π) → x measurement of
/// qubit 1`, before any correction. Branch states live on qubit 2 alone:
/// `a|+> ± b|->` for outcome `±`.
pub fn ising_transfer_branches(a: f64, b: f64) -> Result<Vec<BranchOutcome>> {
    check_real_amplitudes(a, b)?;
    let plus = HybridState::qubit(real(FRAC_1_SQRT_2), real(FRAC_1_SQRT_2));
    let input = HybridState::qubit(real(a), real(b)).tensor(&plus);
    let entangled = ising_gate(PI).apply(&input, &[0, 1])?;
    project_atom(&entangled, 0, AtomBasis::X)
}

/// Teleports `a|0> + b|1>` from qubit 1 to qubit 2. Outcome `-` is fixed by
/// `σ_x`; both outcomes then take the Hadamard byproduct. Both branches are
/// kept and scored against the input state.
pub fn transfer_qubit_to_qubit(a: f64, b: f64, settings: &Settings) -> Result<ProtocolReport> {
    settings.validate()?;
    let target = HybridState::qubit(real(a), real(b));
    let h = hadamard();
    let mut branches = Vec::new();
    for raw in ising_transfer_branches(a, b)? {
        let correction = if raw.label == "-" {
            h.matrix() * pauli_x().matrix()
        } else {
            h.matrix().clone()
        };
        let mut report = BranchReport::new(raw.label, raw.probability, true);
        report.correction = Some(as_array2(&correction));
        if let Some(s) = raw.state {
            let out = s.apply(&correction, &[0])?;
            report.fidelity = Some(out.fidelity(&target)?);
            report.purity = Some(1.0);
            report.state = Some(BranchState::Pure(out));
        }
        branches.push(report);
    }
    let mut report = ProtocolReport::new(Protocol::TransferQubitToQubit, branches, Diagnostics::default());
    report.summarize_kept();
    Ok(report)
}

/// Writes `a|g> + b|e>` onto a field prepared in `|α>`: `C_p`, then a y
/// measurement of the atom. The `±y` branches carry `a|iα> ∓ b|-iα>`; the
/// `-y` branch is the faithful copy, and `postselect` keeps it alone.
///
/// Branch fidelities are taken against `a|ψ₊> + b|ψ₋>` in the orthonormal
/// basis built on `(iα, -iα)`. Summary entries `norm_plus_y` and
/// `norm_minus_y` are the normalizations `(1 ∓ 2ab<iα|-iα>)^{-1/2}` of the
/// two branch states.
pub fn transfer_qubit_to_cv(
    a: f64,
    b: f64,
    alpha: CoherentLabel,
    postselect: bool,
    settings: &Settings,
) -> Result<ProtocolReport> {
    settings.validate()?;
    check_real_amplitudes(a, b)?;
    check_label("alpha", alpha)?;
    let mut diag = Diagnostics::default();
    let (n, policy) = settings.mode_cutoff(alpha.magnitude(), &mut diag);
    settings.check_validity(alpha.magnitude(), &mut diag)?;

    let input = HybridState::qubit(real(a), real(b)).tensor(&coherent_state_with(alpha, n, policy)?);
    let out = conditional_phase(&input, DispersivePhase::cp(), 0, 1, settings)?;

    let up = alpha.rotated(FRAC_PI_2);
    let target = match CoherentQubitBasis::new(up, -up, n) {
        Ok(basis) => Some(
            basis
                .plus
                .clone()
                .scaled(real(a))
                .add_scaled(real(b), &basis.minus)?
                .normalized()?,
        ),
        Err(_) => {
            diag.warnings.push("coherent pair is degenerate; no target qubit".into());
            None
        }
    };

    let mut branches = Vec::new();
    for o in project_atom(&out, 0, AtomBasis::Y)? {
        let kept = !postselect || o.label == "-";
        let mut report = BranchReport::new(format!("{}y", o.label), o.probability, kept);
        if let Some(s) = o.state {
            report.fidelity = target.as_ref().map(|t| s.fidelity(t)).transpose()?;
            report.purity = Some(1.0);
            report.state = Some(BranchState::Pure(s));
        }
        branches.push(report);
    }

    let overlap = coherent_overlap(up.0, -up.0).re;
    let mut report = ProtocolReport::new(Protocol::TransferQubitToCv, branches, diag);
    report.summarize_kept();
    report.set("overlap", overlap);
    report.set("norm_plus_y", (1.0 - 2.0 * a * b * overlap).powf(-0.5));
    report.set("norm_minus_y", (1.0 + 2.0 * a * b * overlap).powf(-0.5));
    Ok(report)
}
