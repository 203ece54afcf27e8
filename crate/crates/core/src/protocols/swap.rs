use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use std::str::FromStr;

use crate::dynamics::{DispersivePhase, JCParams};
use crate::entanglement::{entanglement_entropy, psi_plus};
use crate::hilbert::{coherent_ket, CoherentLabel, HybridState, RegisterLayout};
use crate::measurement::{
    check_normalized, homodyne_phase_discriminator, ideal_phase_projection, project_atom,
    span_residual, AtomBasis,
};
use crate::protocols::{
    align_qubit, as_array2, check_label, check_shape, coherent_pair_superposition, conditional_phase,
    BranchReport, BranchState, Diagnostics, Protocol, ProtocolReport, Settings,
};
use crate::{Error, Result, C64};

/// How mode b is read out in [`entanglement_swap`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SwapDetector {
    /// Displacement by `iα` and a resonant probe atom; only a probe found
    /// excited identifies the phase.
    #[default]
    Homodyne,
    /// Projection onto `{|iα>, |-iα>}`.
    Ideal,
}

impl FromStr for SwapDetector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "homodyne" => Ok(SwapDetector::Homodyne),
            "ideal" => Ok(SwapDetector::Ideal),
            _ => Err(Error::Parameter(format!("unknown swap detector '{s}' (homodyne, ideal)"))),
        }
    }
}

/// Swap with the standard resources: the odd state `∝ |α,α> - |-α,-α>` on
/// modes (a, b) and `|ψ₊>` on atoms (1, 2). See [`swap_from_resources`].
pub fn entanglement_swap(alpha: CoherentLabel, detector: SwapDetector, settings: &Settings) -> Result<ProtocolReport> {
    settings.validate()?;
    check_label("alpha", alpha)?;
    let mut scratch = Diagnostics::default();
    let (n, _) = settings.mode_cutoff(alpha.magnitude(), &mut scratch);
    let fields = coherent_pair_superposition((alpha, alpha), (-alpha, -alpha), C64::new(-1.0, 0.0), (n, n))
        .map_err(|_| Error::Precondition("odd coherent state vanishes for zero amplitude".into()))?;
    swap_from_resources(&fields, &psi_plus(), alpha, detector, settings)
}

/// Atoms (1, 2) and modes (a, b) in the given resource states: `C_p` on
/// (2, b), readout of b, y measurement of atom 2, then the local unitary on
/// atom 1 that best aligns the (1, a) pair with `(|g,α> + |e,-α>)/√2`.
///
/// Branch labels name the b readout (`e`/`g` for the probe, `+i`/`-i` for
/// the ideal phase) and the y outcome of atom 2. With the homodyne detector
/// a ground-state probe is inconclusive; that branch is reported but not
/// kept. The applied unitaries are listed per branch.
pub fn swap_from_resources(
    fields: &HybridState,
    atoms: &HybridState,
    alpha: CoherentLabel,
    detector: SwapDetector,
    settings: &Settings,
) -> Result<ProtocolReport> {
    settings.validate()?;
    check_label("alpha", alpha)?;
    check_shape(fields, 0, 2, "field resource")?;
    if atoms.layout() != &RegisterLayout::qubits_only(2) {
        return Err(Error::Dimension("atom resource must be two qubits".into()));
    }
    check_normalized(fields)?;
    check_normalized(atoms)?;
    let mut diag = Diagnostics::default();
    let cut = fields.layout().mode_cutoffs().to_vec();
    for &n in &cut {
        diag.note_mode(alpha.magnitude(), n);
    }
    settings.check_validity(alpha.magnitude(), &mut diag)?;
    let pair = vec![alpha, -alpha];
    let residual = span_residual(fields, &[(0, pair.clone()), (1, pair)])?;
    if residual > settings.residual_bound {
        return Err(Error::Precondition(format!(
            "field resource outside span{{|±α>}}⊗span{{|±α>}}: residual weight {residual:.3e}"
        )));
    }

    let state = atoms.tensor(fields);
    let state = conditional_phase(&state, DispersivePhase::cp(), 1, 3, settings)?;

    let ket = |l: CoherentLabel| HybridState::mode(coherent_ket(l.0, cut[0]));
    let target = HybridState::ground()
        .tensor(&ket(alpha))
        .add_scaled(C64::new(1.0, 0.0), &HybridState::excited().tensor(&ket(-alpha)))?
        .normalized()
        .ok();

    let mut branches = Vec::new();
    let up = alpha.rotated(FRAC_PI_2);
    let readout = match detector {
        SwapDetector::Homodyne => {
            let probe = JCParams::new(0.0, 1.0, PI)?;
            homodyne_phase_discriminator(&state, 3, alpha, &probe, settings.residual_bound)?
        }
        SwapDetector::Ideal => {
            let mut out = ideal_phase_projection(&state, 3, &[up, -up], settings.residual_bound)?;
            for (o, l) in out.iter_mut().zip(["+i", "-i"]) {
                o.label = l.to_string();
            }
            out
        }
    };
    for o in readout {
        let conclusive = detector == SwapDetector::Ideal || o.label == "e";
        let s = match o.state {
            Some(s) if conclusive => s,
            state => {
                // Inconclusive readouts are listed but discarded; an
                // impossible conclusive one is kept with no state.
                let mut report = BranchReport::new(o.label, o.probability, conclusive);
                report.state = state.map(BranchState::Pure);
                branches.push(report);
                continue;
            }
        };
        let rest = match detector {
            SwapDetector::Ideal => s,
            SwapDetector::Homodyne => {
                let (rest, _, r) = s.factor_out(3)?;
                diag.note_residual(r);
                rest
            }
        };
        for y in project_atom(&rest, 1, AtomBasis::Y)? {
            let p = o.probability * y.probability;
            let mut report = BranchReport::new(format!("{},{}", o.label, y.label), p, true);
            if let Some(pair) = y.state {
                let pair = match &target {
                    Some(t) => {
                        let u = align_qubit(&pair, t, 0)?;
                        let aligned = pair.apply(&u, &[0])?;
                        report.correction = Some(as_array2(&u));
                        report.fidelity = Some(aligned.fidelity(t)?);
                        aligned
                    }
                    None => pair,
                };
                report.entropy = Some(entanglement_entropy(&pair, &[0])?);
                report.purity = Some(1.0);
                report.state = Some(BranchState::Pure(pair));
            }
            branches.push(report);
        }
    }
    let mut report = ProtocolReport::new(Protocol::EntanglementSwap, branches, diag);
    report.summarize_kept();
    if report.kept().all(|b| b.state.is_none()) {
        report
            .diagnostics
            .warnings
            .push("no conclusive readout of mode b".into());
    }
    Ok(report)
}
