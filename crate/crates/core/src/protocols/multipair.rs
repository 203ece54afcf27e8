use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::dynamics::DispersivePhase;
use crate::entanglement::{embed_modes, entanglement_entropy, Bell, OrthonormalSpan};
use crate::hilbert::{coherent_state_with, tensor, CoherentLabel, HybridState};
use crate::measurement::{check_normalized, joint_phase_projection, AtomBasis};
use crate::protocols::{
    check_label, check_shape, conditional_phase, measure_leading_atoms, BranchReport, BranchState,
    Diagnostics, Protocol, ProtocolReport, Settings,
};
use crate::{Error, Result, C64};

/// Largest number of atom pairs accepted at default settings; four pairs
/// would need 16-component spans and 256 atomic outcomes per cutoff square.
pub const MAX_PAIRS: usize = 3;

// Relative singular-value floor for the orthogonalized coherent spans.
const SPAN_RANK_TOL: f64 = 1e-8;

/// `α e^{iπ(x₁/2 + x₂/4 + … + x_n/2ⁿ)}`.
pub fn multipair_label(alpha: CoherentLabel, bits: &[bool]) -> CoherentLabel {
    let theta: f64 = bits
        .iter()
        .enumerate()
        .filter(|(_, &x)| x)
        .map(|(k, _)| PI / 2f64.powi(k as i32 + 1))
        .sum();
    alpha.rotated(theta)
}

/// Conditional phase of pair `k` (zero-based): `π/2^{k+1}`.
fn pair_phase(k: usize) -> f64 {
    PI / 2f64.powi(k as i32 + 1)
}

fn check_pairs(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("need at least one atom pair".into()));
    }
    if n > MAX_PAIRS {
        return Err(Error::Precondition(format!(
            "{n} pairs exceed the truncation budget (at most {MAX_PAIRS})"
        )));
    }
    Ok(())
}

fn check_outcomes(outcomes: &str, n: usize) -> Result<()> {
    if outcomes.len() != 2 * n || !outcomes.chars().all(|c| c == '+' || c == '-') {
        return Err(Error::Parameter(format!(
            "outcome string must have {} characters from '+'/'-', got '{outcomes}'",
            2 * n
        )));
    }
    Ok(())
}

/// Field amplitudes reachable on either mode after the transfer pattern:
/// `α e^{iΣ ±π/2^k}`.
fn transfer_candidates(alpha: CoherentLabel, n: usize) -> Vec<CoherentLabel> {
    (0..1usize << n)
        .map(|mask| {
            let theta: f64 = (0..n)
                .map(|k| if mask >> k & 1 == 1 { -pair_phase(k) } else { pair_phase(k) })
                .sum();
            alpha.rotated(theta)
        })
        .collect()
}

/// Amplitudes after transfer and reversed interaction: `α e^{ijπ/2^{n-1}}`,
/// starting with `α` itself.
fn return_candidates(alpha: CoherentLabel, n: usize) -> Vec<CoherentLabel> {
    let step = PI / 2f64.powi(n as i32 - 1);
    (0..1usize << n).map(|j| alpha.rotated(step * j as f64)).collect()
}

/// `n` pairs `|ψ₊>` (atoms ordered `1₁, 2₁, 1₂, 2₂, …`) with fields
/// `|α>_a|α>_b`. Pair `k` couples to a and b with phase `π/2^k`, atom `1_k`
/// through `C_p` and atom `2_k` through `C_p†`; every atom is then measured
/// in the x basis.
///
/// Each branch leaves a superposition of `2ⁿ` product coherent states; its
/// entropy is computed in the orthogonalized span of the reachable
/// amplitudes. With `outcomes` only the matching branch is kept.
pub fn multipair_transfer(
    n: usize,
    alpha: CoherentLabel,
    outcomes: Option<&str>,
    settings: &Settings,
) -> Result<ProtocolReport> {
    settings.validate()?;
    check_pairs(n)?;
    check_label("alpha", alpha)?;
    if let Some(o) = outcomes {
        check_outcomes(o, n)?;
    }
    let mut diag = Diagnostics::default();
    let (nm, policy) = settings.mode_cutoff(alpha.magnitude(), &mut diag);
    diag.note_mode(alpha.magnitude(), nm);
    settings.check_validity(alpha.magnitude(), &mut diag)?;

    let pairs: Vec<HybridState> = (0..n).map(|_| Bell::PsiPlus.state()).collect();
    let field = coherent_state_with(alpha, nm, policy)?;
    let mut state = tensor(&pairs.iter().collect::<Vec<_>>()).tensor(&field.tensor(&field));
    let (a, b) = (2 * n, 2 * n + 1);
    for k in 0..n {
        let phi = pair_phase(k);
        state = conditional_phase(&state, DispersivePhase::new(phi, 1)?, 2 * k, a, settings)?;
        state = conditional_phase(&state, DispersivePhase::new(phi, -1)?, 2 * k + 1, b, settings)?;
    }

    let span = OrthonormalSpan::from_labels(&transfer_candidates(alpha, n), nm, SPAN_RANK_TOL)?;
    if span.dim() < 1 << n {
        diag.warnings.push(format!(
            "only {} of {} coherent components are resolvable at |α| = {}",
            span.dim(),
            1 << n,
            alpha.magnitude()
        ));
    }

    let mut branches = Vec::new();
    for raw in measure_leading_atoms(&state, 2 * n, AtomBasis::X)? {
        let kept = outcomes.is_none_or(|o| o == raw.label);
        let mut report = BranchReport::new(raw.label, raw.probability, kept);
        if let Some(s) = raw.state {
            let e = embed_modes(&s, &[(0, &span), (1, &span)])?;
            diag.note_residual(e.residual);
            report.entropy = Some(entanglement_entropy(&e.state, &[0])?);
            report.purity = Some(1.0);
            report.state = Some(BranchState::Pure(s));
        }
        branches.push(report);
    }
    let mut report = ProtocolReport::new(Protocol::MultipairTransfer, branches, diag);
    report.summarize_kept();
    report.set("embedded_dim", span.dim() as f64);
    Ok(report)
}

/// Transfer of `n` pairs (branch `outcomes`, default all `+`) followed by
/// [`multipair_reciprocate_state`].
pub fn multipair_reciprocation(
    n: usize,
    alpha: CoherentLabel,
    outcomes: Option<&str>,
    settings: &Settings,
) -> Result<ProtocolReport> {
    let all_plus = "+".repeat(2 * n);
    let outcomes = outcomes.unwrap_or(&all_plus);
    let transfer = multipair_transfer(n, alpha, Some(outcomes), settings)?;
    let fields = transfer
        .branch(outcomes)
        .and_then(BranchReport::pure_state)
        .ok_or_else(|| Error::Precondition(format!("transfer outcome '{outcomes}' has zero probability")))?;
    let mut report = multipair_reciprocate_state(n, alpha, fields, outcomes, settings)?;
    report.set("transfer_probability", transfer.kept_probability());
    report.diagnostics.warnings.extend(transfer.diagnostics.warnings);
    Ok(report)
}

/// Fresh atoms `|+>^{⊗2n}` meet a two-mode state left by
/// [`multipair_transfer`] with outcome string `transfer_outcomes`. Atom
/// `1_k` couples to a through `C_p†` and `2_k` to b through `C_p`, each at
/// phase `π/2^k`; both fields are then projected jointly onto the `2ⁿ`
/// candidates `α e^{ijπ/2^{n-1}}`.
///
/// The outcome `(α, α)` (label `0,0`) is the success branch and the only
/// one kept. Targets are products of `|ψ₊>` (or `|ψ₋>` for a pair whose two
/// transfer outcomes differed).
pub fn multipair_reciprocate_state(
    n: usize,
    alpha: CoherentLabel,
    fields: &HybridState,
    transfer_outcomes: &str,
    settings: &Settings,
) -> Result<ProtocolReport> {
    settings.validate()?;
    check_pairs(n)?;
    check_outcomes(transfer_outcomes, n)?;
    check_shape(fields, 0, 2, "field state")?;
    check_normalized(fields)?;
    let mut diag = Diagnostics::default();
    for &nm in fields.layout().mode_cutoffs() {
        diag.note_mode(alpha.magnitude(), nm);
    }
    settings.check_validity(alpha.magnitude(), &mut diag)?;

    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let plus = HybridState::qubit(s, s);
    let atoms: Vec<&HybridState> = (0..2 * n).map(|_| &plus).collect();
    let mut state = tensor(&atoms).tensor(fields);
    let (a, b) = (2 * n, 2 * n + 1);
    for k in 0..n {
        let phi = pair_phase(k);
        state = conditional_phase(&state, DispersivePhase::new(phi, -1)?, 2 * k, a, settings)?;
        state = conditional_phase(&state, DispersivePhase::new(phi, 1)?, 2 * k + 1, b, settings)?;
    }

    let signs: Vec<char> = transfer_outcomes.chars().collect();
    let target_pairs: Vec<HybridState> = (0..n)
        .map(|k| {
            if signs[2 * k] == signs[2 * k + 1] {
                Bell::PsiPlus.state()
            } else {
                Bell::PsiMinus.state()
            }
        })
        .collect();
    let target = tensor(&target_pairs.iter().collect::<Vec<_>>());
    let side_one: Vec<usize> = (0..n).map(|k| 2 * k).collect();

    let candidates = return_candidates(alpha, n);
    let sets = [(a, candidates.clone()), (b, candidates)];
    let mut branches = Vec::new();
    for o in joint_phase_projection(&state, &sets, settings.residual_bound)? {
        let label = format!("{},{}", o.outcome[0], o.outcome[1]);
        let success = o.outcome == [0, 0];
        let mut report = BranchReport::new(label, o.probability, success);
        if let Some(s) = o.state {
            report.fidelity = Some(s.fidelity(&target)?);
            report.entropy = Some(entanglement_entropy(&s, &side_one)?);
            report.purity = Some(1.0);
            report.state = Some(BranchState::Pure(s));
        }
        branches.push(report);
    }
    let mut report = ProtocolReport::new(Protocol::MultipairReciprocation, branches, diag);
    report.summarize_kept();
    let success = report.branch("0,0").cloned();
    report.set("success_probability", success.as_ref().map_or(0.0, |b| b.probability));
    if let Some(b) = success {
        if let Some(f) = b.fidelity {
            report.set("fidelity", f);
        }
        if let Some(e) = b.entropy {
            report.set("entropy", e);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::entanglement_transfer;

    #[test]
    fn label_phases() {
        let a = CoherentLabel::from(2.0);
        let l = multipair_label(a, &[false, true]);
        assert!((l.0 - 2.0 * C64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
        assert!((multipair_label(a, &[true]).0 - C64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn candidate_sets_are_distinct() {
        for n in 1..=3 {
            let c = transfer_candidates(CoherentLabel::from(1.0), n);
            for i in 0..c.len() {
                for j in 0..i {
                    assert!((c[i].0 - c[j].0).norm() > 1e-6);
                }
            }
            assert_eq!(return_candidates(CoherentLabel::from(1.0), n).len(), 1 << n);
        }
    }

    #[test]
    fn single_pair_matches_entanglement_transfer() {
        let alpha = CoherentLabel::from(1.3);
        let multi = multipair_transfer(1, alpha, None, &Settings::default()).unwrap();
        let single = entanglement_transfer(alpha, alpha, &Settings::default()).unwrap();
        for b in &single.branches {
            let m = multi.branch(&b.label).unwrap();
            assert!((m.probability - b.probability).abs() < 1e-12);
            let f = m.pure_state().unwrap().fidelity(b.pure_state().unwrap()).unwrap();
            assert!(f >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn single_pair_round_trip() {
        let r = multipair_reciprocation(1, 3.0.into(), None, &Settings::default()).unwrap();
        r.check_complete().unwrap();
        assert!(r.get("fidelity").unwrap() >= 1.0 - 1e-6);
    }

    #[test]
    fn mismatched_transfer_outcome_targets_psi_minus() {
        let r = multipair_reciprocation(1, 3.0.into(), Some("+-"), &Settings::default()).unwrap();
        assert!(r.get("fidelity").unwrap() >= 1.0 - 1e-6);
    }

    #[test]
    fn argument_checks() {
        let s = Settings::default();
        assert!(matches!(multipair_transfer(0, 1.0.into(), None, &s), Err(Error::Parameter(_))));
        assert!(matches!(multipair_transfer(4, 1.0.into(), None, &s), Err(Error::Precondition(_))));
        assert!(matches!(multipair_transfer(1, 1.0.into(), Some("+"), &s), Err(Error::Parameter(_))));
    }
}
