use crate::dynamics::{exact_jc_propagator, JCParams};
use crate::hilbert::{coherent_ket, default_cutoff, displacement, CoherentLabel, CutoffPolicy, HybridState};
use crate::measurement::{check_normalized, project_atom, AtomBasis, BranchOutcome};
use crate::{Error, Ket, Matrix, Result, C64};

/// Largest weight a state may carry outside the span of the candidate
/// coherent states before a phase projection is refused.
pub const DEFAULT_RESIDUAL_BOUND: f64 = 1e-8;

fn label_of(c: CoherentLabel) -> String {
    format!("{:.6}{:+.6}i", c.0.re, c.0.im)
}

/// Orthogonal projector onto the span of truncated coherent kets. Nearly
/// dependent candidates are handled through the SVD rank.
fn span_projector(candidates: &[CoherentLabel], n_max: usize) -> Matrix {
    let kets: Vec<Ket> = candidates.iter().map(|c| coherent_ket(c.0, n_max)).collect();
    let m = Matrix::from_columns(&kets);
    let svd = m.svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max();
    let mut p = Matrix::zeros(n_max + 1, n_max + 1);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > 1e-7 * smax {
            let col = u.column(k);
            p += col * col.adjoint();
        }
    }
    p
}

/// Squared-norm fraction of `state` lying outside the product of the
/// candidate spans on the given modes.
pub fn span_residual(state: &HybridState, sets: &[(usize, Vec<CoherentLabel>)]) -> Result<f64> {
    let total = state.norm_sqr();
    if total == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let mut projected = state.clone();
    for (mode, candidates) in sets {
        let n_max = mode_cutoff(state, *mode)?;
        projected = projected.apply(&span_projector(candidates, n_max), &[*mode])?;
    }
    Ok((1.0 - projected.norm_sqr() / total).max(0.0))
}

fn mode_cutoff(state: &HybridState, mode: usize) -> Result<usize> {
    let layout = state.layout();
    layout.check(mode)?;
    if layout.is_qubit(mode) {
        return Err(Error::Dimension(format!("subsystem {mode} is a qubit, not a mode")));
    }
    Ok(layout.subsystem_dim(mode)? - 1)
}

/// Projects `mode` onto the coherent candidates `{|χ_j>}` with the
/// renormalized rule `p_j = ||<χ_j|ψ||² / Σ_k ||<χ_k|ψ||²`. The candidate
/// projectors are not orthogonal; the renormalization absorbs their overlap.
pub fn ideal_phase_projection(
    state: &HybridState,
    mode: usize,
    candidates: &[CoherentLabel],
    residual_bound: f64,
) -> Result<Vec<BranchOutcome>> {
    joint_phase_projection(state, &[(mode, candidates.to_vec())], residual_bound)
}

/// Joint projection of several modes onto products of candidates. Branch
/// `outcome` lists the candidate index per mode, in the order given.
pub fn joint_phase_projection(
    state: &HybridState,
    sets: &[(usize, Vec<CoherentLabel>)],
    residual_bound: f64,
) -> Result<Vec<BranchOutcome>> {
    check_normalized(state)?;
    let mut modes: Vec<usize> = sets.iter().map(|(m, _)| *m).collect();
    modes.sort_unstable();
    modes.dedup();
    if modes.len() != sets.len() {
        return Err(Error::Dimension("repeated mode in joint projection".into()));
    }
    if sets.iter().any(|(_, c)| c.is_empty()) {
        return Err(Error::Parameter("empty candidate set".into()));
    }
    let residual = span_residual(state, sets)?;
    if residual > residual_bound {
        return Err(Error::Precondition(format!(
            "field support outside the candidate span: residual weight {residual:.3e} exceeds {residual_bound:.1e}"
        )));
    }

    // Contract the highest mode index first so lower indices stay valid.
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by(|&i, &j| sets[j].0.cmp(&sets[i].0));
    let mut partial: Vec<(Vec<usize>, HybridState)> = vec![(vec![0; sets.len()], state.clone())];
    for &i in &order {
        let (mode, candidates) = &sets[i];
        let n_max = mode_cutoff(state, *mode)?;
        let kets: Vec<Ket> = candidates.iter().map(|c| coherent_ket(c.0, n_max)).collect();
        let mut next = Vec::with_capacity(partial.len() * kets.len());
        for (idx, s) in &partial {
            for (k, ket) in kets.iter().enumerate() {
                let mut idx = idx.clone();
                idx[i] = k;
                next.push((idx, s.contract(*mode, ket)?));
            }
        }
        partial = next;
    }
    partial.sort_by(|a, b| a.0.cmp(&b.0));

    let total: f64 = partial.iter().map(|(_, s)| s.norm_sqr()).sum();
    if total == 0.0 {
        return Err(Error::ZeroNorm);
    }
    partial
        .into_iter()
        .map(|(idx, s)| {
            let label = idx
                .iter()
                .enumerate()
                .map(|(i, &k)| label_of(sets[i].1[k]))
                .collect::<Vec<_>>()
                .join(",");
            let p = s.norm_sqr() / total;
            BranchOutcome::from_unnormalized(label, idx, p, s)
        })
        .collect()
}

/// Discriminates `|iα>` from `|-iα>` on `mode`: displaces by `iα` (the pair
/// becomes `|2iα>`, `|0>`), couples a fresh probe atom in `|g>` resonantly
/// for `λt = π`, and measures the probe in the z basis.
///
/// The probe is appended after the existing qubits, then measured away; the
/// branch states keep the mode in its displaced frame, with the cutoff raised
/// to fit `|2α|` where necessary. Branches come in the order `e`, `g`; only
/// `e` is conclusive (it rules out `|-iα>`).
pub fn homodyne_phase_discriminator(
    state: &HybridState,
    mode: usize,
    alpha: CoherentLabel,
    probe: &JCParams,
    residual_bound: f64,
) -> Result<Vec<BranchOutcome>> {
    if probe.delta != 0.0 {
        return Err(Error::Parameter(format!(
            "probe interaction must be resonant, got detuning {}",
            probe.delta
        )));
    }
    check_normalized(state)?;
    let i_alpha = CoherentLabel(alpha.0 * C64::new(0.0, 1.0));
    let residual = span_residual(state, &[(mode, vec![i_alpha, -i_alpha])])?;
    if residual > residual_bound {
        return Err(Error::Precondition(format!(
            "mode not supported on {{|iα>, |-iα>}}: residual weight {residual:.3e} exceeds {residual_bound:.1e}"
        )));
    }
    let needed = default_cutoff(2.0 * alpha.magnitude());
    let current = mode_cutoff(state, mode)?;
    let state = if current < needed {
        state.extend_mode(mode, needed)?
    } else {
        state.clone()
    };
    let n_max = current.max(needed);
    let d = displacement(i_alpha, n_max, alpha.magnitude(), CutoffPolicy::Enforce)?;
    let displaced = d.apply(&state, &[mode])?;

    let with_probe = displaced.insert_qubit([C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    let probe_index = state.layout().qubit_count();
    let u = exact_jc_propagator(probe, n_max)?;
    let evolved = u.apply(&with_probe, &[probe_index, mode + 1])?;
    project_atom(&evolved, probe_index, AtomBasis::Z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{coherent_overlap, coherent_state};
    use std::f64::consts::PI;

    fn mode_state(alpha: C64) -> HybridState {
        coherent_state(alpha.into(), default_cutoff(alpha.norm())).unwrap()
    }

    #[test]
    fn coherent_input_prefers_matching_candidate() {
        let chi = 2.0;
        let s = mode_state(C64::new(chi, 0.0));
        let c = [CoherentLabel::from(chi), CoherentLabel::from(-chi)];
        let out = ideal_phase_projection(&s, 0, &c, DEFAULT_RESIDUAL_BOUND).unwrap();
        // p₊ = 1/(1 + |<-χ|χ>|²) with <-χ|χ> = e^{-2χ²}.
        let leak = coherent_overlap(C64::new(-chi, 0.0), C64::new(chi, 0.0)).norm_sqr();
        assert!((out[0].probability - 1.0 / (1.0 + leak)).abs() < 1e-12);
        assert!((out[0].probability - (1.0 - (-16.0f64).exp())).abs() < 1e-12);
        assert!((out[0].probability + out[1].probability - 1.0).abs() < 1e-14);
    }

    #[test]
    fn large_amplitude_is_orthogonal_limit() {
        let s = mode_state(C64::new(6.0, 0.0));
        let c = [CoherentLabel::from(6.0), CoherentLabel::from(-6.0)];
        let out = ideal_phase_projection(&s, 0, &c, DEFAULT_RESIDUAL_BOUND).unwrap();
        assert_eq!(out[0].probability, 1.0);
        assert!(out[1].is_null());
    }

    #[test]
    fn off_span_input_is_refused_with_residual() {
        let s = mode_state(C64::new(0.0, 2.0));
        let c = [CoherentLabel::from(2.0), CoherentLabel::from(-2.0)];
        let err = ideal_phase_projection(&s, 0, &c, DEFAULT_RESIDUAL_BOUND).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn probabilities_ignore_global_phase() {
        let n = default_cutoff(2.0);
        let a = coherent_state(CoherentLabel::from(2.0), n).unwrap();
        let b = coherent_state(CoherentLabel::from(-2.0), n).unwrap();
        let s = a.scaled(C64::new(0.6, 0.0)).add_scaled(C64::new(0.0, 0.8), &b).unwrap().normalized().unwrap();
        let c = [CoherentLabel::from(2.0), CoherentLabel::from(-2.0)];
        let p = ideal_phase_projection(&s, 0, &c, 1e-8).unwrap();
        let q = ideal_phase_projection(&s.scaled(C64::from_polar(1.0, 1.234)), 0, &c, 1e-8).unwrap();
        for (x, y) in p.iter().zip(&q) {
            assert!((x.probability - y.probability).abs() < 1e-14);
        }
    }

    #[test]
    fn joint_projection_factorizes_on_product_input() {
        let n = default_cutoff(1.5);
        let a = coherent_state(CoherentLabel::from(1.5), n).unwrap();
        let b = coherent_state(CoherentLabel::from(-1.5), n).unwrap();
        let s = HybridState::ground().tensor(&a).tensor(&b);
        let c = vec![CoherentLabel::from(1.5), CoherentLabel::from(-1.5)];
        let out = joint_phase_projection(&s, &[(1, c.clone()), (2, c.clone())], 1e-8).unwrap();
        let single = ideal_phase_projection(&a, 0, &c, 1e-8).unwrap();
        let p = |i: usize| single[i].probability;
        let q = |i: usize| single[1 - i].probability;
        for br in &out {
            let want = p(br.outcome[0]) * q(br.outcome[1]);
            assert!((br.probability - want).abs() < 1e-12);
        }
        assert_eq!(out[1].outcome, vec![0, 1]);
    }

    #[test]
    fn discriminator_vacuum_branch_is_certain() {
        let probe = JCParams::new(0.0, 1.0, PI).unwrap();
        for alpha in [2.0, 0.0] {
            let s = mode_state(C64::new(0.0, -alpha));
            let out = homodyne_phase_discriminator(&s, 0, alpha.into(), &probe, 1e-8).unwrap();
            assert_eq!(out[1].label, "g");
            assert!((out[1].probability - 1.0).abs() < 1e-10, "alpha {alpha}: {}", out[1].probability);
        }
    }

    #[test]
    fn discriminator_displaced_branch_excites_probe() {
        let probe = JCParams::new(0.0, 1.0, PI).unwrap();
        let s = mode_state(C64::new(0.0, 2.0));
        let out = homodyne_phase_discriminator(&s, 0, 2.0.into(), &probe, 1e-8).unwrap();
        // Independent sum over Fock layers of |4i>: P(g) = Σ p_n cos²(π√n).
        let mut pg = 0.0;
        let mut pn = (-16.0f64).exp();
        for n in 0..200 {
            if n > 0 {
                pn *= 16.0 / n as f64;
            }
            pg += pn * (PI * (n as f64).sqrt()).cos().powi(2);
        }
        assert!((out[1].probability - pg).abs() < 1e-8);
        assert!(out[1].probability < 1.0 - 1e-3);
    }
}
