//! Coherent-state qubit embeddings, the one-ebit condition for entangled
//! coherent states, and entropy/fidelity measures. Entropies are in ebits
//! (base-2 logarithm).

mod basis;
mod bell;

pub use basis::{embed_modes, CoherentQubitBasis, Embedding, OrthonormalSpan, DEGENERACY_TOL};
pub use bell::{phi_minus, psi_plus, Bell};

use serde::Serialize;
use std::f64::consts::{PI, TAU};

use crate::hilbert::{default_cutoff, CoherentLabel, DensityOperator, HybridState, NEGATIVITY_TOL};
use crate::{Error, Result};

/// Default band for the one-ebit equalities: relative on `sin 2θ`, radians
/// on the phase.
pub const EBIT_TOL: f64 = 1e-8;

/// Which entangled coherent state an [`EbitQuery`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EbitVariant {
    /// `|α_a, α_b> + e^{iψ}|β_a, β_b>`
    SameSame,
    /// `|α_a, β_b> + e^{iψ}|β_a, α_b>`
    Cross,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EbitQuery {
    /// `(α_a, α_b)`.
    pub alpha: (CoherentLabel, CoherentLabel),
    /// `(β_a, β_b)`.
    pub beta: (CoherentLabel, CoherentLabel),
    pub psi: f64,
    pub variant: EbitVariant,
}

impl EbitQuery {
    /// Coherent pairs `(first, second)` on modes a and b such that the state
    /// reads `|first_a, first_b> + e^{iψ}|second_a, second_b>`.
    fn pairs(&self) -> ((CoherentLabel, CoherentLabel), (CoherentLabel, CoherentLabel)) {
        match self.variant {
            EbitVariant::SameSame => ((self.alpha.0, self.beta.0), (self.alpha.1, self.beta.1)),
            EbitVariant::Cross => ((self.alpha.0, self.beta.0), (self.beta.1, self.alpha.1)),
        }
    }

    /// The (unnormalized-then-normalized) two-mode state, default cutoffs.
    pub fn state(&self) -> Result<HybridState> {
        let ((a1, a2), (b1, b2)) = self.pairs();
        let na = default_cutoff(a1.magnitude().max(a2.magnitude()));
        let nb = default_cutoff(b1.magnitude().max(b2.magnitude()));
        let first = crate::hilbert::coherent_state(a1, na)?.tensor(&crate::hilbert::coherent_state(b1, nb)?);
        let second = crate::hilbert::coherent_state(a2, na)?.tensor(&crate::hilbert::coherent_state(b2, nb)?);
        first
            .add_scaled(crate::C64::from_polar(1.0, self.psi), &second)?
            .normalized()
    }

    /// Embedded-basis entropy of [`EbitQuery::state`].
    pub fn entropy(&self) -> Result<f64> {
        let ((a1, a2), (b1, b2)) = self.pairs();
        let state = self.state()?;
        let cut = state.layout().mode_cutoffs().to_vec();
        let ba = CoherentQubitBasis::new(a1, a2, cut[0])?;
        let bb = CoherentQubitBasis::new(b1, b2, cut[1])?;
        let e = embed_modes(&state, &[(0, &ba.span()), (1, &bb.span())])?;
        entanglement_entropy(&e.state, &[0])
    }
}

/// Outcome of [`one_ebit_condition`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EbitCheck {
    pub holds: bool,
    /// `|sin 2θ_a - sin 2θ_b| / max(sin 2θ_a, sin 2θ_b)` (0 if both vanish).
    pub amplitude_residual: f64,
    /// Distance of `ψ - φ_a - φ_b` from the nearest odd multiple of π.
    pub phase_residual: f64,
}

/// One-ebit test `sin 2θ_a = sin 2θ_b`, `ψ - φ_a - φ_b ≡ π (mod 2π)`.
///
/// For the cross variant the b-mode basis is built on the pair `(β_b, α_b)`,
/// so that the state has the same-same form; since then `φ_b = -φ_a`, the
/// phase condition becomes `ψ ≡ π`.
pub fn one_ebit_condition(q: &EbitQuery, tol: f64) -> Result<EbitCheck> {
    let ((a1, a2), (b1, b2)) = q.pairs();
    let ba = CoherentQubitBasis::new(a1, a2, default_cutoff(a1.magnitude().max(a2.magnitude())))?;
    let bb = CoherentQubitBasis::new(b1, b2, default_cutoff(b1.magnitude().max(b2.magnitude())))?;
    let (sa, sb) = (ba.sin_two_theta(), bb.sin_two_theta());
    let scale = sa.max(sb);
    let amplitude_residual = if scale == 0.0 { 0.0 } else { (sa - sb).abs() / scale };
    let phase_residual = (q.psi - ba.phi - bb.phi - PI).rem_euclid(TAU);
    let phase_residual = phase_residual.min(TAU - phase_residual);
    Ok(EbitCheck {
        holds: amplitude_residual <= tol && phase_residual <= tol,
        amplitude_residual,
        phase_residual,
    })
}

/// `-Σ λ log₂ λ` over the eigenvalues of `rho / Tr rho`. Eigenvalues down
/// to `-NEGATIVITY_TOL` are clamped to zero.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let tr = rho.trace();
    if tr <= 0.0 {
        return Err(Error::InvalidDensity(format!("trace {tr}")));
    }
    let mut s = 0.0;
    for l in rho.eigenvalues() {
        let p = l / tr;
        if p < -NEGATIVITY_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {p:e}")));
        }
        if p > 0.0 {
            s -= p * p.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Entropy of entanglement of a pure state across `keep | rest`, from its
/// Schmidt coefficients.
pub fn entanglement_entropy(state: &HybridState, keep: &[usize]) -> Result<f64> {
    let m = state.bipartite_matrix(keep)?;
    let sv = m.singular_values();
    let total: f64 = sv.iter().map(|s| s * s).sum();
    if total == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let s: f64 = sv
        .iter()
        .map(|s| s * s / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    Ok(s.max(0.0))
}

/// `<target|rho|target>` for a normalized target.
pub fn state_fidelity(rho: &DensityOperator, target: &HybridState) -> Result<f64> {
    if rho.layout() != target.layout() {
        return Err(Error::Dimension("fidelity target lives on a different layout".into()));
    }
    let n = target.norm_sqr();
    if (n - 1.0).abs() > crate::measurement::NORM_TOL {
        return Err(Error::Unnormalized(n));
    }
    Ok(rho.expectation(target.amplitudes())?.clamp(0.0, 1.0))
}

pub fn purity(rho: &DensityOperator) -> f64 {
    rho.purity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::coherent_state;
    use crate::C64;

    fn cat2(gamma: f64) -> HybridState {
        // N(|iγ, iγ> + |-iγ, -iγ>)
        let n = default_cutoff(gamma);
        let p = coherent_state(CoherentLabel::new(0.0, gamma), n).unwrap();
        let m = coherent_state(CoherentLabel::new(0.0, -gamma), n).unwrap();
        p.tensor(&p).add_scaled(C64::new(1.0, 0.0), &m.tensor(&m)).unwrap().normalized().unwrap()
    }

    #[test]
    fn bell_pair_has_one_ebit() {
        let rho = psi_plus().reduced(&[0]).unwrap();
        assert!((von_neumann_entropy(&rho).unwrap() - 1.0).abs() < 1e-12);
        assert!((entanglement_entropy(&psi_plus(), &[0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_has_none() {
        let s = HybridState::ground().tensor(&HybridState::excited());
        assert!(von_neumann_entropy(&s.reduced(&[0]).unwrap()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn cat2_entropy_matches_schmidt_form() {
        let g: f64 = 0.5;
        let e = (-2.0 * g * g).exp();
        let nphi = (2.0 * (1.0 + e)).powf(-0.5);
        let npsi = (2.0 * (1.0 - e)).powf(-0.5);
        let d = (nphi.powi(4) + npsi.powi(4)).sqrt();
        let (c1, c2) = (npsi * npsi / d, nphi * nphi / d);
        let want = -(c1 * c1) * (c1 * c1).log2() - (c2 * c2) * (c2 * c2).log2();
        let s = cat2(g);
        let fock = von_neumann_entropy(&s.reduced(&[0]).unwrap()).unwrap();
        assert!((fock - want).abs() < 1e-9);
        assert!((fock - 0.3138).abs() < 1e-4);
    }

    #[test]
    fn ebit_condition_examples() {
        let a = CoherentLabel::new(0.0, -1.0);
        let b = CoherentLabel::new(0.0, 1.0);
        let mut q = EbitQuery {
            alpha: (a, a),
            beta: (b, b),
            psi: PI,
            variant: EbitVariant::SameSame,
        };
        assert!(one_ebit_condition(&q, EBIT_TOL).unwrap().holds);
        assert!((q.entropy().unwrap() - 1.0).abs() < 1e-6);
        q.psi = 3.0 * PI;
        assert!(one_ebit_condition(&q, EBIT_TOL).unwrap().holds);
        q.psi = 0.0;
        let c = one_ebit_condition(&q, EBIT_TOL).unwrap();
        assert!(!c.holds && (c.phase_residual - PI).abs() < 1e-12);
        assert!(q.entropy().unwrap() < 1.0);
    }

    #[test]
    fn cross_variant_needs_psi_equal_pi() {
        let q = |psi| EbitQuery {
            alpha: (CoherentLabel::new(0.4, 0.3), CoherentLabel::new(0.4, 0.3)),
            beta: (CoherentLabel::new(-0.2, 0.5), CoherentLabel::new(-0.2, 0.5)),
            psi,
            variant: EbitVariant::Cross,
        };
        let c = one_ebit_condition(&q(PI), EBIT_TOL).unwrap();
        assert!(c.holds);
        assert!((q(PI).entropy().unwrap() - 1.0).abs() < 1e-6);
        assert!(q(0.3).entropy().unwrap() < 1.0 - 1e-3);
    }

    #[test]
    fn entropy_rejects_negative_spectrum() {
        let m = crate::Matrix::from_diagonal(&crate::Ket::from_vec(vec![C64::new(1.1, 0.0), C64::new(-0.1, 0.0)]));
        let rho = DensityOperator::from_matrix_unchecked(crate::RegisterLayout::qubits_only(1), m);
        assert!(von_neumann_entropy(&rho).is_err());
    }

    #[test]
    fn fidelity_to_orthogonal_target_vanishes() {
        let rho = phi_minus().to_density();
        assert!(state_fidelity(&rho, &psi_plus()).unwrap().abs() < 1e-15);
        assert!((state_fidelity(&psi_plus().to_density(), &psi_plus()).unwrap() - 1.0).abs() < 1e-15);
        assert!((purity(&rho) - 1.0).abs() < 1e-15);
    }
}
