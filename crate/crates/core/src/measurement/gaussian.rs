use serde::Serialize;

use crate::entanglement::{phi_minus, psi_plus};
use crate::hilbert::{coherent_amplitudes, CoherentLabel, DensityOperator, HybridState, RegisterLayout};
use crate::measurement::quadrature::integrate;
use crate::{Error, Matrix, Result, C64};

/// Absolute error target of the quadrature path, per matrix element.
pub const QUADRATURE_TOL: f64 = 1e-6;
const MAX_SEGMENTS: usize = 500;
// Inner integrals are nested inside the outer one; keep their error well
// below the outer target.
const INNER_TOL_FACTOR: f64 = 1e-2;
const HALF_WIDTH_SIGMAS: f64 = 8.0;

/// Field measurement with outcome smeared by a normalized Gaussian of
/// variance `width` around real centers `(χ_a, χ_b)`: the effect operator on
/// each mode is `∫ G(γ) |γ><γ| dγ` over real `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianPovm {
    pub centers: (CoherentLabel, CoherentLabel),
    pub width: f64,
}

impl GaussianPovm {
    pub fn new(centers: (CoherentLabel, CoherentLabel), width: f64) -> Result<Self> {
        if !(width >= 0.0) || !width.is_finite() {
            return Err(Error::Parameter(format!("Gaussian width must be finite and >= 0, got {width}")));
        }
        for c in [centers.0, centers.1] {
            if !c.is_finite() || c.0.im != 0.0 {
                return Err(Error::Parameter(format!(
                    "Gaussian measurement centers must be real, got {}{:+}i",
                    c.0.re, c.0.im
                )));
            }
        }
        Ok(Self { centers, width })
    }

    /// `G_μ(Δ, χ) = (2πΔ)^{-1/2} exp(-(μ-χ)²/2Δ)`.
    pub fn weight(&self, mu: f64, chi: f64) -> f64 {
        let d = self.width;
        (-(mu - chi).powi(2) / (2.0 * d)).exp() / (2.0 * std::f64::consts::PI * d).sqrt()
    }

    fn range(&self, chi: f64) -> (f64, f64) {
        let h = HALF_WIDTH_SIGMAS * self.width.sqrt();
        (chi - h, chi + h)
    }
}

/// Coefficients of the conditioned two-qubit operator
/// `P₁|φ₋><φ₋| + P₂|ψ₊><ψ₊| - iP₃(|φ₋><ψ₊| - |ψ₊><φ₋|)`, taken from the
/// unnormalized (event-density) operator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianWeights {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl GaussianWeights {
    fn from_operator(rho: &Matrix) -> Self {
        let phi = phi_minus().into_amplitudes();
        let psi = psi_plus().into_amplitudes();
        let el = |u: &crate::Ket, v: &crate::Ket| (u.adjoint() * rho * v)[(0, 0)];
        Self {
            p1: el(&phi, &phi).re,
            p2: el(&psi, &psi).re,
            p3: (C64::new(0.0, 1.0) * el(&phi, &psi)).re,
        }
    }

    /// `F = P₂/(P₁+P₂)`, the overlap of the conditioned state with `|ψ₊>`.
    pub fn fidelity(&self) -> f64 {
        self.p2 / (self.p1 + self.p2)
    }
}

/// Output of [`gaussian_cv_measurement`].
#[derive(Clone, Debug)]
pub struct GaussianOutcome {
    /// Normalized conditioned state of the two atoms (moment route).
    pub rho: DensityOperator,
    /// Trace of the unnormalized conditioned operator.
    pub event_weight: f64,
    pub closed_form: GaussianWeights,
    pub quadrature: GaussianWeights,
    pub quadrature_error: f64,
    /// Largest entry of the normalized operator outside the
    /// `{|φ₋>, |ψ₊>}` block.
    pub block_residual: f64,
}

impl GaussianOutcome {
    pub fn fidelity(&self) -> f64 {
        self.closed_form.fidelity()
    }
}

/// `∫ G(γ) |γ><γ| dγ` in the Fock basis, from Gaussian moments:
/// `<m|M|n> = (1+2Δ)^{-1/2} e^{-χ²/(1+2Δ)} E[γ^{m+n}]/√(m!n!)` with γ normal
/// of mean `χ/(1+2Δ)` and variance `Δ/(1+2Δ)`.
pub fn moment_operator(chi: f64, width: f64, n_max: usize) -> Result<Matrix> {
    let scale = 1.0 + 2.0 * width;
    let mean = chi / scale;
    let var = width / scale;
    let kmax = 2 * n_max;
    let mut moments = vec![1.0; kmax + 1];
    if kmax >= 1 {
        moments[1] = mean;
    }
    for k in 2..=kmax {
        moments[k] = mean * moments[k - 1] + (k - 1) as f64 * var * moments[k - 2];
    }
    let mut sqrt_fact = vec![1.0; n_max + 1];
    for n in 1..=n_max {
        sqrt_fact[n] = sqrt_fact[n - 1] * (n as f64).sqrt();
    }
    let pref = (-chi * chi / scale).exp() / scale.sqrt();
    let m = Matrix::from_fn(n_max + 1, n_max + 1, |i, j| {
        C64::new(pref * moments[i + j] / (sqrt_fact[i] * sqrt_fact[j]), 0.0)
    });
    if m.iter().any(|z| !z.re.is_finite()) {
        return Err(Error::Tolerance(format!(
            "moment operator overflow at χ = {chi}, n_max = {n_max}"
        )));
    }
    Ok(m)
}

fn check_layout(state: &HybridState) -> Result<(usize, usize)> {
    let l = state.layout();
    if l.qubit_count() != 2 || l.mode_count() != 2 {
        return Err(Error::Dimension(format!(
            "Gaussian field measurement needs two atoms and two modes, got {} and {}",
            l.qubit_count(),
            l.mode_count()
        )));
    }
    Ok((l.mode_cutoffs()[0], l.mode_cutoffs()[1]))
}

fn closed_form_operator(state: &HybridState, povm: &GaussianPovm, na: usize, nb: usize) -> Result<Matrix> {
    let ma = moment_operator(povm.centers.0 .0.re, povm.width, na)?;
    let mb = moment_operator(povm.centers.1 .0.re, povm.width, nb)?;
    let (da, db) = (na + 1, nb + 1);
    let amps = state.amplitudes();
    let blocks: Vec<Matrix> = (0..4)
        .map(|q| Matrix::from_fn(da, db, |a, b| amps[q * da * db + a * db + b]))
        .collect();
    let smeared: Vec<Matrix> = blocks.iter().map(|v| &ma * v * &mb).collect();
    Ok(Matrix::from_fn(4, 4, |q, r| {
        smeared[q].iter().zip(blocks[r].iter()).map(|(w, v)| w * v.conj()).sum()
    }))
}

fn outer_product_parts(chi: &crate::Ket, weight: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(32);
    for q in 0..4 {
        for r in 0..4 {
            let z = chi[q] * chi[r].conj() * weight;
            out.push(z.re);
            out.push(z.im);
        }
    }
    out
}

fn quadrature_operator(state: &HybridState, povm: &GaussianPovm, na: usize, nb: usize) -> Result<(Matrix, f64)> {
    let (ca, cb) = (povm.centers.0 .0.re, povm.centers.1 .0.re);
    let ket = |x: f64, n: usize| coherent_amplitudes(C64::new(x, 0.0), n);
    let parts = if povm.width == 0.0 {
        let chi = state.contract(3, &ket(cb, nb))?.contract(2, &ket(ca, na))?;
        (outer_product_parts(chi.amplitudes(), 1.0), 0.0)
    } else {
        let tol = QUADRATURE_TOL;
        let (a0, a1) = povm.range(ca);
        let (b0, b1) = povm.range(cb);
        let mut inner_error: f64 = 0.0;
        let outer = integrate(
            |g| {
                let wa = povm.weight(g, ca);
                let w = state.contract(2, &ket(g, na))?;
                let inner = integrate(
                    |d| {
                        let chi = w.contract(2, &ket(d, nb))?;
                        Ok(outer_product_parts(chi.amplitudes(), povm.weight(d, cb)))
                    },
                    b0,
                    b1,
                    tol * INNER_TOL_FACTOR,
                    MAX_SEGMENTS,
                )?;
                inner_error = inner_error.max(inner.error * wa);
                Ok(inner.value.into_iter().map(|v| v * wa).collect())
            },
            a0,
            a1,
            tol,
            MAX_SEGMENTS,
        )?;
        (outer.value, outer.error + inner_error * (a1 - a0))
    };
    let (v, err) = parts;
    let m = Matrix::from_fn(4, 4, |q, r| C64::new(v[2 * (4 * q + r)], v[2 * (4 * q + r) + 1]));
    Ok((m, err))
}

/// Gaussian-smeared measurement of both modes of a two-atom, two-mode state
/// (layout `atom1, atom2, a, b`), returning the conditioned atomic state.
///
/// The operator is evaluated twice: through [`moment_operator`] (exact up
/// to the Fock cutoff) and through nested adaptive quadrature over real
/// `(γ, δ)`. `P₃` is available only numerically. Non-convergence of the
/// quadrature is an error.
pub fn gaussian_cv_measurement(state: &HybridState, povm: &GaussianPovm) -> Result<GaussianOutcome> {
    let (na, nb) = check_layout(state)?;
    let closed = closed_form_operator(state, povm, na, nb)?;
    let (quad, quadrature_error) = quadrature_operator(state, povm, na, nb)?;
    let event_weight = closed.trace().re;
    if event_weight <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let normalized = &closed / C64::new(event_weight, 0.0);
    let phi = phi_minus().into_amplitudes();
    let psi = psi_plus().into_amplitudes();
    let block = &phi * phi.adjoint() + &psi * psi.adjoint();
    let inside = &block * &normalized * &block;
    let block_residual = (&normalized - inside).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let rho = DensityOperator::new(RegisterLayout::qubits_only(2), normalized)?;
    Ok(GaussianOutcome {
        rho,
        event_weight,
        closed_form: GaussianWeights::from_operator(&closed),
        quadrature: GaussianWeights::from_operator(&quad),
        quadrature_error,
        block_residual,
    })
}
