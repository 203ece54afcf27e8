use serde::Serialize;

use crate::hilbert::{Propagator, Provenance, RegisterLayout};
use crate::{Error, Matrix, Result, C64};

/// Threshold applied to both dispersive-regime ratios when none is given.
pub const DEFAULT_VALIDITY_THRESHOLD: f64 = 100.0;

/// Detuning `δ = ω₀ - ω`, coupling `λ` and interaction time `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JCParams {
    pub delta: f64,
    pub lambda: f64,
    pub t: f64,
}

impl JCParams {
    pub fn new(delta: f64, lambda: f64, t: f64) -> Result<Self> {
        let p = Self { delta, lambda, t };
        p.validate()?;
        Ok(p)
    }

    /// Parameters realizing a rescaled dispersive phase `λ²t/δ = phi` at
    /// detuning `ratio · λ` (with λ = 1).
    pub fn for_dispersive_phase(ratio: f64, phi: f64) -> Result<Self> {
        Self::new(ratio, 1.0, phi * ratio)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::Parameter(format!("coupling must be positive, got {}", self.lambda)));
        }
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(Error::Parameter(format!("time must be non-negative, got {}", self.t)));
        }
        if !self.delta.is_finite() {
            return Err(Error::Parameter("non-finite detuning".into()));
        }
        Ok(())
    }
}

/// `Ω_n = sqrt(δ²/4 + λ² n)`.
pub fn effective_rabi(n: usize, params: &JCParams) -> f64 {
    (params.delta * params.delta / 4.0 + params.lambda * params.lambda * n as f64).sqrt()
}

/// `sin(Ωt)/Ω`, continuous at Ω = 0.
fn sinc_t(omega: f64, t: f64) -> f64 {
    if omega * t == 0.0 {
        t
    } else {
        (omega * t).sin() / omega
    }
}

/// Exact Jaynes-Cummings propagator on `qubit ⊗ mode`.
///
/// Each invariant block `{|e,n>, |g,n+1>}` evolves by the closed-form 2×2
/// unitary, `|g,0>` by a phase. The state `|e,n_max>` has its partner outside
/// the cutoff; it receives the uncoupled phase `e^{-iδt/2}` and is listed in
/// [`Propagator::truncation_unsafe`].
pub fn exact_jc_propagator(params: &JCParams, n_max: usize) -> Result<Propagator> {
    params.validate()?;
    if n_max < 1 {
        return Err(Error::Parameter("exact propagator needs n_max >= 1".into()));
    }
    let (delta, lambda, t) = (params.delta, params.lambda, params.t);
    let dim = 2 * (n_max + 1);
    let g = |n: usize| n;
    let e = |n: usize| n_max + 1 + n;
    let mut u = Matrix::zeros(dim, dim);
    let i = C64::new(0.0, 1.0);

    let omega0 = effective_rabi(0, params);
    u[(g(0), g(0))] = C64::new((omega0 * t).cos(), 0.0) + i * delta * sinc_t(omega0, t) / 2.0;

    for n in 0..n_max {
        let omega = effective_rabi(n + 1, params);
        let (c, s) = ((omega * t).cos(), sinc_t(omega, t));
        let coupling = -i * lambda * ((n + 1) as f64).sqrt() * s;
        u[(e(n), e(n))] = C64::new(c, 0.0) - i * delta * s / 2.0;
        u[(g(n + 1), g(n + 1))] = C64::new(c, 0.0) + i * delta * s / 2.0;
        u[(g(n + 1), e(n))] = coupling;
        u[(e(n), g(n + 1))] = coupling;
    }
    u[(e(n_max), e(n_max))] = C64::from_polar(1.0, -delta * t / 2.0);

    Ok(Propagator::new(
        u,
        RegisterLayout::new(1, vec![n_max]),
        Provenance::JaynesCummings(*params),
    )
    .with_truncation_unsafe(vec![e(n_max)]))
}

/// Qubit frame rotation `e^{iδt/2}|e><e| + e^{-iδt/2}|g><g|`. Applied after
/// the exact propagator it removes the detuning phase, so that in the
/// dispersive limit `R · U_exact ≈ U_dispersive` with `φ = λ²t/δ`.
pub fn rotating_frame(delta: f64, t: f64) -> Propagator {
    let mut m = Matrix::zeros(2, 2);
    m[(0, 0)] = C64::from_polar(1.0, -delta * t / 2.0);
    m[(1, 1)] = C64::from_polar(1.0, delta * t / 2.0);
    Propagator::new(m, RegisterLayout::qubits_only(1), Provenance::RotatingFrame { delta, t })
}

/// Ratios `δ²/(4λ²n̄)` and `δ²/(4λ²Δn)` that must both be large for the
/// dispersive approximation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidityReport {
    pub mean_ratio: f64,
    pub spread_ratio: f64,
    pub threshold: f64,
    pub pass: bool,
    pub warning: Option<String>,
}

pub fn dispersive_validity(params: &JCParams, nbar: f64, dn: f64, threshold: f64) -> Result<ValidityReport> {
    if !(nbar >= 0.0) || !(dn >= 0.0) {
        return Err(Error::Parameter(format!(
            "photon statistics must be non-negative (n̄ = {nbar}, Δn = {dn})"
        )));
    }
    let ratio = |x: f64| {
        let denom = 4.0 * params.lambda * params.lambda * x;
        if denom == 0.0 {
            f64::INFINITY
        } else {
            params.delta * params.delta / denom
        }
    };
    let (mean_ratio, spread_ratio) = (ratio(nbar), ratio(dn));
    let pass = mean_ratio > threshold && spread_ratio > threshold;
    let warning = (!pass).then(|| {
        format!(
            "dispersive regime not satisfied: δ²/4λ²n̄ = {mean_ratio:.3}, δ²/4λ²Δn = {spread_ratio:.3} (threshold {threshold})"
        )
    });
    Ok(ValidityReport {
        mean_ratio,
        spread_ratio,
        threshold,
        pass,
        warning,
    })
}
