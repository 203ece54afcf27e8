use nalgebra::SymmetricEigen;
use serde::Serialize;

use crate::hilbert::{HybridState, Propagator, Provenance, RegisterLayout};
use crate::{Error, Ket, Matrix, Result, C64};

/// Complex amplitude labelling a coherent state `|α>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoherentLabel(pub C64);

impl CoherentLabel {
    pub fn new(re: f64, im: f64) -> Self {
        Self(C64::new(re, im))
    }

    pub fn amplitude(self) -> C64 {
        self.0
    }

    pub fn magnitude(self) -> f64 {
        self.0.norm()
    }

    pub fn is_finite(self) -> bool {
        self.0.re.is_finite() && self.0.im.is_finite()
    }

    /// `|e^{iθ} α>`.
    pub fn rotated(self, theta: f64) -> Self {
        Self(self.0 * C64::from_polar(1.0, theta))
    }
}

impl From<f64> for CoherentLabel {
    fn from(re: f64) -> Self {
        Self(C64::new(re, 0.0))
    }
}

impl From<C64> for CoherentLabel {
    fn from(z: C64) -> Self {
        Self(z)
    }
}

impl std::ops::Neg for CoherentLabel {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// Whether the cutoff rule is enforced when materializing coherent states.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum CutoffPolicy {
    #[default]
    Enforce,
    Override,
}

/// Default Fock cutoff `ceil(|α|² + 6|α| + 10)`; keeps the Poisson tail
/// below 1e-10 for `|α| <= 4`.
pub fn default_cutoff(magnitude: f64) -> usize {
    (magnitude * magnitude + 6.0 * magnitude + 10.0).ceil() as usize
}

pub fn check_cutoff(magnitude: f64, n_max: usize, policy: CutoffPolicy) -> Result<()> {
    let required = default_cutoff(magnitude);
    if policy == CutoffPolicy::Enforce && n_max < required {
        return Err(Error::Truncation {
            n_max,
            required,
            amplitude: magnitude,
        });
    }
    Ok(())
}

fn ln_factorials(n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n_max {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Fock amplitudes `e^{-|α|²/2} αⁿ/√n!` for `n <= n_max`, *without*
/// renormalization. Inner products of these against states supported below
/// the cutoff are exact, whatever the size of `α`.
pub fn coherent_amplitudes(alpha: C64, n_max: usize) -> Ket {
    let r = alpha.norm();
    if r == 0.0 {
        let mut v = Ket::zeros(n_max + 1);
        v[0] = C64::new(1.0, 0.0);
        return v;
    }
    let (ln_r, arg) = (r.ln(), alpha.arg());
    let lf = ln_factorials(n_max);
    Ket::from_iterator(
        n_max + 1,
        (0..=n_max).map(|n| {
            let ln_mag = -0.5 * r * r + n as f64 * ln_r - 0.5 * lf[n];
            C64::from_polar(ln_mag.exp(), n as f64 * arg)
        }),
    )
}

/// Poisson weight beyond the cutoff, `Σ_{n > n_max} e^{-|α|²}|α|^{2n}/n!`.
pub fn truncation_loss(magnitude: f64, n_max: usize) -> f64 {
    if magnitude == 0.0 {
        return 0.0;
    }
    let mean = magnitude * magnitude;
    let ln_mean = mean.ln();
    let mut ln_fact: f64 = (1..=n_max + 1).map(|k| (k as f64).ln()).sum();
    let mut tail = 0.0;
    let mut n = n_max + 1;
    loop {
        let term = (-mean + n as f64 * ln_mean - ln_fact).exp();
        tail += term;
        if (n as f64) > mean && (term < 1e-300 || term < tail * 1e-17) {
            break;
        }
        n += 1;
        ln_fact += (n as f64).ln();
    }
    tail
}

/// Closed-form overlap `<μ|ν> = exp(-|μ|²/2 - |ν|²/2 + μ*ν)`.
pub fn coherent_overlap(mu: C64, nu: C64) -> C64 {
    (-0.5 * mu.norm_sqr() - 0.5 * nu.norm_sqr() + mu.conj() * nu).exp()
}

/// Normalized truncated coherent ket.
pub fn coherent_ket(alpha: C64, n_max: usize) -> Ket {
    let v = coherent_amplitudes(alpha, n_max);
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Single-mode coherent state, renormalized after truncation.
pub fn coherent_state(alpha: CoherentLabel, n_max: usize) -> Result<HybridState> {
    coherent_state_with(alpha, n_max, CutoffPolicy::Enforce)
}

pub fn coherent_state_with(
    alpha: CoherentLabel,
    n_max: usize,
    policy: CutoffPolicy,
) -> Result<HybridState> {
    if !alpha.is_finite() {
        return Err(Error::Parameter(format!("non-finite coherent amplitude {:?}", alpha.0)));
    }
    check_cutoff(alpha.magnitude(), n_max, policy)?;
    Ok(HybridState::mode(coherent_ket(alpha.0, n_max)))
}

/// Annihilation operator on a truncated mode.
pub fn annihilation(n_max: usize) -> Matrix {
    let mut a = Matrix::zeros(n_max + 1, n_max + 1);
    for n in 1..=n_max {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn number_operator(n_max: usize) -> Matrix {
    Matrix::from_diagonal(&Ket::from_iterator(
        n_max + 1,
        (0..=n_max).map(|n| C64::new(n as f64, 0.0)),
    ))
}

/// Displacement `D(β) = exp(β a† - β* a)` on a truncated mode, computed as
/// the exact exponential of the truncated generator (hence exactly unitary).
/// `acting_on` is the largest coherent amplitude the operator will be applied
/// to; the cutoff guard is keyed on `|β| + acting_on`.
pub fn displacement(
    beta: CoherentLabel,
    n_max: usize,
    acting_on: f64,
    policy: CutoffPolicy,
) -> Result<Propagator> {
    check_cutoff(beta.magnitude() + acting_on, n_max, policy)?;
    let a = annihilation(n_max);
    let b = beta.0;
    // K = i(β a† - β* a) is Hermitian and D = exp(-iK).
    let k = (a.adjoint() * b - &a * b.conj()) * C64::new(0.0, 1.0);
    let herm = (&k + k.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let phases = Matrix::from_diagonal(&Ket::from_iterator(
        n_max + 1,
        eig.eigenvalues.iter().map(|&l| C64::from_polar(1.0, -l)),
    ));
    let v = eig.eigenvectors;
    let matrix = &v * phases * v.adjoint();
    Ok(Propagator::new(
        matrix,
        RegisterLayout::single_mode(n_max),
        Provenance::Displacement { beta: b },
    ))
}
