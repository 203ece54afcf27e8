//! Projective atomic measurements, projections of field modes onto
//! coherent-state candidates, the Gaussian-blurred field measurement and
//! the displacement-plus-probe phase discriminator.

mod gaussian;
mod phase;
pub mod quadrature;

pub use gaussian::{
    gaussian_cv_measurement, moment_operator, GaussianOutcome, GaussianPovm, GaussianWeights,
    QUADRATURE_TOL,
};
pub use phase::{
    homodyne_phase_discriminator, ideal_phase_projection, joint_phase_projection,
    span_residual, DEFAULT_RESIDUAL_BOUND,
};

use serde::Serialize;

use crate::hilbert::HybridState;
use crate::{Error, Ket, Result, C64};

/// Probabilities below this are treated as impossible outcomes.
pub const ZERO_PROBABILITY: f64 = 1e-14;
/// Allowed deviation of an input state's squared norm from 1.
pub const NORM_TOL: f64 = 1e-8;

/// Measurement axis for a single atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AtomBasis {
    X,
    Y,
    Z,
}

impl AtomBasis {
    /// Outcome labels and eigenkets `[ground, excited]` components, in the
    /// order outcomes are reported: `+,-` for x and y, `e,g` for z.
    pub fn eigenstates(self) -> [(&'static str, [C64; 2]); 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| C64::new(re, im);
        match self {
            AtomBasis::X => [("+", [c(s, 0.0), c(s, 0.0)]), ("-", [c(s, 0.0), c(-s, 0.0)])],
            AtomBasis::Y => [("+", [c(s, 0.0), c(0.0, s)]), ("-", [c(s, 0.0), c(0.0, -s)])],
            AtomBasis::Z => [("e", [c(0.0, 0.0), c(1.0, 0.0)]), ("g", [c(1.0, 0.0), c(0.0, 0.0)])],
        }
    }
}

/// One measurement branch. `outcome` indexes the outcome set of each
/// measured subsystem; `state` is `None` for an impossible outcome.
#[derive(Clone, Debug)]
pub struct BranchOutcome {
    pub label: String,
    pub outcome: Vec<usize>,
    pub probability: f64,
    pub state: Option<HybridState>,
}

impl BranchOutcome {
    pub(crate) fn from_unnormalized(
        label: String,
        outcome: Vec<usize>,
        probability: f64,
        state: HybridState,
    ) -> Result<Self> {
        let state = if probability < ZERO_PROBABILITY {
            None
        } else {
            Some(state.normalized()?)
        };
        Ok(Self {
            label,
            outcome,
            probability,
            state,
        })
    }

    pub fn is_null(&self) -> bool {
        self.state.is_none()
    }
}

pub(crate) fn check_normalized(state: &HybridState) -> Result<()> {
    let n = state.norm_sqr();
    if n == 0.0 {
        return Err(Error::ZeroNorm);
    }
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::Unnormalized(n));
    }
    Ok(())
}

/// Measures qubit `atom` of a normalized state in `basis`. The atom is
/// removed from the layout of the branch states.
pub fn project_atom(state: &HybridState, atom: usize, basis: AtomBasis) -> Result<Vec<BranchOutcome>> {
    if !state.layout().is_qubit(atom) {
        return Err(Error::Subsystem {
            index: atom,
            count: state.layout().qubit_count(),
        });
    }
    check_normalized(state)?;
    let total = state.norm_sqr();
    basis
        .eigenstates()
        .iter()
        .enumerate()
        .map(|(k, (label, ket))| {
            let branch = state.contract(atom, &Ket::from_row_slice(ket))?;
            let p = branch.norm_sqr() / total;
            BranchOutcome::from_unnormalized(label.to_string(), vec![k], p, branch)
        })
        .collect()
}
