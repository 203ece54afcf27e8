//! End-to-end drivers: qubit state transfer, atom-to-field entanglement
//! transfer, reciprocation back to atoms, their multi-pair versions and
//! hybrid entanglement swapping.
//!
//! Every driver returns a [`ProtocolReport`] listing all measurement
//! branches, including those a postselection rule discards, so that yields
//! can be audited.

mod entangle;
mod multipair;
mod reciprocate;
mod swap;
mod transfer;

pub use entangle::{coherent_pair_superposition, entanglement_transfer, entanglement_transfer_from};
pub use multipair::{
    multipair_label, multipair_reciprocate_state, multipair_reciprocation, multipair_transfer,
    MAX_PAIRS,
};
pub use reciprocate::{
    fidelity_formula, printed_weights, reciprocate_state, reciprocation, PrintedWeights,
    ReciprocationMode, FIDELITY_AGREEMENT,
};
pub use swap::{entanglement_swap, swap_from_resources, SwapDetector};
pub use transfer::{ising_transfer_branches, transfer_qubit_to_cv, transfer_qubit_to_qubit};

use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use crate::dynamics::{
    apply_dispersive, dispersive_validity, exact_jc_propagator, rotating_frame, DispersivePhase,
    JCParams, ValidityReport, DEFAULT_VALIDITY_THRESHOLD,
};
use crate::hilbert::{default_cutoff, truncation_loss, CutoffPolicy, DensityOperator, HybridState};
use crate::measurement::{project_atom, AtomBasis, BranchOutcome, DEFAULT_RESIDUAL_BOUND};
use crate::{Error, Matrix, Result, C64};

/// Allowed deviation of the summed branch probabilities from 1.
pub const COMPLETENESS_TOL: f64 = 1e-8;

/// How the conditional phase gates are evolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dynamics {
    /// Ideal cross-Kerr diagonal.
    #[default]
    Dispersive,
    /// Exact Jaynes-Cummings evolution at the configured detuning ratio,
    /// followed by the rotating-frame correction. The field then leaks
    /// slightly out of the coherent spans, so phase projections usually
    /// need a looser `residual_bound`.
    Exact,
}

impl FromStr for Dynamics {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dispersive" => Ok(Dynamics::Dispersive),
            "exact" => Ok(Dynamics::Exact),
            _ => Err(Error::Parameter(format!("unknown dynamics '{s}' (dispersive, exact)"))),
        }
    }
}

/// Numerical settings shared by all drivers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    /// `δ/λ`, used by exact dynamics and the dispersive-validity diagnostic.
    pub detuning_ratio: f64,
    pub validity_threshold: f64,
    /// Fock cutoff for every mode. `None` applies the truncation rule; an
    /// explicit value bypasses it (with a warning when below the rule).
    pub n_max: Option<usize>,
    /// Largest weight a state may carry outside the coherent candidates of
    /// a phase projection.
    pub residual_bound: f64,
    pub dynamics: Dynamics,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            detuning_ratio: 100.0,
            validity_threshold: DEFAULT_VALIDITY_THRESHOLD,
            n_max: None,
            residual_bound: DEFAULT_RESIDUAL_BOUND,
            dynamics: Dynamics::Dispersive,
        }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<()> {
        if !(self.detuning_ratio > 0.0) || !self.detuning_ratio.is_finite() {
            return Err(Error::Parameter(format!(
                "detuning ratio must be positive, got {}",
                self.detuning_ratio
            )));
        }
        if !(self.validity_threshold > 0.0) {
            return Err(Error::Parameter(format!(
                "validity threshold must be positive, got {}",
                self.validity_threshold
            )));
        }
        if !(self.residual_bound >= 0.0) || !self.residual_bound.is_finite() {
            return Err(Error::Parameter(format!(
                "residual bound must be finite and >= 0, got {}",
                self.residual_bound
            )));
        }
        if self.n_max == Some(0) {
            return Err(Error::Parameter("n_max must be at least 1".into()));
        }
        Ok(())
    }

    /// Cutoff and policy for a mode carrying amplitudes up to `magnitude`;
    /// records the truncation loss.
    pub(crate) fn mode_cutoff(&self, magnitude: f64, diag: &mut Diagnostics) -> (usize, CutoffPolicy) {
        let rule = default_cutoff(magnitude);
        let (n, policy) = match self.n_max {
            None => (rule, CutoffPolicy::Enforce),
            Some(n) => {
                if n < rule {
                    diag.warnings.push(format!(
                        "n_max = {n} is below the truncation rule ({rule}) for |α| = {magnitude}"
                    ));
                }
                (n, CutoffPolicy::Override)
            }
        };
        diag.note_mode(magnitude, n);
        (n, policy)
    }

    /// Dispersive-regime check for a `C_p` acting on amplitude `magnitude`.
    pub(crate) fn check_validity(&self, magnitude: f64, diag: &mut Diagnostics) -> Result<()> {
        let params = JCParams::for_dispersive_phase(self.detuning_ratio, FRAC_PI_2)?;
        let report = dispersive_validity(&params, magnitude * magnitude, magnitude, self.validity_threshold)?;
        if let Some(w) = &report.warning {
            diag.warnings.push(w.clone());
        }
        diag.validity = Some(report);
        Ok(())
    }
}

/// The drivers, by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    TransferQubitToQubit,
    TransferQubitToCv,
    EntanglementTransfer,
    Reciprocation,
    MultipairTransfer,
    MultipairReciprocation,
    EntanglementSwap,
}

impl Protocol {
    pub const ALL: [Protocol; 7] = [
        Protocol::TransferQubitToQubit,
        Protocol::TransferQubitToCv,
        Protocol::EntanglementTransfer,
        Protocol::Reciprocation,
        Protocol::MultipairTransfer,
        Protocol::MultipairReciprocation,
        Protocol::EntanglementSwap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::TransferQubitToQubit => "transfer_qubit_to_qubit",
            Protocol::TransferQubitToCv => "transfer_qubit_to_cv",
            Protocol::EntanglementTransfer => "entanglement_transfer",
            Protocol::Reciprocation => "reciprocation",
            Protocol::MultipairTransfer => "multipair_transfer",
            Protocol::MultipairReciprocation => "multipair_reciprocation",
            Protocol::EntanglementSwap => "entanglement_swap",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Protocol::TransferQubitToQubit => "qubit state teleported through a control-phase (Ising) gate, x measurement and byproduct correction",
            Protocol::TransferQubitToCv => "qubit state written onto a coherent-state pair by C_p and a y measurement",
            Protocol::EntanglementTransfer => "Bell pair of atoms mapped onto an entangled coherent state of two modes",
            Protocol::Reciprocation => "entangled coherent state mapped back onto two fresh atoms (ideal or Gaussian-blurred field measurement)",
            Protocol::MultipairTransfer => "n atom pairs mapped onto a 2^n-component two-mode state",
            Protocol::MultipairReciprocation => "2^n-component two-mode state mapped back onto n fresh atom pairs",
            Protocol::EntanglementSwap => "atom pair and entangled coherent state swapped into an atom-mode hybrid pair",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown protocol '{s}'")))
    }
}

/// Final state of a branch.
#[derive(Clone, Debug)]
pub enum BranchState {
    Pure(HybridState),
    Mixed(DensityOperator),
}

impl BranchState {
    pub fn pure(&self) -> Option<&HybridState> {
        match self {
            BranchState::Pure(s) => Some(s),
            BranchState::Mixed(_) => None,
        }
    }

    pub fn density(&self) -> DensityOperator {
        match self {
            BranchState::Pure(s) => s.to_density(),
            BranchState::Mixed(r) => r.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchReport {
    pub label: String,
    pub probability: f64,
    /// Whether the postselection rule keeps this branch.
    pub kept: bool,
    /// Entanglement of the branch state in ebits.
    pub entropy: Option<f64>,
    /// Fidelity to the protocol's target for this branch.
    pub fidelity: Option<f64>,
    pub purity: Option<f64>,
    /// Local unitary applied before scoring, row-major.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correction: Option<[[C64; 2]; 2]>,
    #[serde(skip)]
    pub state: Option<BranchState>,
}

impl BranchReport {
    pub(crate) fn new(label: impl Into<String>, probability: f64, kept: bool) -> Self {
        Self {
            label: label.into(),
            probability,
            kept,
            entropy: None,
            fidelity: None,
            purity: None,
            correction: None,
            state: None,
        }
    }

    pub fn pure_state(&self) -> Option<&HybridState> {
        self.state.as_ref().and_then(BranchState::pure)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    /// Fock cutoffs in use, one per mode.
    pub cutoffs: Vec<usize>,
    /// Largest Poisson weight beyond the cutoff among the amplitudes in play.
    pub truncation_loss: f64,
    pub validity: Option<ValidityReport>,
    /// Largest weight lost when rewriting branch states in coherent spans
    /// (or when splitting off a measured mode).
    pub embedding_residual: Option<f64>,
    pub warnings: Vec<String>,
}

impl Diagnostics {
    fn note_mode(&mut self, magnitude: f64, n_max: usize) {
        self.cutoffs.push(n_max);
        self.truncation_loss = self.truncation_loss.max(truncation_loss(magnitude, n_max));
    }

    pub(crate) fn note_residual(&mut self, r: f64) {
        self.embedding_residual = Some(self.embedding_residual.map_or(r, |x| x.max(r)));
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProtocolReport {
    pub protocol: Protocol,
    pub branches: Vec<BranchReport>,
    /// Scalar results, keyed by name.
    pub summary: BTreeMap<String, f64>,
    pub diagnostics: Diagnostics,
}

impl ProtocolReport {
    pub(crate) fn new(protocol: Protocol, branches: Vec<BranchReport>, diagnostics: Diagnostics) -> Self {
        Self {
            protocol,
            branches,
            summary: BTreeMap::new(),
            diagnostics,
        }
    }

    pub(crate) fn set(&mut self, key: &str, value: f64) {
        self.summary.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.summary.get(key).copied()
    }

    pub fn branch(&self, label: &str) -> Option<&BranchReport> {
        self.branches.iter().find(|b| b.label == label)
    }

    pub fn kept(&self) -> impl Iterator<Item = &BranchReport> {
        self.branches.iter().filter(|b| b.kept)
    }

    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    pub fn kept_probability(&self) -> f64 {
        self.kept().map(|b| b.probability).sum()
    }

    /// Fails with [`Error::Tolerance`] unless the branch probabilities sum
    /// to 1 within [`COMPLETENESS_TOL`].
    pub fn check_complete(&self) -> Result<()> {
        let total = self.total_probability();
        if (total - 1.0).abs() > COMPLETENESS_TOL {
            return Err(Error::Tolerance(format!(
                "{}: branch probabilities sum to {total}",
                self.protocol
            )));
        }
        Ok(())
    }

    /// Extremes of a per-branch metric over kept branches with a state.
    fn kept_range(&self, metric: impl Fn(&BranchReport) -> Option<f64>) -> Option<(f64, f64)> {
        self.kept()
            .filter(|b| b.state.is_some())
            .filter_map(metric)
            .fold(None, |acc, v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }

    /// Fills `kept_probability` and the min/max of entropy and fidelity
    /// over kept branches.
    pub(crate) fn summarize_kept(&mut self) {
        let kp = self.kept_probability();
        self.set("kept_probability", kp);
        if let Some((lo, hi)) = self.kept_range(|b| b.entropy) {
            self.set("entropy_min", lo);
            self.set("entropy_max", hi);
        }
        if let Some((lo, hi)) = self.kept_range(|b| b.fidelity) {
            self.set("fidelity_min", lo);
            self.set("fidelity_max", hi);
        }
    }
}

/// `C_p`-type gate between `qubit` and `mode`, evolved as `settings` says.
pub(crate) fn conditional_phase(
    state: &HybridState,
    phase: DispersivePhase,
    qubit: usize,
    mode: usize,
    settings: &Settings,
) -> Result<HybridState> {
    match settings.dynamics {
        Dynamics::Dispersive => apply_dispersive(state, phase, qubit, mode),
        Dynamics::Exact => {
            // A negative detuning gives the reversed rotation.
            let delta = settings.detuning_ratio * f64::from(phase.sign);
            let params = JCParams::new(delta, 1.0, phase.phi * settings.detuning_ratio)?;
            let n_max = state.layout().subsystem_dim(mode)? - 1;
            let evolved = exact_jc_propagator(&params, n_max)?.apply(state, &[qubit, mode])?;
            rotating_frame(params.delta, params.t).apply(&evolved, &[qubit])
        }
    }
}

/// Measures the first `count` qubits in `basis`, one after the other;
/// branch labels concatenate the outcome labels. Children of an impossible
/// branch are impossible too.
pub(crate) fn measure_leading_atoms(
    state: &HybridState,
    count: usize,
    basis: AtomBasis,
) -> Result<Vec<BranchOutcome>> {
    let mut branches = vec![BranchOutcome {
        label: String::new(),
        outcome: Vec::new(),
        probability: 1.0,
        state: Some(state.clone()),
    }];
    for _ in 0..count {
        let mut next = Vec::with_capacity(2 * branches.len());
        for b in branches {
            let children = match &b.state {
                Some(s) => project_atom(s, 0, basis)?,
                None => basis
                    .eigenstates()
                    .iter()
                    .enumerate()
                    .map(|(k, (label, _))| BranchOutcome {
                        label: label.to_string(),
                        outcome: vec![k],
                        probability: 0.5,
                        state: None,
                    })
                    .collect(),
            };
            for c in children {
                let mut outcome = b.outcome.clone();
                outcome.extend(c.outcome);
                next.push(BranchOutcome {
                    label: format!("{}{}", b.label, c.label),
                    outcome,
                    probability: b.probability * c.probability,
                    state: c.state,
                });
            }
        }
        branches = next;
    }
    Ok(branches)
}

/// Unitary on `qubit` bringing `state` closest to `target` (largest
/// `|<target|U|state>|`), from the polar factor of the 2×2 cross matrix.
pub(crate) fn align_qubit(state: &HybridState, target: &HybridState, qubit: usize) -> Result<Matrix> {
    if state.layout() != target.layout() {
        return Err(Error::Dimension("alignment target lives on a different layout".into()));
    }
    let m = state.bipartite_matrix(&[qubit])?;
    let t = target.bipartite_matrix(&[qubit])?;
    let svd = (&t * m.adjoint()).svd(true, true);
    let u = svd.u.ok_or(Error::ZeroNorm)?;
    let v_t = svd.v_t.ok_or(Error::ZeroNorm)?;
    Ok(u * v_t)
}

pub(crate) fn as_array2(m: &Matrix) -> [[C64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

pub(crate) fn check_real_amplitudes(a: f64, b: f64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Parameter(format!("non-finite amplitudes ({a}, {b})")));
    }
    let n = a * a + b * b;
    if (n - 1.0).abs() > crate::measurement::NORM_TOL {
        return Err(Error::Unnormalized(n));
    }
    Ok(())
}

pub(crate) fn check_label(name: &str, label: crate::CoherentLabel) -> Result<()> {
    if !label.is_finite() {
        return Err(Error::Parameter(format!("non-finite amplitude {name}")));
    }
    Ok(())
}

/// Rejects states whose layout is not `qubits` qubits and `modes` modes.
pub(crate) fn check_shape(state: &HybridState, qubits: usize, modes: usize, what: &str) -> Result<()> {
    let l = state.layout();
    if l.qubit_count() != qubits || l.mode_count() != modes {
        return Err(Error::Dimension(format!(
            "{what} must have {qubits} qubits and {modes} modes, got {} and {}",
            l.qubit_count(),
            l.mode_count()
        )));
    }
    Ok(())
}
