//! Truncated Fock spaces, qubits and their tensor algebra.

mod density;
mod fock;
mod layout;
mod operator;
mod state;

pub use density::{DensityOperator, DENSITY_TOL, NEGATIVITY_TOL};
pub use fock::{
    annihilation, check_cutoff, coherent_amplitudes, coherent_ket, coherent_overlap,
    coherent_state, coherent_state_with, default_cutoff, displacement, number_operator,
    truncation_loss, CoherentLabel, CutoffPolicy,
};
pub use layout::RegisterLayout;
pub use operator::{embed, tensor_operators, Propagator, Provenance};
pub use state::HybridState;

use crate::Result;

/// Tensor product of several states, qubits first.
pub fn tensor(states: &[&HybridState]) -> HybridState {
    states
        .iter()
        .fold(HybridState::new(RegisterLayout::qubits_only(0), crate::Ket::from_element(1, crate::C64::new(1.0, 0.0))).expect("scalar layout"), |acc, s| acc.tensor(s))
}

/// Reduced density operator of `rho` on `keep`.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    rho.partial_trace(keep)
}
