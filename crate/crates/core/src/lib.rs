//! Simulation of hybrid quantum registers made of two-level atoms and
//! truncated cavity field modes, coupled through the dispersive (cross-Kerr,
//! quantum non-demolition) limit of the Jaynes-Cummings interaction.
//!
//! The crate is layered bottom-up:
//!
//! * [`hilbert`]: register layouts, pure states, density operators, coherent
//!   states, displacement, tensor products and partial traces.
//! * [`dynamics`]: exact Jaynes-Cummings propagator, dispersive conditional
//!   phase gate, Ising/control-phase gate and validity diagnostics.
//! * [`measurement`]: projective atomic measurements, coherent-state phase
//!   projections, the Gaussian-blurred field measurement and the
//!   displacement-plus-probe phase discriminator.
//! * [`entanglement`]: orthonormal embeddings of coherent-state pairs, one-ebit
//!   conditions, von Neumann entropy and fidelity.
//! * [`protocols`]: end-to-end state transfer, entanglement transfer,
//!   reciprocation, multi-pair variants and entanglement swapping.
//! * [`cli`]: scenario runner and parameter sweeps behind the `crosskerr` binary.
//!
//! Basis conventions: a qubit's computational index 0 is the ground state
//! `|g>` and index 1 the excited state `|e>`. Registers order all qubits
//! before all modes, row-major (the first subsystem is the most significant
//! digit of the flat index).

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod entanglement;
mod error;
pub mod hilbert;
pub mod measurement;
pub mod protocols;

pub use error::{Error, ErrorKind, Result};
pub use hilbert::{CoherentLabel, DensityOperator, HybridState, RegisterLayout};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex column vector.
pub type Ket = nalgebra::DVector<C64>;
/// Dense complex matrix.
pub type Matrix = nalgebra::DMatrix<C64>;

/// Largest entry modulus of a complex matrix or vector.
pub trait MaxAbs {
    fn max_abs(&self) -> f64;
}

impl<R: nalgebra::Dim, C: nalgebra::Dim, S: nalgebra::RawStorage<C64, R, C>> MaxAbs
    for nalgebra::Matrix<C64, R, C, S>
{
    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}
