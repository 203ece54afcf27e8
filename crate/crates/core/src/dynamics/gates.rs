use crate::hilbert::{Propagator, Provenance, RegisterLayout};
use crate::{Ket, Matrix, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn single(name: &'static str, entries: [C64; 4]) -> Propagator {
    Propagator::new(
        Matrix::from_row_slice(2, 2, &entries),
        RegisterLayout::qubits_only(1),
        Provenance::Gate(name),
    )
}

pub fn pauli_x() -> Propagator {
    single("X", [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> Propagator {
    single("Y", [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> Propagator {
    single("Z", [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

pub fn hadamard() -> Propagator {
    let s = 1.0 / 2f64.sqrt();
    single("H", [c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
}

fn diag2(phases: [f64; 4]) -> Matrix {
    Matrix::from_diagonal(&Ket::from_iterator(4, phases.iter().map(|&p| C64::from_polar(1.0, p))))
}

/// Raw Ising coupling `e^{-iχ σz⊗σz}` (σz = +1 on `|0> = |g>`).
pub fn ising_zz(chi: f64) -> Propagator {
    Propagator::new(
        diag2([-chi, chi, chi, -chi]),
        RegisterLayout::qubits_only(2),
        Provenance::Ising { chi },
    )
}

/// Control-phase form of the Ising interaction, `e^{-iχ|11><11|}`: at χ = π
/// it flips the sign of `|1,1>` only.
///
/// It differs from [`ising_zz`] at coupling `χ/4` only by the local frame of
/// [`ising_local_frame`]: `ising_gate(χ) = frame(χ) · ising_zz(χ/4)`.
pub fn ising_gate(chi: f64) -> Propagator {
    Propagator::new(
        diag2([0.0, 0.0, 0.0, -chi]),
        RegisterLayout::qubits_only(2),
        Provenance::Ising { chi },
    )
}

/// Global phase `e^{-iχ/4}` times `e^{iχσz/4}` on each qubit.
pub fn ising_local_frame(chi: f64) -> Propagator {
    let q = chi / 4.0;
    Propagator::new(
        diag2([-q + 2.0 * q, -q, -q, -q - 2.0 * q]),
        RegisterLayout::qubits_only(2),
        Provenance::Gate("ising-frame"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::MaxAbs;
    use crate::hilbert::HybridState;
    use std::f64::consts::PI;

    #[test]
    fn control_phase_at_pi() {
        let u = ising_gate(PI);
        let d = u.matrix().diagonal();
        for k in 0..3 {
            assert!((d[k] - c(1.0, 0.0)).norm() < 1e-15);
        }
        assert!((d[3] + c(1.0, 0.0)).norm() < 1e-15);
        assert!((ising_gate(0.0).matrix() - Matrix::identity(4, 4)).max_abs() == 0.0);
    }

    #[test]
    fn control_phase_entangles_plus_target() {
        let (a, b) = (0.6, 0.8);
        let s = 1.0 / 2f64.sqrt();
        let input = HybridState::qubit(c(a, 0.0), c(b, 0.0)).tensor(&HybridState::qubit(c(s, 0.0), c(s, 0.0)));
        let out = ising_gate(PI).apply(&input, &[0, 1]).unwrap();
        let plus = HybridState::qubit(c(s, 0.0), c(s, 0.0));
        let minus = HybridState::qubit(c(s, 0.0), c(-s, 0.0));
        let want = HybridState::ground()
            .tensor(&plus)
            .scaled(c(a, 0.0))
            .add_scaled(c(b, 0.0), &HybridState::excited().tensor(&minus))
            .unwrap();
        assert!((out.amplitudes() - want.amplitudes()).max_abs() < 1e-15);
    }

    #[test]
    fn control_phase_is_ising_in_local_frame() {
        for chi in [0.3, PI, -2.0] {
            let lhs = ising_gate(chi);
            let rhs = ising_local_frame(chi).then_after(&ising_zz(chi / 4.0)).unwrap();
            assert!((lhs.matrix() - rhs.matrix()).max_abs() < 1e-14);
        }
    }

    #[test]
    fn single_qubit_gates_are_unitary() {
        for g in [pauli_x(), pauli_y(), pauli_z(), hadamard()] {
            assert!(g.unitarity_error() < 1e-15);
        }
    }
}
