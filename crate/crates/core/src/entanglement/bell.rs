use crate::hilbert::{HybridState, RegisterLayout};
use crate::{Ket, C64};

/// The four maximally entangled two-qubit states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bell {
    /// `(|gg> + |ee>)/√2`
    PhiPlus,
    /// `(|gg> - |ee>)/√2`
    PhiMinus,
    /// `(|eg> + |ge>)/√2`
    PsiPlus,
    /// `(|eg> - |ge>)/√2`
    PsiMinus,
}

impl Bell {
    pub fn state(self) -> HybridState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // Flat order: gg, ge, eg, ee.
        let amps = match self {
            Bell::PhiPlus => [s, 0.0, 0.0, s],
            Bell::PhiMinus => [s, 0.0, 0.0, -s],
            Bell::PsiPlus => [0.0, s, s, 0.0],
            Bell::PsiMinus => [0.0, -s, s, 0.0],
        };
        let ket = Ket::from_iterator(4, amps.iter().map(|&a| C64::new(a, 0.0)));
        HybridState::new(RegisterLayout::qubits_only(2), ket).expect("two-qubit layout")
    }
}

/// `|ψ₊>`, the target of transfer and reciprocation.
pub fn psi_plus() -> HybridState {
    Bell::PsiPlus.state()
}

pub fn phi_minus() -> HybridState {
    Bell::PhiMinus.state()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_states_are_orthonormal() {
        let all = [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus];
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let ip = a.state().inner(&b.state()).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).norm() < 1e-15);
            }
        }
    }
}
