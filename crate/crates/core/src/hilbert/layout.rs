use serde::Serialize;

use crate::{Error, Result};

/// Shape of a hybrid register: `qubits` two-level systems followed by one
/// truncated Fock space per cavity mode.
///
/// Subsystem indices run over qubits first (`0..qubits`) and then modes
/// (`qubits..qubits + modes.len()`). A flat amplitude index is the row-major
/// combination of the per-subsystem digits, first subsystem most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RegisterLayout {
    qubits: usize,
    modes: Vec<usize>,
}

impl RegisterLayout {
    /// `modes` holds the Fock cutoff `n_max` of each mode (dimension `n_max + 1`).
    pub fn new(qubits: usize, modes: Vec<usize>) -> Self {
        Self { qubits, modes }
    }

    pub fn qubits_only(qubits: usize) -> Self {
        Self::new(qubits, Vec::new())
    }

    pub fn single_mode(n_max: usize) -> Self {
        Self::new(0, vec![n_max])
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Fock cutoffs of the modes, in order.
    pub fn mode_cutoffs(&self) -> &[usize] {
        &self.modes
    }

    pub fn subsystem_count(&self) -> usize {
        self.qubits + self.modes.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        std::iter::repeat_n(2, self.qubits)
            .chain(self.modes.iter().map(|n| n + 1))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dims().iter().product()
    }

    pub fn subsystem_dim(&self, sub: usize) -> Result<usize> {
        self.check(sub)?;
        Ok(if sub < self.qubits {
            2
        } else {
            self.modes[sub - self.qubits] + 1
        })
    }

    pub fn is_qubit(&self, sub: usize) -> bool {
        sub < self.qubits
    }

    /// Subsystem index of the `i`-th qubit.
    pub fn qubit(&self, i: usize) -> Result<usize> {
        if i < self.qubits {
            Ok(i)
        } else {
            Err(Error::Subsystem {
                index: i,
                count: self.qubits,
            })
        }
    }

    /// Subsystem index of the `j`-th mode.
    pub fn mode(&self, j: usize) -> Result<usize> {
        if j < self.modes.len() {
            Ok(self.qubits + j)
        } else {
            Err(Error::Subsystem {
                index: self.qubits + j,
                count: self.subsystem_count(),
            })
        }
    }

    pub fn check(&self, sub: usize) -> Result<()> {
        if sub < self.subsystem_count() {
            Ok(())
        } else {
            Err(Error::Subsystem {
                index: sub,
                count: self.subsystem_count(),
            })
        }
    }

    pub fn strides(&self) -> Vec<usize> {
        let dims = self.dims();
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        strides
    }

    /// Flat index of a digit tuple (one digit per subsystem).
    pub fn index_of(&self, digits: &[usize]) -> Result<usize> {
        let dims = self.dims();
        if digits.len() != dims.len() {
            return Err(Error::Dimension(format!(
                "expected {} digits, got {}",
                dims.len(),
                digits.len()
            )));
        }
        let mut index = 0;
        for (d, (&digit, &dim)) in digits.iter().zip(&dims).enumerate() {
            if digit >= dim {
                return Err(Error::Dimension(format!(
                    "digit {digit} out of range for subsystem {d} of dimension {dim}"
                )));
            }
            index = index * dim + digit;
        }
        Ok(index)
    }

    pub fn digits_of(&self, mut index: usize) -> Result<Vec<usize>> {
        let dims = self.dims();
        if index >= self.dim() {
            return Err(Error::Dimension(format!(
                "index {index} out of range for dimension {}",
                self.dim()
            )));
        }
        let mut digits = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            digits[k] = index % dims[k];
            index /= dims[k];
        }
        Ok(digits)
    }

    /// Layout of the listed subsystems. The result is always in canonical
    /// order (qubits before modes, original relative order preserved).
    pub fn select(&self, subs: &[usize]) -> Result<RegisterLayout> {
        let mut sorted = subs.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != subs.len() {
            return Err(Error::Dimension("repeated subsystem index".into()));
        }
        for &s in &sorted {
            self.check(s)?;
        }
        let qubits = sorted.iter().filter(|&&s| s < self.qubits).count();
        let modes = sorted
            .iter()
            .filter(|&&s| s >= self.qubits)
            .map(|&s| self.modes[s - self.qubits])
            .collect();
        Ok(RegisterLayout::new(qubits, modes))
    }

    pub fn without(&self, sub: usize) -> Result<RegisterLayout> {
        self.check(sub)?;
        let rest: Vec<usize> = (0..self.subsystem_count()).filter(|&s| s != sub).collect();
        self.select(&rest)
    }

    /// Complement of `subs`, in canonical order.
    pub fn complement(&self, subs: &[usize]) -> Vec<usize> {
        (0..self.subsystem_count())
            .filter(|s| !subs.contains(s))
            .collect()
    }

    /// Layout of `self ⊗ other` after normalizing to qubits-first order.
    pub fn compose(&self, other: &RegisterLayout) -> RegisterLayout {
        let mut modes = self.modes.clone();
        modes.extend_from_slice(&other.modes);
        RegisterLayout::new(self.qubits + other.qubits, modes)
    }

    /// Flat offsets contributed by every digit combination of `subs`,
    /// enumerated row-major in the order `subs` is given.
    pub(crate) fn offsets(&self, subs: &[usize]) -> Vec<usize> {
        let dims = self.dims();
        let strides = self.strides();
        let mut out = vec![0usize];
        for &s in subs {
            let mut next = Vec::with_capacity(out.len() * dims[s]);
            for &base in &out {
                for d in 0..dims[s] {
                    next.push(base + d * strides[s]);
                }
            }
            out = next;
        }
        out
    }
}

/// Offsets for a list of raw dimensions (used before a layout exists).
pub(crate) fn raw_offsets(dims: &[usize], order: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let mut out = vec![0usize];
    for &s in order {
        let mut next = Vec::with_capacity(out.len() * dims[s]);
        for &base in &out {
            for d in 0..dims[s] {
                next.push(base + d * strides[s]);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_counts_qubits_and_modes() {
        let layout = RegisterLayout::new(2, vec![3, 1]);
        assert_eq!(layout.dims(), vec![2, 2, 4, 2]);
        assert_eq!(layout.dim(), 32);
        assert_eq!(layout.mode(1).unwrap(), 3);
        assert!(layout.mode(2).is_err());
        assert!(layout.qubit(2).is_err());
    }

    #[test]
    fn empty_layout_is_scalar() {
        assert_eq!(RegisterLayout::qubits_only(0).dim(), 1);
    }

    #[test]
    fn index_digits_round_trip() {
        let layout = RegisterLayout::new(1, vec![2, 3]);
        for i in 0..layout.dim() {
            let digits = layout.digits_of(i).unwrap();
            assert_eq!(layout.index_of(&digits).unwrap(), i);
        }
        assert!(layout.index_of(&[0, 3, 0]).is_err());
        assert!(layout.digits_of(layout.dim()).is_err());
    }

    #[test]
    fn offsets_enumerate_in_requested_order() {
        let layout = RegisterLayout::new(2, vec![]);
        assert_eq!(layout.offsets(&[0]), vec![0, 2]);
        assert_eq!(layout.offsets(&[1, 0]), vec![0, 2, 1, 3]);
        assert_eq!(raw_offsets(&[2, 3], &[1, 0]), vec![0, 3, 1, 4, 2, 5]);
    }

    #[test]
    fn select_keeps_canonical_order() {
        let layout = RegisterLayout::new(2, vec![4, 5]);
        let sub = layout.select(&[3, 0]).unwrap();
        assert_eq!(sub, RegisterLayout::new(1, vec![5]));
        assert!(layout.select(&[0, 0]).is_err());
        assert!(layout.select(&[7]).is_err());
    }
}
