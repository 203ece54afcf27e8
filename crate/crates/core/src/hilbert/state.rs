use crate::hilbert::layout::raw_offsets;
use crate::hilbert::{DensityOperator, RegisterLayout};
use crate::{Error, Ket, Matrix, Result, C64};

/// Pure state of a hybrid register.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridState {
    layout: RegisterLayout,
    amplitudes: Ket,
}

impl HybridState {
    pub fn new(layout: RegisterLayout, amplitudes: Ket) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for a layout of dimension {}",
                amplitudes.len(),
                layout.dim()
            )));
        }
        Ok(Self { layout, amplitudes })
    }

    pub fn zeros(layout: RegisterLayout) -> Self {
        let dim = layout.dim();
        Self {
            layout,
            amplitudes: Ket::zeros(dim),
        }
    }

    /// Computational basis state with the given digits.
    pub fn basis(layout: RegisterLayout, digits: &[usize]) -> Result<Self> {
        let index = layout.index_of(digits)?;
        let mut state = Self::zeros(layout);
        state.amplitudes[index] = C64::new(1.0, 0.0);
        Ok(state)
    }

    /// Single qubit `ground |g> + excited |e>`, not normalized.
    pub fn qubit(ground: C64, excited: C64) -> Self {
        Self {
            layout: RegisterLayout::qubits_only(1),
            amplitudes: Ket::from_vec(vec![ground, excited]),
        }
    }

    pub fn ground() -> Self {
        Self::qubit(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn excited() -> Self {
        Self::qubit(C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    /// Single mode state from Fock amplitudes.
    pub fn mode(amplitudes: Ket) -> Self {
        let n_max = amplitudes.len().saturating_sub(1);
        Self {
            layout: RegisterLayout::single_mode(n_max),
            amplitudes,
        }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &Ket {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Ket {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        self.amplitudes /= C64::new(norm, 0.0);
        Ok(self)
    }

    pub fn scaled(mut self, factor: C64) -> Self {
        self.amplitudes *= factor;
        self
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: C64, other: &HybridState) -> Result<Self> {
        self.same_layout(other)?;
        Ok(Self {
            layout: self.layout.clone(),
            amplitudes: &self.amplitudes + &other.amplitudes * factor,
        })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &HybridState) -> Result<C64> {
        self.same_layout(other)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|<self|other>|^2` for normalized inputs; global phases drop out.
    pub fn fidelity(&self, other: &HybridState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    fn same_layout(&self, other: &HybridState) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::Dimension(format!(
                "layouts differ: {:?} vs {:?}",
                self.layout, other.layout
            )));
        }
        Ok(())
    }

    /// Tensor product, reordered so that all qubits precede all modes.
    pub fn tensor(&self, other: &HybridState) -> HybridState {
        let left = self.layout.dims();
        let right = other.layout.dims();
        let raw_dims: Vec<usize> = left.iter().chain(&right).copied().collect();
        let order = canonical_order(&self.layout, &other.layout);
        let raw = kron_vec(&self.amplitudes, &other.amplitudes);
        let offsets = raw_offsets(&raw_dims, &order);
        let amplitudes = Ket::from_iterator(offsets.len(), offsets.iter().map(|&i| raw[i]));
        HybridState {
            layout: self.layout.compose(&other.layout),
            amplitudes,
        }
    }

    /// Applies `op`, acting on the tensor product of `targets` (in the given
    /// order), with identity on every other subsystem.
    pub fn apply(&self, op: &Matrix, targets: &[usize]) -> Result<HybridState> {
        let (t_off, r_off) = self.split_offsets(targets)?;
        if op.nrows() != t_off.len() || op.ncols() != t_off.len() {
            return Err(Error::Dimension(format!(
                "operator is {}x{} but targets span dimension {}",
                op.nrows(),
                op.ncols(),
                t_off.len()
            )));
        }
        let mut out = self.amplitudes.clone();
        let mut x = Ket::zeros(t_off.len());
        for &r in &r_off {
            for (k, &t) in t_off.iter().enumerate() {
                x[k] = self.amplitudes[r + t];
            }
            let y = op * &x;
            for (k, &t) in t_off.iter().enumerate() {
                out[r + t] = y[k];
            }
        }
        Ok(HybridState {
            layout: self.layout.clone(),
            amplitudes: out,
        })
    }

    /// Applies a diagonal operator given by its diagonal.
    pub fn apply_diagonal(&self, diag: &[C64], targets: &[usize]) -> Result<HybridState> {
        let (t_off, r_off) = self.split_offsets(targets)?;
        if diag.len() != t_off.len() {
            return Err(Error::Dimension(format!(
                "diagonal of length {} for target dimension {}",
                diag.len(),
                t_off.len()
            )));
        }
        let mut out = self.amplitudes.clone();
        for &r in &r_off {
            for (k, &t) in t_off.iter().enumerate() {
                out[r + t] *= diag[k];
            }
        }
        Ok(HybridState {
            layout: self.layout.clone(),
            amplitudes: out,
        })
    }

    /// `(<bra|_sub ⊗ I) |self>`: contracts one subsystem against a bra given
    /// by its ket `bra` (conjugated here). The result is not normalized and
    /// lives on the remaining subsystems.
    pub fn contract(&self, sub: usize, bra: &Ket) -> Result<HybridState> {
        let (t_off, r_off) = self.split_offsets(&[sub])?;
        if bra.len() != t_off.len() {
            return Err(Error::Dimension(format!(
                "bra of length {} for subsystem of dimension {}",
                bra.len(),
                t_off.len()
            )));
        }
        let amplitudes = Ket::from_iterator(
            r_off.len(),
            r_off.iter().map(|&r| {
                t_off
                    .iter()
                    .zip(bra.iter())
                    .map(|(&t, b)| b.conj() * self.amplitudes[r + t])
                    .sum::<C64>()
            }),
        );
        Ok(HybridState {
            layout: self.layout.without(sub)?,
            amplitudes,
        })
    }

    /// Reduced density operator on `keep` (any order; the result is in
    /// canonical order). The trace equals the squared norm of `self`.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityOperator> {
        let layout = self.layout.select(keep)?;
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        let traced = self.layout.complement(&sorted);
        let k_off = self.layout.offsets(&sorted);
        let t_off = self.layout.offsets(&traced);
        let m = Matrix::from_fn(k_off.len(), t_off.len(), |i, j| {
            self.amplitudes[k_off[i] + t_off[j]]
        });
        Ok(DensityOperator::from_matrix_unchecked(layout, &m * m.adjoint()))
    }

    /// Amplitudes arranged as a matrix with rows indexed by `rows` and
    /// columns by the remaining subsystems (both canonical order).
    pub fn bipartite_matrix(&self, rows: &[usize]) -> Result<Matrix> {
        let mut sorted = rows.to_vec();
        sorted.sort_unstable();
        self.layout.select(&sorted)?;
        let cols = self.layout.complement(&sorted);
        let r_off = self.layout.offsets(&sorted);
        let c_off = self.layout.offsets(&cols);
        Ok(Matrix::from_fn(r_off.len(), c_off.len(), |i, j| {
            self.amplitudes[r_off[i] + c_off[j]]
        }))
    }

    pub fn to_density(&self) -> DensityOperator {
        let v = &self.amplitudes;
        DensityOperator::from_matrix_unchecked(self.layout.clone(), v * v.adjoint())
    }

    /// Appends a qubit in state `ket` after the existing qubits (and before
    /// the modes).
    pub fn insert_qubit(&self, ket: [C64; 2]) -> HybridState {
        let q = self.layout.qubit_count();
        let layout = RegisterLayout::new(q + 1, self.layout.mode_cutoffs().to_vec());
        let block = self.layout.mode_cutoffs().iter().map(|n| n + 1).product::<usize>();
        let mut amplitudes = Ket::zeros(layout.dim());
        for (i, a) in self.amplitudes.iter().enumerate() {
            let (qb, m) = (i / block, i % block);
            for (p, k) in ket.iter().enumerate() {
                amplitudes[(qb * 2 + p) * block + m] = a * k;
            }
        }
        HybridState { layout, amplitudes }
    }

    /// Same state with mode `sub` embedded in the larger cutoff `n_max`.
    pub fn extend_mode(&self, sub: usize, n_max: usize) -> Result<HybridState> {
        self.layout.check(sub)?;
        if self.layout.is_qubit(sub) {
            return Err(Error::Dimension(format!("subsystem {sub} is a qubit, not a mode")));
        }
        let q = self.layout.qubit_count();
        let old = self.layout.mode_cutoffs()[sub - q];
        if n_max < old {
            return Err(Error::Dimension(format!("cannot shrink mode cutoff {old} to {n_max}")));
        }
        let mut cutoffs = self.layout.mode_cutoffs().to_vec();
        cutoffs[sub - q] = n_max;
        let layout = RegisterLayout::new(q, cutoffs);
        let mut amplitudes = Ket::zeros(layout.dim());
        for (i, a) in self.amplitudes.iter().enumerate() {
            amplitudes[layout.index_of(&self.layout.digits_of(i)?)?] = *a;
        }
        Ok(HybridState { layout, amplitudes })
    }

    /// Splits off a factor on `sub` from an (approximately) product state.
    /// Returns the state of the remaining subsystems, the factor on `sub`
    /// and the discarded Schmidt weight (0 for an exact product).
    pub fn factor_out(&self, sub: usize) -> Result<(HybridState, Ket, f64)> {
        let rest = self.layout.complement(&[sub]);
        let m = self.bipartite_matrix(&rest)?;
        let svd = m.svd(true, true);
        let u = svd.u.ok_or(Error::ZeroNorm)?;
        let v_t = svd.v_t.ok_or(Error::ZeroNorm)?;
        let (imax, smax) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &s)| if s > acc.1 { (i, s) } else { acc });
        if smax <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let total: f64 = svd.singular_values.iter().map(|s| s * s).sum();
        let left = u.column(imax).into_owned();
        let right = v_t.row(imax).transpose();
        let rest_state = HybridState::new(self.layout.without(sub)?, left)?;
        Ok((rest_state, right, 1.0 - smax * smax / total))
    }

    fn split_offsets(&self, targets: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        for &t in targets {
            self.layout.check(t)?;
        }
        let mut sorted = targets.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != targets.len() {
            return Err(Error::Dimension("repeated target subsystem".into()));
        }
        let rest = self.layout.complement(targets);
        Ok((self.layout.offsets(targets), self.layout.offsets(&rest)))
    }
}

/// Raw Kronecker order `[left subsystems, right subsystems]` rearranged to
/// qubits first.
pub(crate) fn canonical_order(left: &RegisterLayout, right: &RegisterLayout) -> Vec<usize> {
    let n1 = left.subsystem_count();
    let (q1, q2) = (left.qubit_count(), right.qubit_count());
    (0..q1)
        .chain(n1..n1 + q2)
        .chain(q1..n1)
        .chain(n1 + q2..n1 + right.subsystem_count())
        .collect()
}

fn kron_vec(a: &Ket, b: &Ket) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            out.push(x * y);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn tensor_puts_qubits_first() {
        let mode = HybridState::mode(Ket::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]));
        let state = mode.tensor(&HybridState::excited());
        assert_eq!(state.layout(), &RegisterLayout::new(1, vec![1]));
        // |e> ⊗ |1>: qubit digit 1, Fock digit 1.
        let idx = state.layout().index_of(&[1, 1]).unwrap();
        assert_eq!(state.amplitudes()[idx], c(1.0, 0.0));
    }

    #[test]
    fn tensor_norm_is_multiplicative() {
        let u = HybridState::qubit(c(1.0, 2.0), c(0.5, 0.0));
        let v = HybridState::mode(Ket::from_vec(vec![c(0.3, 0.0), c(0.0, -1.0), c(2.0, 0.0)]));
        let t = u.tensor(&v);
        assert!((t.norm() - u.norm() * v.norm()).abs() < 1e-12);
    }

    #[test]
    fn contract_against_basis_picks_component() {
        let s = HybridState::qubit(c(0.6, 0.0), c(0.0, 0.8)).tensor(&HybridState::ground());
        let bra = Ket::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let r = s.contract(0, &bra).unwrap();
        assert_eq!(r.layout(), &RegisterLayout::qubits_only(1));
        assert!((r.amplitudes()[0] - c(0.0, 0.8)).norm() < 1e-15);
    }

    #[test]
    fn apply_rejects_wrong_operator_size() {
        let s = HybridState::ground().tensor(&HybridState::ground());
        let op = Matrix::identity(3, 3);
        assert!(s.apply(&op, &[0]).is_err());
        assert!(s.apply(&Matrix::identity(4, 4), &[0, 0]).is_err());
        assert!(s.apply(&Matrix::identity(2, 2), &[2]).is_err());
    }

    #[test]
    fn apply_respects_target_order() {
        // CNOT with control = target list's first entry.
        let mut cnot = Matrix::zeros(4, 4);
        for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            cnot[(i, j)] = c(1.0, 0.0);
        }
        let s = HybridState::ground().tensor(&HybridState::excited());
        let out = s.apply(&cnot, &[1, 0]).unwrap();
        let idx = out.layout().index_of(&[1, 1]).unwrap();
        assert_eq!(out.amplitudes()[idx], c(1.0, 0.0));
    }

    #[test]
    fn insert_qubit_appends_after_existing_qubits() {
        let base = HybridState::excited().tensor(&HybridState::mode(Ket::from_vec(vec![
            c(0.0, 0.0),
            c(1.0, 0.0),
        ])));
        let s = base.insert_qubit([c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(s.layout(), &RegisterLayout::new(2, vec![1]));
        let idx = s.layout().index_of(&[1, 0, 1]).unwrap();
        assert_eq!(s.amplitudes()[idx], c(1.0, 0.0));
    }

    #[test]
    fn factor_out_recovers_product_factors() {
        let a = HybridState::qubit(c(0.6, 0.0), c(0.0, 0.8));
        let b = HybridState::qubit(c(1.0, 0.0), c(1.0, 0.0)).normalized().unwrap();
        let (rest, factor, loss) = a.tensor(&b).factor_out(1).unwrap();
        assert!(loss.abs() < 1e-14);
        assert!((rest.fidelity(&a).unwrap() - 1.0).abs() < 1e-12);
        assert!((factor.dotc(b.amplitudes()).norm_sqr() - 1.0).abs() < 1e-12);
    }
}
