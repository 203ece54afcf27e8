use crate::MaxAbs;
use serde::Serialize;

use crate::dynamics::{DispersivePhase, JCParams};
use crate::hilbert::layout::raw_offsets;
use crate::hilbert::state::canonical_order;
use crate::hilbert::{HybridState, RegisterLayout};
use crate::{Error, Matrix, Result, C64};

/// What generated a [`Propagator`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Provenance {
    JaynesCummings(JCParams),
    Dispersive(DispersivePhase),
    Displacement { beta: C64 },
    Ising { chi: f64 },
    RotatingFrame { delta: f64, t: f64 },
    Gate(&'static str),
    Product,
}

/// Unitary acting on a fragment of a register, together with the
/// parameters that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Propagator {
    matrix: Matrix,
    layout: RegisterLayout,
    provenance: Provenance,
    truncation_unsafe: Vec<usize>,
}

impl Propagator {
    pub fn new(matrix: Matrix, layout: RegisterLayout, provenance: Provenance) -> Self {
        Self {
            matrix,
            layout,
            provenance,
            truncation_unsafe: Vec::new(),
        }
    }

    /// Marks basis indices whose evolution is distorted by the Fock cutoff.
    pub fn with_truncation_unsafe(mut self, indices: Vec<usize>) -> Self {
        self.truncation_unsafe = indices;
        self
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn truncation_unsafe(&self) -> &[usize] {
        &self.truncation_unsafe
    }

    /// `max |U†U - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.matrix.nrows();
        (self.matrix.adjoint() * &self.matrix - Matrix::identity(n, n)).max_abs()
    }

    pub fn adjoint(&self) -> Propagator {
        Propagator {
            matrix: self.matrix.adjoint(),
            layout: self.layout.clone(),
            provenance: self.provenance.clone(),
            truncation_unsafe: self.truncation_unsafe.clone(),
        }
    }

    /// `self · other` (other acts first).
    pub fn then_after(&self, other: &Propagator) -> Result<Propagator> {
        if self.layout != other.layout {
            return Err(Error::Dimension("cannot compose propagators on different layouts".into()));
        }
        Ok(Propagator::new(
            &self.matrix * &other.matrix,
            self.layout.clone(),
            Provenance::Product,
        ))
    }

    /// Applies to `targets` of `state`; targets list this propagator's
    /// subsystems in its own canonical order.
    pub fn apply(&self, state: &HybridState, targets: &[usize]) -> Result<HybridState> {
        self.check_targets(state.layout(), targets)?;
        state.apply(&self.matrix, targets)
    }

    pub fn embed(&self, targets: &[usize], layout: &RegisterLayout) -> Result<Matrix> {
        self.check_targets(layout, targets)?;
        embed(&self.matrix, targets, layout)
    }

    pub fn tensor(&self, other: &Propagator) -> Propagator {
        let (matrix, layout) = tensor_operators(&self.matrix, &self.layout, &other.matrix, &other.layout);
        Propagator::new(matrix, layout, Provenance::Product)
    }

    fn check_targets(&self, layout: &RegisterLayout, targets: &[usize]) -> Result<()> {
        if targets.len() != self.layout.subsystem_count() {
            return Err(Error::Dimension(format!(
                "propagator acts on {} subsystems, {} targets given",
                self.layout.subsystem_count(),
                targets.len()
            )));
        }
        for (k, &t) in targets.iter().enumerate() {
            let want = self.layout.subsystem_dim(k)?;
            let have = layout.subsystem_dim(t)?;
            if want != have {
                return Err(Error::Dimension(format!(
                    "target {t} has dimension {have}, propagator expects {want}"
                )));
            }
        }
        Ok(())
    }
}

/// Full-register matrix of `op` acting on `targets` (in the given order),
/// identity elsewhere.
pub fn embed(op: &Matrix, targets: &[usize], layout: &RegisterLayout) -> Result<Matrix> {
    for &t in targets {
        layout.check(t)?;
    }
    let t_off = layout.offsets(targets);
    if op.nrows() != t_off.len() || op.ncols() != t_off.len() {
        return Err(Error::Dimension(format!(
            "operator of size {} for target dimension {}",
            op.nrows(),
            t_off.len()
        )));
    }
    let rest = layout.complement(targets);
    if rest.len() + targets.len() != layout.subsystem_count() {
        return Err(Error::Dimension("repeated target subsystem".into()));
    }
    let r_off = layout.offsets(&rest);
    let dim = layout.dim();
    let mut full = Matrix::zeros(dim, dim);
    for &r in &r_off {
        for (i, &ti) in t_off.iter().enumerate() {
            for (j, &tj) in t_off.iter().enumerate() {
                full[(r + ti, r + tj)] = op[(i, j)];
            }
        }
    }
    Ok(full)
}

/// Kronecker product of two operators, reordered qubits-first like
/// [`HybridState::tensor`].
pub fn tensor_operators(
    a: &Matrix,
    la: &RegisterLayout,
    b: &Matrix,
    lb: &RegisterLayout,
) -> (Matrix, RegisterLayout) {
    let raw = a.kronecker(b);
    let raw_dims: Vec<usize> = la.dims().into_iter().chain(lb.dims()).collect();
    let offsets = raw_offsets(&raw_dims, &canonical_order(la, lb));
    let n = offsets.len();
    let m = Matrix::from_fn(n, n, |i, j| raw[(offsets[i], offsets[j])]);
    (m, la.compose(lb))
}
