use crate::MaxAbs;
use nalgebra::SymmetricEigen;

use crate::hilbert::{HybridState, RegisterLayout};
use crate::{Error, Ket, Matrix, Result, C64};

/// Hermiticity and trace tolerance enforced by [`DensityOperator::new`].
pub const DENSITY_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted as round-off.
pub const NEGATIVITY_TOL: f64 = 1e-8;

/// Mixed (or reduced) state of a hybrid register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    layout: RegisterLayout,
    matrix: Matrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(layout: RegisterLayout, matrix: Matrix) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(layout, matrix);
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(layout: RegisterLayout, matrix: Matrix) -> Self {
        Self { layout, matrix }
    }

    pub fn from_pure(state: &HybridState) -> Result<Self> {
        let rho = state.clone().normalized()?.to_density();
        Ok(rho)
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.layout.dim();
        if self.matrix.nrows() != dim || self.matrix.ncols() != dim {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} for layout dimension {dim}",
                self.matrix.nrows(),
                self.matrix.ncols()
            )));
        }
        let herm = (&self.matrix - self.matrix.adjoint()).max_abs();
        if herm > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -NEGATIVITY_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Rescales to unit trace.
    pub fn normalized(mut self) -> Result<Self> {
        let tr = self.trace();
        if tr <= 0.0 || !tr.is_finite() {
            return Err(Error::ZeroNorm);
        }
        self.matrix /= C64::new(tr, 0.0);
        Ok(self)
    }

    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.norm_squared()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let mut values: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// `<v|ρ|v>`.
    pub fn expectation(&self, v: &Ket) -> Result<f64> {
        if v.len() != self.matrix.nrows() {
            return Err(Error::Dimension(format!(
                "vector of length {} against operator of dimension {}",
                v.len(),
                self.matrix.nrows()
            )));
        }
        Ok(v.dotc(&(&self.matrix * v)).re)
    }

    /// Reduced operator on `keep`; an empty `keep` is rejected.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        if keep.is_empty() {
            return Err(Error::Dimension("partial trace must keep at least one subsystem".into()));
        }
        let layout = self.layout.select(keep)?;
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        let traced = self.layout.complement(&sorted);
        let k_off = self.layout.offsets(&sorted);
        let t_off = self.layout.offsets(&traced);
        let matrix = Matrix::from_fn(k_off.len(), k_off.len(), |i, j| {
            t_off
                .iter()
                .map(|&t| self.matrix[(k_off[i] + t, k_off[j] + t)])
                .sum()
        });
        Ok(DensityOperator { layout, matrix })
    }

    /// `U ρ U†` with `U` acting on `targets`.
    pub fn conjugate_by(&self, op: &Matrix, targets: &[usize]) -> Result<DensityOperator> {
        let full = crate::hilbert::embed(op, targets, &self.layout)?;
        Ok(DensityOperator {
            layout: self.layout.clone(),
            matrix: &full * &self.matrix * full.adjoint(),
        })
    }
}
