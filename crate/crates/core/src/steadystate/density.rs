use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::SpaceLayout;
use crate::C64;

/// Density matrix on a truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    layout: SpaceLayout,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Wraps a matrix without checking the physical invariants; see
    /// [`DensityMatrix::check`].
    pub fn new(layout: SpaceLayout, matrix: DMatrix<C64>) -> Result<Self> {
        let d = layout.total_dim();
        if matrix.shape() != (d, d) {
            return Err(Error::LayoutMismatch(
                layout.to_string(),
                format!("{}×{} matrix", matrix.nrows(), matrix.ncols()),
            ));
        }
        Ok(Self { layout, matrix })
    }

    /// Projector onto basis state `index`.
    pub fn pure(layout: SpaceLayout, index: usize) -> Self {
        let d = layout.total_dim();
        let mut m = DMatrix::zeros(d, d);
        m[(index, index)] = C64::new(1.0, 0.0);
        Self { layout, matrix: m }
    }

    pub fn vacuum(layout: SpaceLayout) -> Self {
        Self::pure(layout, crate::model::vacuum_index(&layout))
    }

    pub fn layout(&self) -> SpaceLayout {
        self.layout
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).camax()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.matrix + self.matrix.adjoint()).scale(0.5);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Hermitian to `herm_tol`, unit trace to `trace_tol`, smallest eigenvalue
    /// above `-pos_tol`.
    pub fn check(&self, herm_tol: f64, trace_tol: f64, pos_tol: f64) -> Result<()> {
        let herm = self.hermiticity_error();
        let tr = self.trace();
        let min_ev = self.min_eigenvalue();
        if herm > herm_tol || (tr - C64::new(1.0, 0.0)).norm() > trace_tol || min_ev < -pos_tol {
            return Err(Error::DegenerateSteadyState(format!(
                "state violates density-matrix invariants: hermiticity {herm:.2e}, trace {tr}, min eigenvalue {min_ev:.2e}"
            )));
        }
        Ok(())
    }

    /// `½ ‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.matrix - &other.matrix;
        let h = (&diff + diff.adjoint()).scale(0.5);
        0.5 * h.symmetric_eigenvalues().iter().map(|e| e.abs()).sum::<f64>()
    }

    /// Largest entry difference.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (&self.matrix - &other.matrix).camax()
    }
}
