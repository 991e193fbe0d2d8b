use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::Operator;
use crate::model::LindbladModel;
use crate::sparse::CsrMatrix;
use crate::C64;

use super::DensityMatrix;

/// Precomputed pieces of `dρ/dt = −i(H_nh ρ − ρ H_nh†) + Σ r L ρ L†`.
struct Generator {
    h_nh: CsrMatrix,
    h_nh_dag: CsrMatrix,
    jumps: Vec<(f64, CsrMatrix, CsrMatrix)>,
}

impl Generator {
    fn new(model: &LindbladModel) -> Result<Self> {
        let h_nh: Operator = model.effective_hamiltonian()?;
        Ok(Self {
            h_nh_dag: h_nh.matrix().adjoint(),
            h_nh: h_nh.matrix().clone(),
            jumps: model
                .channels
                .iter()
                .map(|c| (c.rate, c.jump.matrix().clone(), c.jump.matrix().adjoint()))
                .collect(),
        })
    }

    fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let minus_i = C64::new(0.0, -1.0);
        let mut out = (self.h_nh.mul_dense(rho) - self.h_nh_dag.rmul_dense(rho)) * minus_i;
        for (rate, j, jd) in &self.jumps {
            let jr = j.mul_dense(rho);
            out += jd.rmul_dense(&jr) * C64::new(*rate, 0.0);
        }
        out
    }
}

/// Master-equation right-hand side evaluated in operator form, independent of
/// the vectorised Liouvillian.
pub fn generator(model: &LindbladModel, rho: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    Ok(Generator::new(model)?.apply(rho))
}

fn row_col_norms(m: &CsrMatrix) -> (f64, f64) {
    let mut col = vec![0.0; m.ncols()];
    let mut row_max: f64 = 0.0;
    for r in 0..m.nrows() {
        let (cs, vs) = m.row(r);
        let mut s = 0.0;
        for (&c, v) in cs.iter().zip(vs) {
            s += v.norm();
            col[c] += v.norm();
        }
        row_max = row_max.max(s);
    }
    (row_max, col.into_iter().fold(0.0, f64::max))
}

/// Step size keeping classical RK4 inside its stability region.
///
/// The generator norm is bounded by `2‖H_nh‖ + Σ r ‖L‖²` with each operator
/// 2-norm bounded by `√(‖·‖₁ ‖·‖∞)`; RK4 is stable on the negative real axis up
/// to `|λ dt| ≈ 2.78`, and the returned value keeps `‖G‖ dt ≤ 2.5`.
pub fn suggested_dt(model: &LindbladModel) -> Result<f64> {
    let h = model.effective_hamiltonian()?;
    let (r, c) = row_col_norms(h.matrix());
    let mut bound = 2.0 * (r * c).sqrt();
    for ch in &model.channels {
        let (r, c) = row_col_norms(ch.jump.matrix());
        bound += ch.rate * r * c;
    }
    Ok(if bound > 0.0 { 2.5 / bound } else { f64::INFINITY })
}

/// Fixed-step RK4 integration of the master equation from `rho0` to
/// `t_final`. The step is shrunk so that an integer number of steps lands on
/// `t_final` exactly.
///
/// A physical state keeps unit trace and Frobenius norm ≤ 1. Trace drift
/// beyond 1e-8 or norm growth beyond 1e-6 relative signals an unstable step
/// and is reported as an error.
pub fn evolve(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    t_final: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    if !(dt > 0.0 && t_final >= 0.0 && dt.is_finite() && t_final.is_finite()) {
        return Err(Error::InvalidParams {
            name: "dt",
            reason: format!("need dt > 0 and t_final ≥ 0 (got dt={dt}, t_final={t_final})"),
        });
    }
    if rho0.layout() != model.layout {
        return Err(Error::LayoutMismatch(
            rho0.layout().to_string(),
            model.layout.to_string(),
        ));
    }
    let gen = Generator::new(model)?;
    let steps = (t_final / dt).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    let tr0 = rho0.trace();
    let norm0 = rho0.matrix().norm();
    let norm_cap = norm0.max(1.0) * (1.0 + 1e-6);
    let half = C64::new(0.5 * h, 0.0);
    let full = C64::new(h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);
    let mut rho = rho0.matrix().clone();
    for step in 1..=steps {
        let k1 = gen.apply(&rho);
        let k2 = gen.apply(&(&rho + &k1 * half));
        let k3 = gen.apply(&(&rho + &k2 * half));
        let k4 = gen.apply(&(&rho + &k3 * full));
        rho += (k1 + k2 * two + k3 * two + k4) * sixth;

        let drift = (rho.trace() - tr0).norm();
        let norm = rho.norm();
        if drift > 1e-8 || !norm.is_finite() || norm > norm_cap {
            return Err(Error::UnstableIntegration {
                drift: drift.max(norm / norm_cap - 1.0),
                time: step as f64 * h,
                suggested_dt: suggested_dt(model)?,
            });
        }
    }
    DensityMatrix::new(model.layout, rho)
}
