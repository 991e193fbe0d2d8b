use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::SpaceLayout;
use crate::model::LindbladModel;
use crate::sparse::{CsrMatrix, SparseLu};
use crate::C64;

use super::DensityMatrix;

/// Largest accepted superoperator dimension (`total_dim²`).
pub const DEFAULT_SUPEROPERATOR_CAP: usize = 20_000;

/// Lindblad generator acting on column-stacked density matrices.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    layout: SpaceLayout,
    matrix: CsrMatrix,
}

/// Column-stacking `vec(ρ)`: entry `(i, j)` goes to `i + d·j`.
pub fn vec(m: &DMatrix<C64>) -> Vec<C64> {
    m.as_slice().to_vec()
}

pub fn unvec(v: &[C64], d: usize) -> DMatrix<C64> {
    assert_eq!(v.len(), d * d);
    DMatrix::from_column_slice(d, d, v)
}

pub fn build_liouvillian(model: &LindbladModel) -> Result<Liouvillian> {
    build_liouvillian_capped(model, DEFAULT_SUPEROPERATOR_CAP)
}

/// `L = −i(𝟙⊗H − Hᵀ⊗𝟙) + Σ r (L̄⊗L − ½ 𝟙⊗L†L − ½ (L†L)ᵀ⊗𝟙)`, using
/// `vec(AρB) = (Bᵀ⊗A) vec(ρ)`.
pub fn build_liouvillian_capped(model: &LindbladModel, cap: usize) -> Result<Liouvillian> {
    let d = model.layout.total_dim();
    if d * d > cap {
        return Err(Error::DimensionOverflow { dim: d * d, cap });
    }
    let id = CsrMatrix::identity(d);
    let h = model.hamiltonian.matrix();
    let minus_i = C64::new(0.0, -1.0);
    let mut l = id
        .kron(h)
        .add_scaled(C64::new(-1.0, 0.0), &h.transpose().kron(&id))
        .scale(minus_i);
    for ch in &model.channels {
        let j = ch.jump.matrix();
        let jdj = j.adjoint().matmul(j);
        let r = C64::new(ch.rate, 0.0);
        l = l
            .add_scaled(r, &j.conj().kron(j))
            .add_scaled(-0.5 * r, &id.kron(&jdj))
            .add_scaled(-0.5 * r, &jdj.transpose().kron(&id));
    }
    Ok(Liouvillian {
        layout: model.layout,
        matrix: l,
    })
}

impl Liouvillian {
    pub fn layout(&self) -> SpaceLayout {
        self.layout
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `unvec(L · vec(ρ))`.
    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let d = self.layout.total_dim();
        unvec(&self.matrix.mul_vec(&vec(rho)), d)
    }

    /// `‖L · vec(ρ)‖∞`.
    pub fn residual(&self, rho: &DensityMatrix) -> f64 {
        self.matrix
            .mul_vec(&vec(rho.matrix()))
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }
}

/// Tolerances for [`solve_steady_state_with`].
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub residual_tol: f64,
    pub hermiticity_tol: f64,
    pub trace_tol: f64,
    pub positivity_tol: f64,
    pub refinement_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            residual_tol: 1e-9,
            hermiticity_tol: 1e-10,
            trace_tol: 1e-10,
            positivity_tol: 1e-8,
            refinement_steps: 2,
        }
    }
}

pub fn solve_steady_state(liou: &Liouvillian) -> Result<DensityMatrix> {
    solve_steady_state_with(liou, &SolveOptions::default())
}

/// Kernel of `L` with unit trace: the equation for `ρ₀₀` is replaced by
/// `Σ ρ_kk = 1` and the system is solved by sparse LU with iterative
/// refinement.
pub fn solve_steady_state_with(liou: &Liouvillian, opts: &SolveOptions) -> Result<DensityMatrix> {
    let d = liou.layout.total_dim();
    let n = d * d;
    let trace_row: Vec<(usize, C64)> = (0..d).map(|k| (k + d * k, C64::new(1.0, 0.0))).collect();
    let a = liou.matrix.with_row_replaced(0, &trace_row);
    let lu = SparseLu::factor(&a)?;
    if lu.pivot_ratio() < 1e-15 {
        return Err(Error::DegenerateSteadyState(format!(
            "pivot ratio {:.2e}: kernel is not one-dimensional",
            lu.pivot_ratio()
        )));
    }
    let mut b = vec![C64::new(0.0, 0.0); n];
    b[0] = C64::new(1.0, 0.0);
    let mut x = lu.solve(&b);
    for _ in 0..opts.refinement_steps {
        let ax = a.mul_vec(&x);
        let r: Vec<C64> = b.iter().zip(&ax).map(|(u, v)| u - v).collect();
        let dx = lu.solve(&r);
        x.iter_mut().zip(&dx).for_each(|(u, v)| *u += v);
    }
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::DegenerateSteadyState("non-finite solution".into()));
    }
    let m = unvec(&x, d);
    let mut m = (&m + m.adjoint()).scale(0.5);
    let tr = m.trace();
    m /= tr;
    let rho = DensityMatrix::new(liou.layout, m)?;
    let residual = liou.residual(&rho);
    if residual > opts.residual_tol {
        return Err(Error::ResidualTooLarge {
            residual,
            tol: opts.residual_tol,
        });
    }
    rho.check(opts.hermiticity_tol, opts.trace_tol, opts.positivity_tol)?;
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_full_model, reduce_single_direction, Direction, SystemParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
        let m = DMatrix::from_fn(d, d, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&m + m.adjoint()).scale(0.5)
    }

    /// Direct operator-form evaluation of the master equation.
    fn lindblad_rhs(model: &LindbladModel, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let h = model.hamiltonian.to_dense();
        let i = C64::new(0.0, 1.0);
        let mut out = (&h * rho - rho * &h) * (-i);
        for ch in &model.channels {
            let j = ch.jump.to_dense();
            let jd = j.adjoint();
            let jdj = &jd * &j;
            out += (&j * rho * &jd - (&jdj * rho + rho * &jdj).scale(0.5)) * C64::new(ch.rate, 0.0);
        }
        out
    }

    fn small_params() -> SystemParams {
        SystemParams {
            fock_cutoff: 2,
            delta_p: 0.7,
            ..SystemParams::default()
        }
    }

    #[test]
    fn superoperator_matches_operator_form() {
        let model = build_full_model(&small_params()).unwrap();
        let liou = build_liouvillian(&model).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let rho = random_hermitian(27, &mut rng);
            let diff = liou.apply(&rho) - lindblad_rhs(&model, &rho);
            assert!(diff.camax() < 1e-10);
        }
    }

    #[test]
    fn generator_is_traceless_and_hermiticity_preserving() {
        let model = build_full_model(&small_params()).unwrap();
        let liou = build_liouvillian(&model).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let rho = random_hermitian(27, &mut rng);
            let out = liou.apply(&rho);
            let scale = rho.norm();
            assert!(out.trace().norm() < 1e-10 * scale);
            assert!((&out - out.adjoint()).camax() < 1e-10 * scale);
        }
    }

    #[test]
    fn vacuum_in_kernel_without_drive_or_coupling() {
        let p = SystemParams {
            g_ccw: 0.0,
            drive_amplitude: 0.0,
            ..small_params()
        };
        let model = build_full_model(&p).unwrap();
        let liou = build_liouvillian(&model).unwrap();
        let vac = DensityMatrix::vacuum(model.layout);
        assert!(liou.residual(&vac) < 1e-12);
        let ss = solve_steady_state(&liou).unwrap();
        assert!(ss.max_abs_diff(&vac) < 1e-12);
    }

    #[test]
    fn dimension_cap() {
        let model = build_full_model(&SystemParams {
            fock_cutoff: 4,
            ..SystemParams::default()
        })
        .unwrap();
        assert!(matches!(
            build_liouvillian_capped(&model, 1000),
            Err(Error::DimensionOverflow { dim: 5625, cap: 1000 })
        ));
    }

    #[test]
    fn spectrum_in_left_half_plane() {
        let p = SystemParams {
            fock_cutoff: 2,
            ..SystemParams::default().with_g_cw(2.25)
        };
        for dir in [Direction::Forward, Direction::Backward] {
            let model = build_full_model(&p.clone().with_direction(dir)).unwrap();
            let l = build_liouvillian(&model).unwrap().matrix().to_dense();
            let ev = l.schur().eigenvalues().expect("complex Schur form is triangular");
            let max_re = ev.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
            assert!(max_re <= 1e-10, "{dir:?}: max Re λ = {max_re:e}");
        }
    }

    #[test]
    fn steady_state_invariants() {
        for dir in [Direction::Forward, Direction::Backward] {
            let p = small_params().with_direction(dir);
            let model = reduce_single_direction(&p).unwrap();
            let liou = build_liouvillian(&model).unwrap();
            let rho = solve_steady_state(&liou).unwrap();
            assert!(liou.residual(&rho) < 1e-9);
            rho.check(1e-10, 1e-10, 1e-8).unwrap();
        }
    }

    #[test]
    fn degenerate_kernel_is_reported() {
        // Undamped atom and no coupling: every atomic level is stationary.
        let p = SystemParams {
            gamma_cw: 0.0,
            gamma_ccw: 0.0,
            g_ccw: 0.0,
            fock_cutoff: 1,
            ..SystemParams::default()
        };
        let liou = build_liouvillian(&build_full_model(&p).unwrap()).unwrap();
        assert!(matches!(
            solve_steady_state(&liou),
            Err(Error::DegenerateSteadyState(_))
        ));
    }
}
