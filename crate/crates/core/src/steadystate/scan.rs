use crate::error::{Error, Result};
use crate::model::{Direction, SystemParams};

use super::observables::solve_params;

/// Central second difference of the steady-state transmission at `delta_p`.
pub fn transmission_curvature(params: &SystemParams, step: f64) -> Result<f64> {
    let t = |d: f64| solve_params(&params.clone().with_delta_p(d))?.transmission();
    let c = params.delta_p;
    Ok((t(c + step)? - 2.0 * t(c)? + t(c - step)?) / (step * step))
}

/// Sets the coupling of the mode probed by `direction`, keeping the
/// CW/CCW ratio fixed.
fn with_probed_coupling(params: &SystemParams, direction: Direction, g: f64) -> SystemParams {
    let p = params.clone().with_direction(direction);
    let g_cw = match p.driven_mode() {
        crate::hilbert::Mode::Cw => g,
        crate::hilbert::Mode::Ccw => g / p.coupling_ratio,
    };
    p.with_g_cw(g_cw)
}

/// Coupling (of the probed mode) at which the resonant dip of the simulated
/// spectrum turns into a local maximum, found by bisecting the sign of the
/// curvature at `Δ_p = 0` inside `bracket`.
pub fn doublet_onset(
    params: &SystemParams,
    direction: Direction,
    bracket: (f64, f64),
    tol: f64,
) -> Result<f64> {
    let base = params.clone().with_delta_p(0.0).with_direction(direction);
    let mode = base.driven_mode();
    let width = 0.5 * (base.kappa() + base.atomic_decay(mode));
    let step = 1e-3 * width;
    let curv = |g: f64| transmission_curvature(&with_probed_coupling(&base, direction, g), step);
    let (mut lo, mut hi) = bracket;
    let (c_lo, c_hi) = (curv(lo)?, curv(hi)?);
    if c_lo.signum() == c_hi.signum() {
        return Err(Error::NoDipDegeneracy(format!(
            "curvature has one sign on [{lo}, {hi}] ({c_lo:e}, {c_hi:e})"
        )));
    }
    let lo_sign = c_lo.signum();
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if curv(mid)?.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
