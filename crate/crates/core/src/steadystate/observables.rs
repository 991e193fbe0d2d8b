use crate::error::{Error, Result};
use crate::hilbert::{annihilator, Operator};
use crate::model::{build_model, SystemParams};
use crate::C64;

use super::{build_liouvillian, solve_steady_state_with, DensityMatrix, SolveOptions};

/// Steady state of one parameter point, with the driven-mode observables.
#[derive(Clone, Debug)]
pub struct SteadyState {
    pub params: SystemParams,
    pub rho: DensityMatrix,
    /// `⟨a†ᵐ aⁿ⟩` of the driven mode for `m, n ≤ 2`, indexed `[m][n]`.
    moments: [[C64; 3]; 3],
}

/// Observables reported for a single steady state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observables {
    /// `|ε − √(2κ_ex)⟨a⟩|² / ε²`.
    pub transmission: f64,
    /// Output photon flux over input flux, including the incoherent part.
    pub flux_transmission: f64,
    /// Equal-time output-field correlation; `None` below a Fock cutoff of 2.
    pub g2_output: Option<f64>,
    /// Intracavity `⟨a†²a²⟩/⟨a†a⟩²`, a diagnostic only.
    pub g2_intracavity: Option<f64>,
    pub mean_photons: f64,
}

/// Solves the steady state of `params` with default tolerances.
pub fn solve_params(params: &SystemParams) -> Result<SteadyState> {
    steady_state_for(params, &SolveOptions::default())
}

pub fn steady_state_for(params: &SystemParams, opts: &SolveOptions) -> Result<SteadyState> {
    params.validate()?;
    let model = build_model(params)?;
    let liou = build_liouvillian(&model)?;
    let rho = solve_steady_state_with(&liou, opts)?;
    let a = annihilator(&model.layout, params.driven_mode())?;
    let ad = a.adjoint();
    let pow = |op: &Operator, k: usize| -> Result<Operator> {
        let mut out = Operator::identity(model.layout);
        for _ in 0..k {
            out = out.compose(op)?;
        }
        Ok(out)
    };
    let mut moments = [[C64::new(0.0, 0.0); 3]; 3];
    for (m, row) in moments.iter_mut().enumerate() {
        for (n, slot) in row.iter_mut().enumerate() {
            *slot = pow(&ad, m)?.compose(&pow(&a, n)?)?.expectation(&rho)?;
        }
    }
    Ok(SteadyState {
        params: params.clone(),
        rho,
        moments,
    })
}

impl SteadyState {
    /// `⟨a†ᵐ aⁿ⟩` of the driven mode.
    pub fn moment(&self, m: usize, n: usize) -> C64 {
        self.moments[m][n]
    }

    fn drive(&self) -> Result<(f64, f64)> {
        let eps = self.params.drive_amplitude;
        if eps <= 0.0 {
            return Err(Error::InvalidParams {
                name: "drive_amplitude",
                reason: "output observables need a nonzero probe".into(),
            });
        }
        Ok((eps, (2.0 * self.params.kappa_ex).sqrt()))
    }

    pub fn transmission(&self) -> Result<f64> {
        let (eps, s) = self.drive()?;
        let out = C64::new(eps, 0.0) - self.moment(0, 1) * s;
        Ok(out.norm_sqr() / (eps * eps))
    }

    /// `⟨a_out† a_out⟩` with `a_out = ε − √(2κ_ex) a`.
    pub fn output_flux(&self) -> Result<f64> {
        let (eps, s) = self.drive()?;
        Ok(self.normal_moment(1, eps, s).re)
    }

    /// `⟨a_out†ᵏ a_outᵏ⟩` expanded into normally ordered cavity moments:
    /// `(ε − s a†)ᵏ (ε − s a)ᵏ = Σ cₘ cₙ a†ᵐ aⁿ` with binomial `c`.
    fn normal_moment(&self, k: usize, eps: f64, s: f64) -> C64 {
        let coeff = |j: usize| -> f64 {
            let binom = match (k, j) {
                (_, 0) => 1.0,
                (1, 1) => 1.0,
                (2, 1) => 2.0,
                (2, 2) => 1.0,
                _ => 0.0,
            };
            binom * eps.powi((k - j) as i32) * (-s).powi(j as i32)
        };
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..=k {
            for n in 0..=k {
                acc += self.moment(m, n) * (coeff(m) * coeff(n));
            }
        }
        acc
    }

    pub fn g2_output(&self) -> Result<f64> {
        let (eps, s) = self.drive()?;
        if self.params.fock_cutoff < 2 {
            return Err(Error::InvalidParams {
                name: "fock_cutoff",
                reason: "g2 needs at least two-photon states (cutoff ≥ 2)".into(),
            });
        }
        let flux = self.normal_moment(1, eps, s).re;
        if flux < 1e-12 * eps * eps {
            return Err(Error::DarkOutput { flux });
        }
        let g2 = self.normal_moment(2, eps, s).re / (flux * flux);
        Ok(g2.max(0.0))
    }

    pub fn g2_intracavity(&self) -> Option<f64> {
        let n = self.moment(1, 1).re;
        (self.params.fock_cutoff >= 2 && n > 1e-300).then(|| self.moment(2, 2).re / (n * n))
    }

    pub fn observables(&self) -> Result<Observables> {
        let (eps, _) = self.drive()?;
        Ok(Observables {
            transmission: self.transmission()?,
            flux_transmission: self.output_flux()? / (eps * eps),
            g2_output: match self.g2_output() {
                Ok(g) => Some(g),
                Err(Error::InvalidParams { .. }) => None,
                Err(e) => return Err(e),
            },
            g2_intracavity: self.g2_intracavity(),
            mean_photons: self.moment(1, 1).re,
        })
    }
}

/// Steady-state amplitude transmission of the driven direction.
pub fn transmission(params: &SystemParams) -> Result<f64> {
    solve_params(params)?.transmission()
}

/// Steady-state equal-time output g²(0) of the driven direction.
pub fn g2_zero(params: &SystemParams) -> Result<f64> {
    solve_params(params)?.g2_output()
}

/// Transmission, flux and correlations from a single solve.
pub fn observe(params: &SystemParams) -> Result<Observables> {
    solve_params(params)?.observables()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Direction, ModelKind};

    fn linear_response_t(p: &SystemParams, g: f64, gamma: f64) -> f64 {
        let dp = p.delta_p;
        let den = C64::new(p.kappa(), dp) + g * g / C64::new(gamma, dp);
        (C64::new(1.0, 0.0) - 2.0 * p.kappa_ex / den).norm_sqr()
    }

    #[test]
    fn empty_cavity_transmission_and_statistics() {
        let p = SystemParams {
            g_ccw: 0.0,
            fock_cutoff: 4,
            model: ModelKind::Reduced,
            ..SystemParams::default()
        };
        let s = solve_params(&p).unwrap();
        let t = s.transmission().unwrap();
        assert!((t - 4.0 / 9.0).abs() < 1e-9, "{t}");
        assert!((s.g2_output().unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn weak_drive_tracks_linear_response() {
        for dir in [Direction::Forward, Direction::Backward] {
            for dp in [-3.0, 0.0, 1.5] {
                let p = SystemParams {
                    drive_amplitude: 1e-3,
                    delta_p: dp,
                    model: ModelKind::Reduced,
                    ..SystemParams::default().with_direction(dir)
                };
                let m = p.driven_mode();
                let want = linear_response_t(&p, p.coupling(m), p.atomic_decay(m));
                let got = transmission(&p).unwrap();
                assert!((got - want).abs() < 1e-5, "{dir:?} Δ={dp}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn strong_coupling_restores_transmission_at_resonance() {
        let p = SystemParams {
            model: ModelKind::Reduced,
            ..SystemParams::default()
                .with_g_cw(50.0)
                .with_direction(Direction::Backward)
        };
        assert!(transmission(&p).unwrap() > 0.9);
    }

    #[test]
    fn dark_and_undriven_outputs_are_errors() {
        let p = SystemParams {
            drive_amplitude: 0.0,
            model: ModelKind::Reduced,
            ..SystemParams::default()
        };
        assert!(matches!(transmission(&p), Err(Error::InvalidParams { .. })));
        let low = SystemParams {
            fock_cutoff: 1,
            model: ModelKind::Reduced,
            ..SystemParams::default()
        };
        assert!(g2_zero(&low).is_err());
        assert!(observe(&low).unwrap().g2_output.is_none());
    }
}
