//! Single-excitation 2×2 non-Hermitian model of one propagation direction.
//!
//! In the rotating frame (`ω₊ ≡ 0`) the Hamiltonian is
//! `[[ω₋ − iκ, g], [g, −ω₋ − iγ]]` with eigenvalues
//! `E± = −iγ₊ ± √((ω₋ − iγ₋')² + g²)` where `γ₋' = (κ − γ)/2`.

use crate::error::{Error, Result};
use crate::hilbert::Mode;
use crate::model::SystemParams;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveParams {
    pub direction: Mode,
    pub g: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub omega_minus: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PtPhase {
    Unbroken,
    Exceptional,
    Broken,
}

impl PtPhase {
    pub fn name(self) -> &'static str {
        match self {
            PtPhase::Unbroken => "unbroken",
            PtPhase::Exceptional => "exceptional",
            PtPhase::Broken => "broken",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveEigen {
    pub e_plus: C64,
    pub e_minus: C64,
    /// Resonant classification with the default tolerance; `None` off resonance.
    pub phase: Option<PtPhase>,
}

impl EffectiveParams {
    /// Parameters of the subsystem probed through `mode`.
    pub fn from_system(p: &SystemParams, mode: Mode) -> Self {
        Self {
            direction: mode,
            g: p.coupling(mode),
            gamma: p.atomic_decay(mode),
            kappa: p.kappa(),
            omega_minus: 0.0,
        }
    }

    pub fn with_g(self, g: f64) -> Self {
        Self { g, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| {
            Err(Error::InvalidParams {
                name,
                reason: reason.into(),
            })
        };
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad("gamma", "must be finite and ≥ 0");
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return bad("kappa", "must be finite and > 0");
        }
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return bad("g", "must be finite and ≥ 0");
        }
        if !self.omega_minus.is_finite() {
            return bad("omega_minus", "must be finite");
        }
        Ok(())
    }

    pub fn gamma_plus(&self) -> f64 {
        (self.kappa + self.gamma).abs() / 2.0
    }

    pub fn gamma_minus(&self) -> f64 {
        (self.kappa - self.gamma).abs() / 2.0
    }

    /// Matrix `[[ω₋ − iκ, g], [g, −ω₋ − iγ]]` (cavity first).
    pub fn hamiltonian(&self) -> [[C64; 2]; 2] {
        let g = C64::new(self.g, 0.0);
        [
            [C64::new(self.omega_minus, -self.kappa), g],
            [g, C64::new(-self.omega_minus, -self.gamma)],
        ]
    }

    fn default_tol(&self) -> f64 {
        1e-9 * self.kappa.max(self.gamma)
    }
}

/// Principal square root with the branch chosen so `Re ≥ 0`, and `Im ≥ 0`
/// on the negative real axis.
fn csqrt(z: C64) -> C64 {
    if z.im == 0.0 && z.re < 0.0 {
        C64::new(0.0, (-z.re).sqrt())
    } else {
        z.sqrt()
    }
}

pub fn eigenfrequencies(p: &EffectiveParams) -> Result<EffectiveEigen> {
    p.validate()?;
    let center = C64::new(0.0, -p.gamma_plus());
    let root = if p.omega_minus == 0.0 {
        csqrt(C64::new(p.g * p.g - p.gamma_minus().powi(2), 0.0))
    } else {
        let gm = (p.kappa - p.gamma) / 2.0;
        csqrt(C64::new(p.omega_minus, -gm).powi(2) + p.g * p.g)
    };
    let phase = if p.omega_minus == 0.0 {
        Some(classify_phase(p, p.default_tol())?)
    } else {
        None
    };
    Ok(EffectiveEigen {
        e_plus: center + root,
        e_minus: center - root,
        phase,
    })
}

/// Coupling at which the two eigenfrequencies coalesce: `|κ − γ|/2`.
pub fn ep_coupling(p: &EffectiveParams) -> f64 {
    p.gamma_minus()
}

pub fn classify_phase(p: &EffectiveParams, tol: f64) -> Result<PtPhase> {
    p.validate()?;
    if p.omega_minus != 0.0 {
        return Err(Error::NonResonant(p.omega_minus));
    }
    let ep = ep_coupling(p);
    Ok(if (p.g - ep).abs() <= tol {
        PtPhase::Exceptional
    } else if p.g < ep {
        PtPhase::Broken
    } else {
        PtPhase::Unbroken
    })
}

pub fn classify_phase_default(p: &EffectiveParams) -> Result<PtPhase> {
    classify_phase(p, p.default_tol())
}

/// Coefficients `(ζ, ξ, η)` of `ζg⁴ + ξg² + η = 0` locating the dip
/// degeneracy of the transmission spectrum.
pub fn tdd_coefficients(gamma: f64, kappa_in: f64, kappa_ex: f64) -> (f64, f64, f64) {
    let zeta = 2.0 * gamma + kappa_in;
    let xi = 2.0 * gamma * gamma * kappa_in - gamma.powi(3) - gamma * kappa_ex * kappa_ex
        + gamma * kappa_in * kappa_in;
    let eta = -kappa_in * gamma.powi(4);
    (zeta, xi, eta)
}

/// Coupling where the single transmission dip turns into a doublet.
pub fn tdd_coupling(p: &EffectiveParams, kappa_in: f64, kappa_ex: f64) -> Result<f64> {
    p.validate()?;
    if kappa_in.is_nan() || kappa_ex.is_nan() || kappa_in <= 0.0 || kappa_ex < 0.0 {
        return Err(Error::InvalidParams {
            name: "kappa_in",
            reason: format!("need κ_in > 0 and κ_ex ≥ 0 (got {kappa_in}, {kappa_ex})"),
        });
    }
    if ((kappa_in + kappa_ex) - p.kappa).abs() > 1e-12 * p.kappa {
        return Err(Error::InvalidParams {
            name: "kappa",
            reason: format!("κ_in + κ_ex = {} differs from κ = {}", kappa_in + kappa_ex, p.kappa),
        });
    }
    let (zeta, xi, eta) = tdd_coefficients(p.gamma, kappa_in, kappa_ex);
    let disc = xi * xi - 4.0 * zeta * eta;
    if disc < 0.0 || zeta <= 0.0 {
        return Err(Error::NoDipDegeneracy(format!(
            "discriminant {disc:e} with ζ = {zeta}"
        )));
    }
    // Stable form of (−ξ + √disc)/(2ζ) when ξ > 0.
    let sq = disc.sqrt();
    let g2 = if xi > 0.0 {
        -2.0 * eta / (xi + sq)
    } else {
        (-xi + sq) / (2.0 * zeta)
    };
    if g2.is_nan() || g2 <= 0.0 {
        return Err(Error::NoDipDegeneracy(format!("g² root {g2:e} is not positive")));
    }
    Ok(g2.sqrt())
}
