//! Driven chiral cQED model in the frame rotating at the probe frequency.
//!
//! With the atom and both modes resonant at ω₀ and Δ_p = ω₀ − ω_p,
//!
//! ```text
//! H = Δ_p (σ₁₁ + σ₂₂ + a†_cw a_cw + a†_ccw a_ccw)
//!   + g_cw (a†_cw σ₀₂ + σ₂₀ a_cw) + g_ccw (a†_ccw σ₀₁ + σ₁₀ a_ccw)
//!   + i √(2κ_ex) ε (a†_d − a_d)
//! ```
//!
//! where `a_d` is the mode fed by the probe. Dissipation enters only through
//! the four collapse channels `(2κ, a_cw)`, `(2κ, a_ccw)`, `(2γ_ccw, σ₀₁)`,
//! `(2γ_cw, σ₀₂)`, so the non-Hermitian Hamiltonian with `−iκ`, `−iγ` terms is
//! recovered as `H − (i/2) Σ r L†L`.

use crate::error::{Error, Result};
use crate::hilbert::{annihilator, atom_transition, Level, Mode, Operator, SpaceLayout};
use crate::C64;

/// Probe input direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "forward" | "fwd" => Ok(Direction::Forward),
            "backward" | "bwd" => Ok(Direction::Backward),
            other => Err(Error::InvalidParams {
                name: "direction",
                reason: format!("expected forward or backward, got `{other}`"),
            }),
        }
    }
}

/// Which Hilbert space a simulation runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Both modes and all three atomic levels.
    Full,
    /// Driven mode and its atomic transition only.
    Reduced,
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(ModelKind::Full),
            "reduced" => Ok(ModelKind::Reduced),
            other => Err(Error::InvalidParams {
                name: "model",
                reason: format!("expected full or reduced, got `{other}`"),
            }),
        }
    }
}

/// All physical and numerical settings of one simulation point.
///
/// Rates are amplitude decay rates in the normalised units where γ_cw = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams {
    pub gamma_cw: f64,
    pub gamma_ccw: f64,
    pub kappa_in: f64,
    pub kappa_ex: f64,
    pub g_ccw: f64,
    /// `g_cw = g_ccw / coupling_ratio` unless `g_cw_override` is set.
    pub coupling_ratio: f64,
    pub g_cw_override: Option<f64>,
    /// Δ_p = ω₀ − ω_p.
    pub delta_p: f64,
    /// Input field amplitude ε (square root of photon flux).
    pub drive_amplitude: f64,
    pub direction: Direction,
    /// Mode excited by a forward input; backward feeds the other one.
    pub forward_mode: Mode,
    pub fock_cutoff: usize,
    pub model: ModelKind,
}

/// Cs dipole-moment ratio d₊/d₋ = √45.
pub const CS_COUPLING_RATIO: f64 = 6.708_203_932_499_369;

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            gamma_cw: 1.0,
            gamma_ccw: 45.0,
            kappa_in: 0.5,
            kappa_ex: 2.5,
            g_ccw: 2.25 * CS_COUPLING_RATIO,
            coupling_ratio: CS_COUPLING_RATIO,
            g_cw_override: None,
            delta_p: 0.0,
            drive_amplitude: 0.05,
            direction: Direction::Forward,
            forward_mode: Mode::Ccw,
            fock_cutoff: 4,
            model: ModelKind::Full,
        }
    }
}

impl SystemParams {
    pub fn kappa(&self) -> f64 {
        self.kappa_in + self.kappa_ex
    }

    pub fn g_cw(&self) -> f64 {
        self.g_cw_override
            .unwrap_or(self.g_ccw / self.coupling_ratio)
    }

    /// Sets `g_ccw = coupling_ratio · g_cw` and clears any override.
    pub fn with_g_cw(mut self, g_cw: f64) -> Self {
        self.g_ccw = self.coupling_ratio * g_cw;
        self.g_cw_override = None;
        self
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn with_delta_p(mut self, delta_p: f64) -> Self {
        self.delta_p = delta_p;
        self
    }

    pub fn driven_mode(&self) -> Mode {
        match self.direction {
            Direction::Forward => self.forward_mode,
            Direction::Backward => self.forward_mode.other(),
        }
    }

    /// Coupling strength of `mode`.
    pub fn coupling(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Cw => self.g_cw(),
            Mode::Ccw => self.g_ccw,
        }
    }

    /// Amplitude decay rate of the atomic level coupled to `mode`.
    pub fn atomic_decay(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Cw => self.gamma_cw,
            Mode::Ccw => self.gamma_ccw,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("gamma_cw", self.gamma_cw),
            ("gamma_ccw", self.gamma_ccw),
            ("kappa_in", self.kappa_in),
            ("kappa_ex", self.kappa_ex),
            ("g_ccw", self.g_ccw),
            ("drive_amplitude", self.drive_amplitude),
        ];
        for (name, v) in rates {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParams {
                    name,
                    reason: format!("must be finite and non-negative, got {v}"),
                });
            }
        }
        if let Some(g) = self.g_cw_override {
            if !g.is_finite() || g < 0.0 {
                return Err(Error::InvalidParams {
                    name: "g_cw",
                    reason: format!("must be finite and non-negative, got {g}"),
                });
            }
        }
        if !(self.coupling_ratio.is_finite() && self.coupling_ratio > 0.0) {
            return Err(Error::InvalidParams {
                name: "coupling_ratio",
                reason: format!("must be positive, got {}", self.coupling_ratio),
            });
        }
        if self.kappa() <= 0.0 {
            return Err(Error::InvalidParams {
                name: "kappa",
                reason: "kappa_in + kappa_ex must be positive".into(),
            });
        }
        if !self.delta_p.is_finite() {
            return Err(Error::InvalidParams {
                name: "delta_p",
                reason: "must be finite".into(),
            });
        }
        if self.fock_cutoff == 0 {
            return Err(Error::InvalidCutoff(0));
        }
        Ok(())
    }
}

/// One dissipation channel `r (L ρ L† − ½{L†L, ρ})`.
#[derive(Clone, Debug)]
pub struct Channel {
    pub label: &'static str,
    pub rate: f64,
    pub jump: Operator,
}

/// Hermitian rotating-frame Hamiltonian plus collapse channels.
#[derive(Clone, Debug)]
pub struct LindbladModel {
    pub layout: SpaceLayout,
    pub hamiltonian: Operator,
    pub channels: Vec<Channel>,
}

impl LindbladModel {
    /// `H − (i/2) Σ r L†L`.
    pub fn effective_hamiltonian(&self) -> Result<Operator> {
        let mut h = self.hamiltonian.clone();
        for ch in &self.channels {
            let ldl = ch.jump.adjoint().compose(&ch.jump)?;
            h = h.add_scaled(C64::new(0.0, -0.5 * ch.rate), &ldl)?;
        }
        Ok(h)
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Full-space rotating-frame Hamiltonian.
pub fn build_hamiltonian(params: &SystemParams) -> Result<Operator> {
    params.validate()?;
    let layout = SpaceLayout::full(params.fock_cutoff)?;
    let mut h = Operator::zero(layout);
    for mode in [Mode::Cw, Mode::Ccw] {
        h = add_mode_terms(h, &layout, params, mode)?;
    }
    add_drive(h, &layout, params)
}

/// Detuning and Jaynes–Cummings terms of one mode and its atomic transition.
fn add_mode_terms(
    h: Operator,
    layout: &SpaceLayout,
    params: &SystemParams,
    mode: Mode,
) -> Result<Operator> {
    let a = annihilator(layout, mode)?;
    let e = mode.excited_level() as usize;
    let lower = atom_transition(layout, 0, e)?;
    let proj = atom_transition(layout, e, e)?;
    let n = a.adjoint().compose(&a)?;
    let g = params.coupling(mode);
    let jc = a
        .adjoint()
        .compose(&lower)?
        .add_scaled(re(1.0), &lower.adjoint().compose(&a)?)?;
    h.add_scaled(re(params.delta_p), &proj)?
        .add_scaled(re(params.delta_p), &n)?
        .add_scaled(re(g), &jc)
}

fn add_drive(h: Operator, layout: &SpaceLayout, params: &SystemParams) -> Result<Operator> {
    let a = annihilator(layout, params.driven_mode())?;
    let amp = (2.0 * params.kappa_ex).sqrt() * params.drive_amplitude;
    let drive = a.adjoint().add_scaled(re(-1.0), &a)?;
    h.add_scaled(C64::new(0.0, amp), &drive)
}

/// The four collapse channels of the full model.
pub fn build_collapse_ops(params: &SystemParams) -> Result<Vec<Channel>> {
    params.validate()?;
    let layout = SpaceLayout::full(params.fock_cutoff)?;
    let kappa = params.kappa();
    Ok(vec![
        Channel {
            label: "cavity CW",
            rate: 2.0 * kappa,
            jump: annihilator(&layout, Mode::Cw)?,
        },
        Channel {
            label: "cavity CCW",
            rate: 2.0 * kappa,
            jump: annihilator(&layout, Mode::Ccw)?,
        },
        Channel {
            label: "atom |1>",
            rate: 2.0 * params.gamma_ccw,
            jump: atom_transition(&layout, 0, 1)?,
        },
        Channel {
            label: "atom |2>",
            rate: 2.0 * params.gamma_cw,
            jump: atom_transition(&layout, 0, 2)?,
        },
    ])
}

/// Full two-mode, three-level model.
pub fn build_full_model(params: &SystemParams) -> Result<LindbladModel> {
    let hamiltonian = build_hamiltonian(params)?;
    Ok(LindbladModel {
        layout: hamiltonian.layout(),
        channels: build_collapse_ops(params)?,
        hamiltonian,
    })
}

/// Single-direction model: the driven mode and the atomic transition it
/// couples to. The undriven mode and the other excited level are never
/// populated from the vacuum ⊗ ground state under single-direction input, so
/// every driven-mode observable coincides with the full model.
pub fn reduce_single_direction(params: &SystemParams) -> Result<LindbladModel> {
    params.validate()?;
    let mode = params.driven_mode();
    let layout = SpaceLayout::reduced(params.fock_cutoff, mode)?;
    let e = mode.excited_level() as usize;
    let h = add_mode_terms(Operator::zero(layout), &layout, params, mode)?;
    let hamiltonian = add_drive(h, &layout, params)?;
    let channels = vec![
        Channel {
            label: if mode == Mode::Cw { "cavity CW" } else { "cavity CCW" },
            rate: 2.0 * params.kappa(),
            jump: annihilator(&layout, mode)?,
        },
        Channel {
            label: if mode == Mode::Cw { "atom |2>" } else { "atom |1>" },
            rate: 2.0 * params.atomic_decay(mode),
            jump: atom_transition(&layout, 0, e)?,
        },
    ];
    Ok(LindbladModel {
        layout,
        hamiltonian,
        channels,
    })
}

/// Builds the model selected by `params.model`.
pub fn build_model(params: &SystemParams) -> Result<LindbladModel> {
    match params.model {
        ModelKind::Full => build_full_model(params),
        ModelKind::Reduced => reduce_single_direction(params),
    }
}

/// Vacuum ⊗ ground basis index, the natural initial state.
pub fn vacuum_index(layout: &SpaceLayout) -> usize {
    layout
        .basis_index(0, 0, Level::G)
        .expect("vacuum exists in every layout")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_hamiltonian_without_coupling_or_drive() {
        let p = SystemParams {
            g_ccw: 0.0,
            drive_amplitude: 0.0,
            delta_p: 0.0,
            ..SystemParams::default()
        };
        assert_eq!(build_hamiltonian(&p).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let p = SystemParams {
            g_ccw: 15.09,
            delta_p: 2.0,
            ..SystemParams::default()
        };
        for d in [Direction::Forward, Direction::Backward] {
            let h = build_hamiltonian(&p.clone().with_direction(d)).unwrap();
            assert!(h.hermiticity_error() < 1e-12);
        }
    }

    #[test]
    fn ccw_coupling_matrix_element() {
        let p = SystemParams {
            g_ccw: 15.09,
            ..SystemParams::default()
        };
        let h = build_hamiltonian(&p).unwrap();
        let l = h.layout();
        let row = l.basis_index(0, 1, Level::G).unwrap();
        let col = l.basis_index(0, 0, Level::E1).unwrap();
        assert_eq!(h.get(row, col), C64::new(15.09, 0.0));
        let row = l.basis_index(1, 0, Level::G).unwrap();
        let col = l.basis_index(0, 0, Level::E2).unwrap();
        assert!((h.get(row, col).re - 15.09 / CS_COUPLING_RATIO).abs() < 1e-14);
    }

    #[test]
    fn drive_goes_to_the_selected_mode() {
        let p = SystemParams {
            g_ccw: 0.0,
            ..SystemParams::default()
        };
        let amp = (5.0f64).sqrt() * 0.05;
        for (dir, n_cw, n_ccw) in [(Direction::Forward, 0, 1), (Direction::Backward, 1, 0)] {
            let h = build_hamiltonian(&p.clone().with_direction(dir)).unwrap();
            let l = h.layout();
            let r = l.basis_index(n_cw, n_ccw, Level::G).unwrap();
            let c = l.basis_index(0, 0, Level::G).unwrap();
            assert!((h.get(r, c) - C64::new(0.0, amp)).norm() < 1e-15);
        }
    }

    #[test]
    fn collapse_rates() {
        let ch = build_collapse_ops(&SystemParams::default()).unwrap();
        let rates: Vec<f64> = ch.iter().map(|c| c.rate).collect();
        assert_eq!(rates, vec![6.0, 6.0, 90.0, 2.0]);
        let zero = SystemParams {
            gamma_cw: 0.0,
            gamma_ccw: 0.0,
            kappa_in: 0.0,
            kappa_ex: 1e-300,
            ..SystemParams::default()
        };
        assert!(build_collapse_ops(&zero)
            .unwrap()
            .iter()
            .all(|c| c.rate < 1e-299));
    }

    #[test]
    fn reduced_layout_dimension() {
        let m = reduce_single_direction(&SystemParams::default()).unwrap();
        assert_eq!(m.layout.total_dim(), 10);
        assert_eq!(m.channels.len(), 2);
        assert_eq!(m.channels[1].rate, 90.0);
        let b = reduce_single_direction(
            &SystemParams::default().with_direction(Direction::Backward),
        )
        .unwrap();
        assert_eq!(b.channels[1].rate, 2.0);
        assert_eq!(b.layout.reduced_mode(), Some(Mode::Cw));
    }

    #[test]
    fn forward_mode_override_swaps_driven_mode() {
        let p = SystemParams {
            forward_mode: Mode::Cw,
            ..SystemParams::default()
        };
        assert_eq!(p.driven_mode(), Mode::Cw);
        assert_eq!(p.with_direction(Direction::Backward).driven_mode(), Mode::Ccw);
    }

    #[test]
    fn validation_rejects_bad_rates() {
        let bad = SystemParams {
            gamma_cw: -1.0,
            ..SystemParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = SystemParams {
            kappa_in: 0.0,
            kappa_ex: 0.0,
            ..SystemParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = SystemParams {
            coupling_ratio: 0.0,
            ..SystemParams::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn defaults_order_decay_rates() {
        let p = SystemParams::default();
        assert!(p.gamma_cw < p.kappa_ex && p.kappa_ex < p.gamma_ccw);
        assert!((CS_COUPLING_RATIO - 45f64.sqrt()).abs() < 1e-15);
        assert!((p.g_cw() - 2.25).abs() < 1e-14);
    }
}
