//! Simulation and analysis toolkit for a driven-dissipative chiral cavity-QED
//! system: two counter-propagating whispering-gallery modes (CW, CCW) coupled
//! to a V-type three-level atom, probed through a single waveguide.
//!
//! The crate is organised bottom-up:
//!
//! - [`hilbert`]: truncated Fock ⊗ atom space and sparse operator algebra.
//! - [`model`]: system parameters, rotating-frame Hamiltonian, collapse
//!   channels, and the single-direction reduced model.
//! - [`steadystate`]: Liouvillian superoperator, steady-state solver, RK4
//!   integrator, transmission and equal-time g²(0).
//! - [`effective`]: closed-form 2×2 single-excitation eigenfrequencies,
//!   exceptional points, phase classification, dip-degeneracy coupling.
//! - [`fitting`]: Lorentzian + squared-Lorentzian lineshape fits that
//!   extract eigenmode detunings from transmission spectra.

pub mod effective;
pub mod error;
pub mod fitting;
pub mod hilbert;
pub mod io;
pub mod model;
pub mod sparse;
pub mod steadystate;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use effective::{EffectiveEigen, EffectiveParams, PtPhase};
pub use fitting::{SpectrumFit, SpectrumPoints};
pub use hilbert::{Level, Mode, Operator, SpaceLayout};
pub use model::{Direction, LindbladModel, ModelKind, SystemParams};
pub use steadystate::{DensityMatrix, Liouvillian, Observables};
