//! Steady states and observables of the driven-dissipative model.
//!
//! The primary route is a sparse direct solve of the Liouvillian with one
//! equation replaced by the trace constraint. [`evolve`] integrates the master
//! equation directly in operator form and serves as an independent check.

mod density;
mod integrate;
mod liouvillian;
mod observables;
mod scan;

pub use density::DensityMatrix;
pub use integrate::{evolve, generator, suggested_dt};
pub use liouvillian::{
    build_liouvillian, build_liouvillian_capped, solve_steady_state, solve_steady_state_with,
    unvec, vec, Liouvillian, SolveOptions, DEFAULT_SUPEROPERATOR_CAP,
};
pub use observables::{
    g2_zero, observe, solve_params, steady_state_for, transmission, Observables, SteadyState,
};
pub use scan::{doublet_onset, transmission_curvature};
