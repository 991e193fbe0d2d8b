//! Command-line front end for the chiral cavity-QED solver: configuration,
//! sweeps, CSV output, SVG plots and the acceptance checks.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod sweep;
pub mod validate;
