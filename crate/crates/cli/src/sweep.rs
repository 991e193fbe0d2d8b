use std::path::PathBuf;

use chiral_cqed::Direction;
use rayon::prelude::*;

use crate::error::{CliError, Result};

/// Evenly spaced axis including both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(CliError::usage(format!("a swept axis needs at least 2 steps, got {steps}")));
        }
        if !(min.is_finite() && max.is_finite()) || max < min {
            return Err(CliError::usage(format!("bad range [{min}, {max}]")));
        }
        Ok(Self { min, max, steps })
    }

    /// `min + i (max − min)/(steps − 1)`, with the last value pinned to `max`.
    pub fn values(&self) -> Vec<f64> {
        let span = self.max - self.min;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + span * i as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Transmission,
    G2,
    Eigenfrequencies,
    FitSplitting,
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub quantity: Quantity,
    pub directions: Vec<Direction>,
    /// Coupling axis in CW units; `g_ccw = coupling_ratio · g_cw`.
    pub g_cw: Range,
    pub delta_p: Option<Range>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
}

/// Evaluates `f` over `items` on a pool of `jobs` workers and returns the
/// results in input order.
pub fn par_map<T, R, F>(jobs: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}
