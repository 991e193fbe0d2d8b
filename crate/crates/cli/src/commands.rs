//! Table producers behind each subcommand.

use chiral_cqed::effective::{eigenfrequencies, tdd_coupling, EffectiveParams};
use chiral_cqed::fitting::{fit_spectrum, splitting, SpectrumFit, SpectrumPoints};
use chiral_cqed::steadystate::{steady_state_for, Observables};
use chiral_cqed::{Direction, Error as CoreError, Mode, SystemParams};

use crate::config::RunConfig;
use crate::error::{AtPoint, CliError, Result};
use crate::output::{Cell, Table};
use crate::sweep::{par_map, Range, SweepSpec};

pub const SPECTRUM_COLUMNS: &[&str] = &["delta_p", "transmission"];
pub const PHASE_COLUMNS: &[&str] = &[
    "g_cw",
    "g_ccw",
    "dir",
    "mode",
    "re_e_plus",
    "re_e_minus",
    "im_e_plus",
    "im_e_minus",
    "fit_delta_plus",
    "fit_delta_minus",
    "fit_status",
];
pub const MAP_COLUMNS: &[&str] = &["g_cw", "g_ccw", "dir", "mode", "delta_p", "transmission", "kind"];
pub const BLOCKADE_COLUMNS: &[&str] = &[
    "g_cw",
    "g_ccw",
    "t_forward",
    "t_backward",
    "g2_forward",
    "g2_backward",
    "flag",
];
pub const FIT_COLUMNS: &[&str] = &[
    "delta_plus",
    "delta_minus",
    "gamma_plus",
    "gamma_minus",
    "c1",
    "c2",
    "rms_residual",
    "converged",
    "splitting",
];

/// Number of detunings in a default spectrum.
pub const SPECTRUM_POINTS: usize = 401;

pub fn mode_label(mode: Mode) -> &'static str {
    match mode {
        Mode::Cw => "cw",
        Mode::Ccw => "ccw",
    }
}

/// `params` at coupling `g_cw` (CCW coupling from the ratio) probed in
/// `direction`.
pub fn at_point(params: &SystemParams, g_cw: f64, direction: Direction) -> SystemParams {
    params.clone().with_g_cw(g_cw).with_direction(direction)
}

pub fn observe(cfg: &RunConfig, params: &SystemParams) -> chiral_cqed::Result<Observables> {
    steady_state_for(params, &cfg.solve)?.observables()
}

/// Symmetric detuning window `|Δ_p| ≤ max(5γ₊, 3g)` of the probed subsystem.
pub fn default_spectrum_grid(params: &SystemParams) -> Range {
    let mode = params.driven_mode();
    let eff = EffectiveParams::from_system(params, mode);
    let w = (5.0 * eff.gamma_plus()).max(3.0 * eff.g);
    Range {
        min: -w,
        max: w,
        steps: SPECTRUM_POINTS,
    }
}

/// Steady-state transmission at each detuning of `grid`.
pub fn simulate_spectrum(
    cfg: &RunConfig,
    params: &SystemParams,
    grid: &[f64],
    jobs: usize,
) -> Result<Vec<f64>> {
    let results = par_map(jobs, grid, |&d| {
        steady_state_for(&params.clone().with_delta_p(d), &cfg.solve)
            .and_then(|s| s.transmission())
            .at(|| format!("steady state at delta_p = {d}"))
    })?;
    results.into_iter().collect()
}

fn fit_summary(fit: &SpectrumFit) -> String {
    format!(
        "fit: delta_plus={} delta_minus={} gamma_plus={} gamma_minus={} c1={} c2={} rms_residual={} converged={}",
        fit.delta_plus,
        fit.delta_minus,
        fit.gamma_plus,
        fit.gamma_minus,
        fit.c1,
        fit.c2,
        fit.rms_residual,
        fit.converged
    )
}

pub struct SpectrumRun {
    pub table: Table,
    pub points: Vec<(f64, f64)>,
    pub fit: Option<SpectrumFit>,
}

pub fn cmd_spectrum(
    cfg: &RunConfig,
    direction: Direction,
    grid: Option<Range>,
    with_fit: bool,
    jobs: usize,
) -> Result<SpectrumRun> {
    let params = cfg.params.clone().with_direction(direction);
    let grid = grid.unwrap_or_else(|| default_spectrum_grid(&params)).values();
    let t = simulate_spectrum(cfg, &params, &grid, jobs)?;
    let resolved = RunConfig {
        params: params.clone(),
        ..cfg.clone()
    };
    let mut table = Table::new(&resolved, "spectrum", SPECTRUM_COLUMNS);
    let mode = params.driven_mode();
    table.comment(format!(
        "dir={} mode={} g_cw={} g_ccw={}",
        direction.name(),
        mode_label(mode),
        params.g_cw(),
        params.g_ccw
    ));
    let fit = if with_fit {
        let pts = SpectrumPoints::new(grid.clone(), t.clone())?;
        let fit = fit_spectrum(&pts, None)?;
        table.comment(fit_summary(&fit));
        Some(fit)
    } else {
        None
    };
    for (&d, &tr) in grid.iter().zip(&t) {
        table.push(vec![d.into(), tr.into()]);
    }
    Ok(SpectrumRun {
        table,
        points: grid.into_iter().zip(t).collect(),
        fit,
    })
}

pub fn cmd_phase_diagram(cfg: &RunConfig, sweep: &SweepSpec, with_fit: bool) -> Result<Table> {
    let tasks: Vec<(f64, Direction)> = sweep
        .g_cw
        .values()
        .into_iter()
        .flat_map(|g| sweep.directions.iter().map(move |&d| (g, d)))
        .collect();
    let fits = if with_fit {
        let per_point = |&(g, d): &(f64, Direction)| -> std::result::Result<SpectrumFit, String> {
            let p = at_point(&cfg.params, g, d);
            let grid = default_spectrum_grid(&p).values();
            let t = simulate_spectrum(cfg, &p, &grid, 1).map_err(|e| e.to_string())?;
            let pts = SpectrumPoints::new(grid, t).map_err(|e| e.to_string())?;
            fit_spectrum(&pts, None).map_err(|e| e.to_string())
        };
        par_map(sweep.jobs, &tasks, per_point)?
            .into_iter()
            .map(Some)
            .collect()
    } else {
        vec![None; tasks.len()]
    };

    let mut table = Table::new(cfg, "phase-diagram", PHASE_COLUMNS);
    for (&(g, d), fit) in tasks.iter().zip(fits) {
        let p = at_point(&cfg.params, g, d);
        let mode = p.driven_mode();
        let e = eigenfrequencies(&EffectiveParams::from_system(&p, mode))?;
        let (fp, fm, status): (Cell, Cell, Cell) = match fit {
            None => (Cell::Empty, Cell::Empty, Cell::Empty),
            Some(Ok(f)) => (
                f.delta_plus.into(),
                f.delta_minus.into(),
                if f.converged { "ok" } else { "unconverged" }.into(),
            ),
            Some(Err(msg)) => (Cell::Empty, Cell::Empty, Cell::Text(format!("error: {msg}").replace(',', ";"))),
        };
        table.push(vec![
            p.g_cw().into(),
            p.g_ccw.into(),
            d.name().into(),
            mode_label(mode).into(),
            e.e_plus.re.into(),
            e.e_minus.re.into(),
            e.e_plus.im.into(),
            e.e_minus.im.into(),
            fp,
            fm,
            status,
        ]);
    }
    Ok(table)
}

/// Coupling of `direction`'s probed mode at which its dip splits, expressed
/// in CW units.
pub fn tdd_marker(params: &SystemParams, direction: Direction) -> chiral_cqed::Result<f64> {
    let p = params.clone().with_direction(direction);
    let mode = p.driven_mode();
    let g = tdd_coupling(&EffectiveParams::from_system(&p, mode), p.kappa_in, p.kappa_ex)?;
    Ok(match mode {
        Mode::Cw => g,
        Mode::Ccw => g / p.coupling_ratio,
    })
}

pub fn cmd_transmission_map(cfg: &RunConfig, sweep: &SweepSpec) -> Result<Table> {
    let delta = sweep
        .delta_p
        .ok_or_else(|| CliError::usage("a transmission map needs a detuning range"))?
        .values();
    let tasks: Vec<(Direction, f64, f64)> = sweep
        .directions
        .iter()
        .flat_map(|&dir| {
            let delta = &delta;
            sweep
                .g_cw
                .values()
                .into_iter()
                .flat_map(move |g| delta.iter().map(move |&dp| (dir, g, dp)))
        })
        .collect();
    let values = par_map(sweep.jobs, &tasks, |&(dir, g, dp)| {
        let p = at_point(&cfg.params, g, dir).with_delta_p(dp);
        steady_state_for(&p, &cfg.solve)
            .and_then(|s| s.transmission())
            .at(|| format!("{} g_cw = {g}, delta_p = {dp}", dir.name()))
    })?;

    let mut table = Table::new(cfg, "map", MAP_COLUMNS);
    for &dir in &sweep.directions {
        let mode = cfg.params.clone().with_direction(dir).driven_mode();
        match tdd_marker(&cfg.params, dir) {
            Ok(g) => table.push(vec![
                g.into(),
                (g * cfg.params.coupling_ratio).into(),
                dir.name().into(),
                mode_label(mode).into(),
                Cell::Empty,
                Cell::Empty,
                "tdd".into(),
            ]),
            Err(e) => table.comment(format!("no tdd marker for {}: {e}", dir.name())),
        }
    }
    for (&(dir, g, dp), t) in tasks.iter().zip(values) {
        let p = at_point(&cfg.params, g, dir);
        table.push(vec![
            p.g_cw().into(),
            p.g_ccw.into(),
            dir.name().into(),
            mode_label(p.driven_mode()).into(),
            dp.into(),
            t?.into(),
            "sample".into(),
        ]);
    }
    Ok(table)
}

/// Transmission and g²(0) of one direction; `None` for g² marks a dark output.
pub fn blockade_point(
    cfg: &RunConfig,
    g_cw: f64,
    direction: Direction,
) -> Result<(f64, Option<f64>)> {
    let p = at_point(&cfg.params, g_cw, direction);
    let s = steady_state_for(&p, &cfg.solve).at(|| format!("{} g_cw = {g_cw}", direction.name()))?;
    let t = s.transmission()?;
    let g2 = match s.g2_output() {
        Ok(v) => Some(v),
        Err(CoreError::DarkOutput { .. }) => None,
        Err(e) => {
            return Err(CliError::NumericalAt {
                context: format!("{} g_cw = {g_cw}", direction.name()),
                source: e,
            })
        }
    };
    Ok((t, g2))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockadeRow {
    pub g_cw: f64,
    pub g_ccw: f64,
    pub t_forward: f64,
    pub t_backward: f64,
    pub g2_forward: Option<f64>,
    pub g2_backward: Option<f64>,
}

pub fn blockade_rows(cfg: &RunConfig, g_axis: &Range, jobs: usize) -> Result<Vec<BlockadeRow>> {
    let tasks: Vec<(f64, Direction)> = g_axis
        .values()
        .into_iter()
        .flat_map(|g| [(g, Direction::Forward), (g, Direction::Backward)])
        .collect();
    let mut results = par_map(jobs, &tasks, |&(g, d)| blockade_point(cfg, g, d))?.into_iter();
    let mut rows = Vec::new();
    for g in g_axis.values() {
        let (Some(fwd), Some(bwd)) = (results.next(), results.next()) else {
            unreachable!("one forward and one backward result per coupling")
        };
        let ((t_forward, g2_forward), (t_backward, g2_backward)) = (fwd?, bwd?);
        let p = cfg.params.clone().with_g_cw(g);
        rows.push(BlockadeRow {
            g_cw: p.g_cw(),
            g_ccw: p.g_ccw,
            t_forward,
            t_backward,
            g2_forward,
            g2_backward,
        });
    }
    Ok(rows)
}

pub fn cmd_blockade(cfg: &RunConfig, sweep: &SweepSpec) -> Result<Table> {
    let rows = blockade_rows(cfg, &sweep.g_cw, sweep.jobs)?;
    let mut table = Table::new(cfg, "blockade", BLOCKADE_COLUMNS);
    table.comment(format!("delta_p={}", cfg.params.delta_p));
    for r in rows {
        let flag = match (r.g2_forward, r.g2_backward) {
            (Some(_), Some(_)) => "ok",
            (None, Some(_)) => "dark_forward",
            (Some(_), None) => "dark_backward",
            (None, None) => "dark_both",
        };
        table.push(vec![
            r.g_cw.into(),
            r.g_ccw.into(),
            r.t_forward.into(),
            r.t_backward.into(),
            r.g2_forward.into(),
            r.g2_backward.into(),
            flag.into(),
        ]);
    }
    Ok(table)
}

pub fn cmd_fit(cfg: &RunConfig, points: &SpectrumPoints, init: Option<&SpectrumFit>) -> Result<(Table, SpectrumFit)> {
    let fit = fit_spectrum(points, init)?;
    let mut table = Table::new(cfg, "fit", FIT_COLUMNS);
    table.push(vec![
        fit.delta_plus.into(),
        fit.delta_minus.into(),
        fit.gamma_plus.into(),
        fit.gamma_minus.into(),
        fit.c1.into(),
        fit.c2.into(),
        fit.rms_residual.into(),
        if fit.converged { "true" } else { "false" }.into(),
        splitting(&fit).ok().into(),
    ]);
    Ok((table, fit))
}
