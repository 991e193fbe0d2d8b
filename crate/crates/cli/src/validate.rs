//! Acceptance criteria, one function each.
//!
//! Anchors quoted from the reference device only apply when the configured
//! rates match it; otherwise those checks report `skipped` and the remaining,
//! config-derived checks decide the outcome.

use std::fmt::Write as _;
use std::path::Path;

use chiral_cqed::effective::{
    classify_phase_default, eigenfrequencies, ep_coupling, tdd_coefficients, tdd_coupling,
    EffectiveParams, PtPhase,
};
use chiral_cqed::fitting::{fit_spectrum, splitting, synth_spectrum, SpectrumFit, SpectrumPoints};
use chiral_cqed::model::build_full_model;
use chiral_cqed::steadystate::{
    build_liouvillian, doublet_onset, evolve, steady_state_for, suggested_dt, DensityMatrix,
};
use chiral_cqed::{Direction, Mode, ModelKind, SystemParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{blockade_rows, default_spectrum_grid, mode_label, simulate_spectrum, BlockadeRow};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::sweep::Range;

pub const CRITERIA: [(u8, &str); 8] = [
    (1, "exceptional points"),
    (2, "dip degeneracy"),
    (3, "nonreciprocal splitting"),
    (4, "reciprocal transmission"),
    (5, "blockade windows"),
    (6, "solver soundness"),
    (7, "effective-model identities"),
    (8, "fit round trip"),
];

pub const EP_CW: f64 = 1.0;
pub const EP_CCW: f64 = 21.0;
pub const TDD_CW: (f64, f64) = (1.58, 0.01);
pub const TDD_CCW: (f64, f64) = (31.78, 0.02);
pub const TDD_ONSET_REL_TOL: f64 = 1e-2;
pub const SPLIT_BACKWARD: f64 = 1.84;
pub const SPLIT_REL_TOL: f64 = 0.10;
pub const SPLIT_FORWARD_MAX: f64 = 0.1;
pub const FIT_RMS_OVER_DEPTH: f64 = 1e-2;
pub const RECIPROCITY_TOL: f64 = 1e-3;
pub const BLOCKADE_WINDOWS: [(f64, f64); 2] = [(1.02, 1.20), (1.72, 3.03)];
pub const WINDOW_REL_TOL: f64 = 0.10;
pub const WEAK_DRIVE_REL_TOL: f64 = 1e-2;
pub const SOUNDNESS_SETS: usize = 20;
pub const RESIDUAL_TOL: f64 = 1e-9;
pub const INTEGRATOR_TRACE_DISTANCE: f64 = 1e-6;
pub const REDUCED_VS_FULL: f64 = 1e-6;
pub const IDENTITY_TOL: f64 = 1e-10;
pub const TDD_ROOT_REL_TOL: f64 = 1e-9;
pub const NOISELESS_PARAM_TOL: f64 = 1e-6;
pub const NOISY_DELTA_REL_TOL: f64 = 1e-2;

/// Probe axis of the transmission and blockade sweeps.
pub fn blockade_axis() -> Range {
    Range {
        min: 0.1,
        max: 5.0,
        steps: 101,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!("criterion {} ({}): {}: {}", self.id, self.name, self.status.name(), self.detail)
    }
}

/// Collects individual checks into one verdict.
struct Checks {
    ok: bool,
    any: bool,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self {
            ok: true,
            any: false,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, pass: bool, note: impl Into<String>) {
        self.any = true;
        self.ok &= pass;
        let note = note.into();
        self.notes.push(if pass { note } else { format!("{note} [fail]") });
    }

    fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    fn fail(&mut self, note: impl Into<String>) {
        self.check(false, note);
    }

    fn finish(self, id: u8) -> CriterionReport {
        let status = match (self.any, self.ok) {
            (false, _) => Status::Skipped,
            (true, true) => Status::Pass,
            (true, false) => Status::Fail,
        };
        CriterionReport {
            id,
            name: CRITERIA[id as usize - 1].1,
            status,
            detail: self.notes.join("; "),
        }
    }
}

fn direction_probing(params: &SystemParams, mode: Mode) -> Direction {
    if params.clone().with_direction(Direction::Forward).driven_mode() == mode {
        Direction::Forward
    } else {
        Direction::Backward
    }
}

pub fn criterion_1(cfg: &RunConfig) -> CriterionReport {
    let mut c = Checks::new();
    let p = &cfg.params;
    for mode in [Mode::Cw, Mode::Ccw] {
        let eff = EffectiveParams::from_system(p, mode);
        let ep = ep_coupling(&eff);
        let closed = (eff.kappa - eff.gamma).abs() / 2.0;
        c.check(ep == closed, format!("g_EP,{} = {ep}", mode_label(mode)));
        let at = eigenfrequencies(&eff.with_g(ep));
        match at {
            Ok(e) => {
                let gap = (e.e_plus - e.e_minus).norm();
                c.check(
                    gap <= 1e-6 * eff.gamma_plus(),
                    format!("|E+ - E-| at EP = {gap:.1e}"),
                );
            }
            Err(e) => c.fail(format!("eigenfrequencies at EP: {e}")),
        }
        if ep > 0.0 {
            let below = classify_phase_default(&eff.with_g(0.9 * ep));
            let above = classify_phase_default(&eff.with_g(1.1 * ep));
            let at = classify_phase_default(&eff.with_g(ep));
            c.check(
                matches!(
                    (below, at, above),
                    (Ok(PtPhase::Broken), Ok(PtPhase::Exceptional), Ok(PtPhase::Unbroken))
                ),
                format!("{} phase flips at EP", mode_label(mode)),
            );
        }
    }
    if cfg.is_reference_system() {
        let cw = ep_coupling(&EffectiveParams::from_system(p, Mode::Cw));
        let ccw = ep_coupling(&EffectiveParams::from_system(p, Mode::Ccw));
        c.check(cw == EP_CW && ccw == EP_CCW, format!("reference EPs ({EP_CW}, {EP_CCW})"));
    } else {
        c.note("reference EP values skipped for this configuration");
    }
    c.finish(1)
}

pub fn criterion_2(cfg: &RunConfig) -> CriterionReport {
    let mut c = Checks::new();
    let p = &cfg.params;
    let reference = cfg.is_reference_system();
    for mode in [Mode::Cw, Mode::Ccw] {
        let label = mode_label(mode);
        let eff = EffectiveParams::from_system(p, mode);
        let g = match tdd_coupling(&eff, p.kappa_in, p.kappa_ex) {
            Ok(g) => g,
            Err(e) => {
                c.check(!reference, format!("g_TDD,{label}: {e}"));
                continue;
            }
        };
        if reference {
            let (want, tol) = if mode == Mode::Cw { TDD_CW } else { TDD_CCW };
            c.check((g - want).abs() <= tol, format!("g_TDD,{label} = {g:.4} (reference {want} ± {tol})"));
        } else {
            c.note(format!("g_TDD,{label} = {g:.4}"));
        }
        let weak = SystemParams {
            model: ModelKind::Reduced,
            drive_amplitude: 1e-3,
            ..p.clone()
        };
        let dir = direction_probing(&weak, mode);
        match doublet_onset(&weak, dir, (0.65 * g, 1.5 * g), 1e-5 * g) {
            Ok(onset) => {
                let rel = (onset - g).abs() / g;
                c.check(
                    rel < TDD_ONSET_REL_TOL,
                    format!("simulated {label} onset {onset:.4} ({:.2}% off)", 100.0 * rel),
                );
            }
            Err(e) => c.fail(format!("simulated {label} onset: {e}")),
        }
    }
    c.finish(2)
}

fn fit_at(cfg: &RunConfig, params: &SystemParams, jobs: usize) -> Result<(SpectrumFit, f64)> {
    let grid = default_spectrum_grid(params).values();
    let t = simulate_spectrum(cfg, params, &grid, jobs)?;
    let pts = SpectrumPoints::new(grid, t)?;
    let fit = fit_spectrum(&pts, None)?;
    let depth = pts.transmission().iter().fold(f64::NEG_INFINITY, |m, &t| m.max(1.0 - t));
    Ok((fit, depth))
}

/// Spectra use the reduced model, which criterion 6 checks against the full
/// one.
pub fn criterion_3(cfg: &RunConfig, jobs: usize) -> CriterionReport {
    let mut c = Checks::new();
    if !cfg.is_reference_system() {
        c.note("reference splittings skipped for this configuration");
        return c.finish(3);
    }
    let base = SystemParams {
        model: ModelKind::Reduced,
        delta_p: 0.0,
        ..cfg.params.clone().with_g_cw(SystemParams::default().g_cw())
    };
    for dir in [Direction::Backward, Direction::Forward] {
        let p = base.clone().with_direction(dir);
        let mode = p.driven_mode();
        let eff = EffectiveParams::from_system(&p, mode);
        let theory = (eff.g * eff.g - eff.gamma_minus().powi(2)).max(0.0).sqrt() * 2.0;
        let label = format!("{} ({})", dir.name(), mode_label(mode));
        match fit_at(cfg, &p, jobs) {
            Ok((fit, depth)) => {
                let rel_rms = fit.rms_residual / depth;
                c.check(
                    rel_rms < FIT_RMS_OVER_DEPTH,
                    format!("{label} rms/depth = {:.2}%", 100.0 * rel_rms),
                );
                match splitting(&fit) {
                    Ok(s) => {
                        let pass = match dir {
                            Direction::Backward => (s - SPLIT_BACKWARD).abs() <= SPLIT_REL_TOL * SPLIT_BACKWARD,
                            Direction::Forward => s < SPLIT_FORWARD_MAX,
                        };
                        c.check(
                            pass,
                            format!("{label} fitted splitting {s:.4}, eigenfrequency splitting {theory:.4}"),
                        );
                    }
                    Err(e) => c.fail(format!("{label}: {e}")),
                }
            }
            Err(e) => c.fail(format!("{label}: {e}")),
        }
    }
    c.finish(3)
}

/// Resonant transmission and g² of both directions over [`blockade_axis`].
pub fn blockade_sweep(cfg: &RunConfig, jobs: usize) -> Result<Vec<BlockadeRow>> {
    let cfg = RunConfig {
        params: cfg.params.clone().with_delta_p(0.0),
        ..cfg.clone()
    };
    blockade_rows(&cfg, &blockade_axis(), jobs)
}

pub fn criterion_4(sweep: &Result<Vec<BlockadeRow>>) -> CriterionReport {
    let mut c = Checks::new();
    match sweep {
        Ok(rows) => {
            let (worst, at) = rows
                .iter()
                .map(|r| ((r.t_forward - r.t_backward).abs(), r.g_cw))
                .fold((0.0, f64::NAN), |a, b| if b.0 > a.0 { b } else { a });
            c.check(
                worst < RECIPROCITY_TOL,
                format!("max |T_fwd - T_bwd| = {worst:.3e} at g_cw = {at:.3} over {} points", rows.len()),
            );
        }
        Err(e) => c.fail(format!("sweep failed: {e}")),
    }
    c.finish(4)
}

fn nonreciprocal(g2f: Option<f64>, g2b: Option<f64>) -> bool {
    matches!((g2f, g2b), (Some(f), Some(b)) if f < 1.0 && b > 1.0)
}

fn g2_pair(cfg: &RunConfig, params: &SystemParams, g_cw: f64) -> chiral_cqed::Result<(Option<f64>, Option<f64>)> {
    let one = |dir: Direction| -> chiral_cqed::Result<Option<f64>> {
        let p = params.clone().with_g_cw(g_cw).with_direction(dir);
        match steady_state_for(&p, &cfg.solve)?.g2_output() {
            Ok(v) => Ok(Some(v)),
            Err(chiral_cqed::Error::DarkOutput { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    Ok((one(Direction::Forward)?, one(Direction::Backward)?))
}

/// Intervals of `g_cw` where the forward output is antibunched and the
/// backward output bunched, with edges refined by bisection to `tol`.
pub fn blockade_windows(
    cfg: &RunConfig,
    rows: &[BlockadeRow],
    tol: f64,
) -> chiral_cqed::Result<Vec<(f64, f64)>> {
    let params = SystemParams {
        model: ModelKind::Reduced,
        delta_p: 0.0,
        ..cfg.params.clone()
    };
    let inside = |g: f64| -> chiral_cqed::Result<bool> {
        let (f, b) = g2_pair(cfg, &params, g)?;
        Ok(nonreciprocal(f, b))
    };
    let edge = |mut lo: f64, mut hi: f64, lo_inside: bool| -> chiral_cqed::Result<f64> {
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if inside(mid)? == lo_inside {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };
    let flags: Vec<bool> = rows.iter().map(|r| nonreciprocal(r.g2_forward, r.g2_backward)).collect();
    let mut windows = Vec::new();
    let mut start = None;
    for i in 0..rows.len() {
        if flags[i] && start.is_none() {
            start = Some(if i == 0 { rows[0].g_cw } else { edge(rows[i - 1].g_cw, rows[i].g_cw, false)? });
        }
        if flags[i] && (i + 1 == rows.len() || !flags[i + 1]) {
            let end = if i + 1 == rows.len() {
                rows[i].g_cw
            } else {
                edge(rows[i].g_cw, rows[i + 1].g_cw, true)?
            };
            windows.push((start.take().unwrap_or(rows[i].g_cw), end));
        }
    }
    Ok(windows)
}

/// Blockade windows and the weak-drive check. The drive-halving runs use the
/// reduced model.
pub fn criterion_5(cfg: &RunConfig, sweep: &Result<Vec<BlockadeRow>>) -> CriterionReport {
    let mut c = Checks::new();
    let rows = match sweep {
        Ok(rows) => rows,
        Err(e) => {
            c.fail(format!("sweep failed: {e}"));
            return c.finish(5);
        }
    };
    let windows = match blockade_windows(cfg, rows, 1e-4) {
        Ok(w) => w,
        Err(e) => {
            c.fail(format!("window refinement failed: {e}"));
            return c.finish(5);
        }
    };
    let shown: Vec<String> = windows.iter().map(|(a, b)| format!("({a:.4}, {b:.4})")).collect();
    c.note(format!("windows {}", if shown.is_empty() { "none".into() } else { shown.join(" ") }));

    let reference = cfg.is_reference_system();
    let probe: Vec<(f64, f64)> = if reference {
        for (a, b) in BLOCKADE_WINDOWS {
            let hit = windows
                .iter()
                .find(|(x, y)| (x - a).abs() <= WINDOW_REL_TOL * a && (y - b).abs() <= WINDOW_REL_TOL * b);
            c.check(hit.is_some(), format!("reference ({a}, {b}) within {}%", 100.0 * WINDOW_REL_TOL));
            let bunched = rows
                .iter()
                .filter(|r| r.g_cw > a && r.g_cw < b)
                .all(|r| r.g2_backward.is_some_and(|v| v > 1.0));
            c.check(bunched, format!("g2_bwd > 1 on ({a}, {b})"));
        }
        BLOCKADE_WINDOWS.to_vec()
    } else {
        c.note("reference windows skipped for this configuration");
        windows.clone()
    };

    let mut half = cfg.clone();
    half.params.drive_amplitude *= 0.5;
    let red = SystemParams {
        model: ModelKind::Reduced,
        delta_p: 0.0,
        ..cfg.params.clone()
    };
    let red_half = SystemParams {
        drive_amplitude: 0.5 * red.drive_amplitude,
        ..red.clone()
    };
    let mut worst = (0.0f64, f64::NAN);
    let mut failure = None;
    let mut points = 0;
    for r in rows.iter().filter(|r| probe.iter().any(|&(a, b)| r.g_cw > a && r.g_cw < b)) {
        points += 1;
        match (g2_pair(cfg, &red, r.g_cw), g2_pair(&half, &red_half, r.g_cw)) {
            (Ok(full), Ok(halved)) => {
                for (x, y) in [(full.0, halved.0), (full.1, halved.1)] {
                    if let (Some(x), Some(y)) = (x, y) {
                        let rel = (x - y).abs() / x.abs();
                        if rel > worst.0 {
                            worst = (rel, r.g_cw);
                        }
                    }
                }
            }
            (Err(e), _) | (_, Err(e)) => {
                failure = Some(format!("g2 at g_cw = {}: {e}", r.g_cw));
                break;
            }
        }
    }
    match failure {
        Some(f) => c.fail(f),
        None if points == 0 => c.fail("no sweep points inside a window for the drive check"),
        None => c.check(
            worst.0 < WEAK_DRIVE_REL_TOL,
            format!(
                "eps -> eps/2 changes g2 by up to {:.2e} relative (g_cw = {:.3}, {points} points)",
                worst.0, worst.1
            ),
        ),
    }
    c.finish(5)
}

fn random_params(rng: &mut ChaCha8Rng) -> SystemParams {
    let g = rng.random_range(0.0..4.0);
    SystemParams {
        gamma_cw: rng.random_range(0.5..5.0),
        gamma_ccw: rng.random_range(5.0..60.0),
        kappa_in: rng.random_range(0.2..1.0),
        kappa_ex: rng.random_range(1.0..4.0),
        delta_p: rng.random_range(-3.0..3.0),
        drive_amplitude: rng.random_range(0.01..0.3),
        direction: if rng.random_bool(0.5) { Direction::Forward } else { Direction::Backward },
        forward_mode: if rng.random_bool(0.5) { Mode::Ccw } else { Mode::Cw },
        fock_cutoff: 2,
        model: ModelKind::Full,
        ..SystemParams::default().with_g_cw(g)
    }
}

/// Integrates from the vacuum in chunks until successive snapshots agree to
/// 1e-10.
fn relax(p: &SystemParams) -> chiral_cqed::Result<DensityMatrix> {
    let model = build_full_model(p)?;
    let dt = suggested_dt(&model)?;
    let mut rho = DensityMatrix::vacuum(model.layout);
    for _ in 0..400 {
        let next = evolve(&model, &rho, 2.0, dt)?;
        let change = next.trace_distance(&rho);
        rho = next;
        if change < 1e-10 {
            break;
        }
    }
    Ok(rho)
}

fn soundness_case(cfg: &RunConfig, p: &SystemParams) -> std::result::Result<(f64, f64, f64), String> {
    let s = |e: chiral_cqed::Error| e.to_string();
    let ss = steady_state_for(p, &cfg.solve).map_err(s)?;
    let liou = build_liouvillian(&build_full_model(p).map_err(s)?).map_err(s)?;
    let residual = liou.residual(&ss.rho);
    ss.rho
        .check(cfg.solve.hermiticity_tol, cfg.solve.trace_tol, cfg.solve.positivity_tol)
        .map_err(s)?;
    let late = relax(p).map_err(s)?;
    let distance = ss.rho.trace_distance(&late);
    let full = ss.observables().map_err(s)?;
    let red_params = SystemParams {
        model: ModelKind::Reduced,
        ..p.clone()
    };
    let red = steady_state_for(&red_params, &cfg.solve)
        .and_then(|r| r.observables())
        .map_err(s)?;
    let mut diff = (full.transmission - red.transmission).abs();
    match (full.g2_output, red.g2_output) {
        (Some(a), Some(b)) => diff = diff.max((a - b).abs() / a.max(1.0)),
        (None, None) => {}
        _ => return Err("dark output in only one model".into()),
    }
    Ok((residual, distance, diff))
}

pub fn criterion_6(cfg: &RunConfig) -> CriterionReport {
    let mut c = Checks::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut errors = Vec::new();
    for i in 0..SOUNDNESS_SETS {
        let p = random_params(&mut rng);
        match soundness_case(cfg, &p) {
            Ok((r, d, m)) => worst = (worst.0.max(r), worst.1.max(d), worst.2.max(m)),
            Err(e) => errors.push(format!("set {i}: {e}")),
        }
    }
    c.check(errors.is_empty(), format!("{} of {SOUNDNESS_SETS} sets solved with invariants", SOUNDNESS_SETS - errors.len()));
    for e in errors {
        c.note(e);
    }
    c.check(worst.0 < RESIDUAL_TOL, format!("max residual {:.1e}", worst.0));
    c.check(
        worst.1 < INTEGRATOR_TRACE_DISTANCE,
        format!("max trace distance to integrator {:.1e}", worst.1),
    );
    c.check(worst.2 < REDUCED_VS_FULL, format!("max reduced/full mismatch {:.1e}", worst.2));
    c.finish(6)
}

pub fn criterion_7(cfg: &RunConfig) -> CriterionReport {
    let mut c = Checks::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7);
    let (mut trace_det, mut split, mut root) = (0.0f64, 0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for _ in 0..200 {
        let eff = EffectiveParams {
            direction: Mode::Cw,
            g: rng.random_range(0.0..40.0),
            gamma: rng.random_range(0.0..60.0),
            kappa: rng.random_range(0.1..10.0),
            omega_minus: if rng.random_bool(0.5) { 0.0 } else { rng.random_range(-5.0..5.0) },
        };
        let e = match eigenfrequencies(&eff) {
            Ok(e) => e,
            Err(err) => {
                failures.push(err.to_string());
                continue;
            }
        };
        let h = eff.hamiltonian();
        let tr = h[0][0] + h[1][1];
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let scale = 1.0 + eff.g.max(eff.gamma).max(eff.kappa).max(eff.omega_minus.abs());
        trace_det = trace_det
            .max((e.e_plus + e.e_minus - tr).norm() / scale)
            .max((e.e_plus * e.e_minus - det).norm() / (scale * scale));
        if eff.omega_minus == 0.0 && eff.g > eff.gamma_minus() {
            let want = C64::new(2.0 * (eff.g * eff.g - eff.gamma_minus().powi(2)).sqrt(), 0.0);
            split = split.max((e.e_plus - e.e_minus - want).norm() / scale);
        }
        let kin = rng.random_range(0.05..1.0) * eff.kappa;
        let kex = eff.kappa - kin;
        if let Ok(g) = tdd_coupling(&eff, kin, kex) {
            let (z, x, n) = tdd_coefficients(eff.gamma, kin, kex);
            let terms = [z * g.powi(4), x * g * g, n];
            let mag = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
            root = root.max((terms[0] + terms[1] + terms[2]).abs() / mag);
        }
    }
    c.check(failures.is_empty(), format!("{} evaluation errors", failures.len()));
    c.check(trace_det < IDENTITY_TOL, format!("trace/determinant residual {trace_det:.1e}"));
    c.check(split < 1e-12, format!("splitting-formula residual {split:.1e}"));
    c.check(root < TDD_ROOT_REL_TOL, format!("dip-degeneracy root residual {root:.1e}"));
    c.finish(7)
}

fn fit_grid(width: f64, n: usize) -> Vec<f64> {
    Range {
        min: -width,
        max: width,
        steps: n,
    }
    .values()
}

pub fn criterion_8(cfg: &RunConfig) -> CriterionReport {
    let mut c = Checks::new();
    // Resolved doublets with both terms present. At c2 = 0 exactly the
    // lineshape Jacobian is nearly singular and c2 is only recovered to ~1e-4.
    let cases = [
        SpectrumFit::lineshape((3.0, -3.0), (1.2, 0.9), 30.0, 300.0),
        SpectrumFit::lineshape((2.5, -1.5), (1.0, 1.4), 20.0, 40.0),
        SpectrumFit::lineshape((4.0, -2.5), (1.0, 0.6), 12.0, 5.0),
    ];
    let params = |f: &SpectrumFit| [f.delta_plus, f.delta_minus, f.gamma_plus, f.gamma_minus, f.c1, f.c2];
    let mut worst_clean = 0.0f64;
    let mut worst_noisy = 0.0f64;
    for (i, truth) in cases.iter().enumerate() {
        let grid = fit_grid(10.0, 401);
        let clean = synth_spectrum(truth, &grid, 0.0, 0).and_then(|p| fit_spectrum(&p, None));
        match clean {
            Ok(f) => {
                for (a, b) in params(&f).iter().zip(params(truth)) {
                    worst_clean = worst_clean.max((a - b).abs() / b.abs().max(1.0));
                }
            }
            Err(e) => c.fail(format!("noiseless case {i}: {e}")),
        }
        let noisy = synth_spectrum(truth, &grid, 1e-3, cfg.seed.wrapping_add(i as u64))
            .and_then(|p| fit_spectrum(&p, None));
        match noisy {
            Ok(f) => {
                for (a, b) in [(f.delta_plus, truth.delta_plus), (f.delta_minus, truth.delta_minus)] {
                    worst_noisy = worst_noisy.max((a - b).abs() / b.abs());
                }
            }
            Err(e) => c.fail(format!("noisy case {i}: {e}")),
        }
    }
    c.check(
        worst_clean < NOISELESS_PARAM_TOL,
        format!("noiseless parameter error {worst_clean:.1e}"),
    );
    c.check(
        worst_noisy < NOISY_DELTA_REL_TOL,
        format!("0.1% noise delta error {:.2}%", 100.0 * worst_noisy),
    );
    c.finish(8)
}

/// Runs the selected criteria (all when `only` is empty) in order.
pub fn run(cfg: &RunConfig, only: &[u8], jobs: usize) -> Vec<CriterionReport> {
    let wanted = |id: u8| only.is_empty() || only.contains(&id);
    let sweep = if wanted(4) || wanted(5) {
        Some(blockade_sweep(cfg, jobs))
    } else {
        None
    };
    let mut out = Vec::new();
    for (id, _) in CRITERIA {
        if !wanted(id) {
            continue;
        }
        out.push(match id {
            1 => criterion_1(cfg),
            2 => criterion_2(cfg),
            3 => criterion_3(cfg, jobs),
            4 => criterion_4(sweep.as_ref().expect("sweep computed")),
            5 => criterion_5(cfg, sweep.as_ref().expect("sweep computed")),
            6 => criterion_6(cfg),
            7 => criterion_7(cfg),
            _ => criterion_8(cfg),
        });
    }
    out
}

pub fn render_table(reports: &[CriterionReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(s, "{}", r.line());
    }
    let failed = reports.iter().filter(|r| r.status == Status::Fail).count();
    let _ = writeln!(s, "{} criteria, {failed} failed", reports.len());
    s
}

pub fn summary_json(cfg: &RunConfig, reports: &[CriterionReport]) -> serde_json::Value {
    let params: serde_json::Map<String, serde_json::Value> = cfg
        .to_pairs()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.into()))
        .collect();
    serde_json::json!({
        "tool_version": crate::output::TOOL_VERSION,
        "params": params,
        "passed": reports.iter().all(|r| r.status != Status::Fail),
        "criteria": reports.iter().map(|r| serde_json::json!({
            "id": r.id,
            "name": r.name,
            "status": r.status.name(),
            "detail": r.detail,
        })).collect::<Vec<_>>(),
    })
}

pub fn write_summary(path: &Path, cfg: &RunConfig, reports: &[CriterionReport]) -> Result<()> {
    let text = serde_json::to_string_pretty(&summary_json(cfg, reports))
        .map_err(|e| CliError::Schema(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}
