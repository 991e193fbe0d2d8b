//! SVG figures from emitted CSV files.

use std::path::Path;
use std::str::FromStr;

use plotters::coord::Shift;
use plotters::prelude::*;

use crate::commands::{BLOCKADE_COLUMNS, MAP_COLUMNS, PHASE_COLUMNS, SPECTRUM_COLUMNS};
use crate::error::{CliError, Result};
use crate::output::CsvData;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    Spectrum,
    Phase,
    Map,
    Blockade,
}

impl FromStr for PlotKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectrum" => Ok(PlotKind::Spectrum),
            "phase" | "phase-diagram" => Ok(PlotKind::Phase),
            "map" => Ok(PlotKind::Map),
            "blockade" => Ok(PlotKind::Blockade),
            other => Err(CliError::usage(format!(
                "unknown plot kind `{other}` (spectrum, phase, map, blockade)"
            ))),
        }
    }
}

impl PlotKind {
    fn columns(self) -> &'static [&'static str] {
        match self {
            PlotKind::Spectrum => SPECTRUM_COLUMNS,
            PlotKind::Phase => PHASE_COLUMNS,
            PlotKind::Map => MAP_COLUMNS,
            PlotKind::Blockade => BLOCKADE_COLUMNS,
        }
    }
}

const SIZE: (u32, u32) = (800, 600);
const PALETTE: [RGBColor; 4] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(148, 103, 189),
];

fn draw_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::io(path, std::io::Error::other(e.to_string()))
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.02 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Reads `csv_path`, checks it has the columns of `kind` and writes an SVG
/// to `out`.
pub fn plot(csv_path: &Path, kind: PlotKind, out: &Path) -> Result<()> {
    let data = CsvData::read(csv_path)?;
    if !data.has(kind.columns()) {
        return Err(CliError::Schema(format!(
            "{} does not look like a {kind:?} table; expected columns {}",
            csv_path.display(),
            kind.columns().join(",")
        )));
    }
    let root = SVGBackend::new(out, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| draw_err(out, e))?;
    match kind {
        PlotKind::Spectrum => spectrum(&data, &root),
        PlotKind::Phase => phase(&data, &root),
        PlotKind::Map => map(&data, &root),
        PlotKind::Blockade => blockade(&data, &root),
    }
    .map_err(|e| draw_err(out, e))?;
    root.present().map_err(|e| draw_err(out, e))
}

type Area<'a> = DrawingArea<SVGBackend<'a>, Shift>;
type DrawResult = std::result::Result<(), Box<dyn std::error::Error>>;

fn spectrum(data: &CsvData, root: &Area) -> DrawResult {
    let x = data.numbers("delta_p")?;
    let y = data.numbers("transmission")?;
    let (x0, x1) = bounds(x.iter().copied());
    let (y0, y1) = bounds(y.iter().copied().chain([0.0, 1.0]));
    let mut chart = ChartBuilder::on(root)
        .caption("transmission spectrum", ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(55)
        .build_cartesian_2d(x0..x1, y0..y1)?;
    chart.configure_mesh().x_desc("delta_p").y_desc("T").draw()?;
    chart.draw_series(LineSeries::new(
        x.into_iter().zip(y).filter(|(a, b)| a.is_finite() && b.is_finite()),
        PALETTE[0].stroke_width(2),
    ))?;
    Ok(())
}

/// Groups rows by the `dir` column, keeping first-seen order.
fn by_direction(data: &CsvData) -> std::result::Result<Vec<(String, Vec<usize>)>, CliError> {
    let dirs = data.strings("dir")?;
    let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
    for (i, d) in dirs.into_iter().enumerate() {
        match groups.iter_mut().find(|(k, _)| *k == d) {
            Some((_, rows)) => rows.push(i),
            None => groups.push((d, vec![i])),
        }
    }
    Ok(groups)
}

fn phase(data: &CsvData, root: &Area) -> DrawResult {
    let g = data.numbers("g_cw")?;
    let ep = data.numbers("re_e_plus")?;
    let em = data.numbers("re_e_minus")?;
    let modes = data.strings("mode")?;
    let (x0, x1) = bounds(g.iter().copied());
    let (y0, y1) = bounds(ep.iter().chain(&em).copied());
    let mut chart = ChartBuilder::on(root)
        .caption("eigenfrequencies", ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(55)
        .build_cartesian_2d(x0..x1, y0..y1)?;
    chart.configure_mesh().x_desc("g_cw").y_desc("Re E").draw()?;
    for (k, (dir, rows)) in by_direction(data)?.into_iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let label = format!("{} ({})", modes[rows[0]], dir);
        for (n, series) in [&ep, &em].into_iter().enumerate() {
            let s = chart.draw_series(LineSeries::new(
                rows.iter().map(|&i| (g[i], series[i])),
                color.stroke_width(2),
            ))?;
            if n == 0 {
                s.label(label.clone())
                    .legend(move |(x, y)| PathElement::new([(x, y), (x + 20, y)], color));
            }
        }
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()?;
    Ok(())
}

fn heat(t: f64, lo: f64, hi: f64) -> RGBColor {
    let s = if hi > lo { ((t - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.5 };
    let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * s).round() as u8;
    RGBColor(mix(68, 253), mix(1, 231), mix(84, 37))
}

/// Sorted distinct finite values.
fn axis(values: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Cell edges around each axis value.
fn half_step(axis: &[f64], i: usize) -> (f64, f64) {
    let left = if i == 0 { axis[1] - axis[0] } else { axis[i] - axis[i - 1] };
    let right = if i + 1 == axis.len() { left } else { axis[i + 1] - axis[i] };
    (axis[i] - 0.5 * left, axis[i] + 0.5 * right)
}

fn map(data: &CsvData, root: &Area) -> DrawResult {
    let g = data.numbers("g_cw")?;
    let dp = data.numbers("delta_p")?;
    let t = data.numbers("transmission")?;
    let kind = data.strings("kind")?;
    let modes = data.strings("mode")?;
    let groups = by_direction(data)?;
    let (tlo, thi) = {
        let b = t.iter().copied().filter(|v| v.is_finite());
        b.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, c), v| (a.min(v), c.max(v)))
    };
    let panels = root.split_evenly((1, groups.len().max(1)));
    for ((dir, rows), area) in groups.iter().zip(panels.iter()) {
        let samples: Vec<usize> = rows.iter().copied().filter(|&i| kind[i] == "sample").collect();
        let gs = axis(&samples.iter().map(|&i| g[i]).collect::<Vec<_>>());
        let ds = axis(&samples.iter().map(|&i| dp[i]).collect::<Vec<_>>());
        if gs.len() < 2 || ds.len() < 2 {
            return Err(format!("map panel `{dir}` needs at least a 2x2 grid").into());
        }
        let (gx0, gx1) = (half_step(&gs, 0).0, half_step(&gs, gs.len() - 1).1);
        let (dy0, dy1) = (half_step(&ds, 0).0, half_step(&ds, ds.len() - 1).1);
        let mut chart = ChartBuilder::on(area)
            .caption(format!("{} ({dir})", modes[rows[0]]), ("sans-serif", 18))
            .margin(10)
            .x_label_area_size(40)
            .y_label_area_size(50)
            .build_cartesian_2d(gx0..gx1, dy0..dy1)?;
        chart
            .configure_mesh()
            .disable_mesh()
            .x_desc("g_cw")
            .y_desc("delta_p")
            .draw()?;
        chart.draw_series(samples.iter().filter(|&&i| t[i].is_finite()).map(|&i| {
            let gi = gs.binary_search_by(|v| v.total_cmp(&g[i])).unwrap_or(0);
            let di = ds.binary_search_by(|v| v.total_cmp(&dp[i])).unwrap_or(0);
            let (x0, x1) = half_step(&gs, gi);
            let (y0, y1) = half_step(&ds, di);
            Rectangle::new([(x0, y0), (x1, y1)], heat(t[i], tlo, thi).filled())
        }))?;
        for &i in rows.iter().filter(|&&i| kind[i] == "tdd") {
            if g[i] >= gx0 && g[i] <= gx1 {
                chart.draw_series(LineSeries::new([(g[i], dy0), (g[i], dy1)], WHITE.stroke_width(2)))?;
            }
        }
    }
    Ok(())
}

fn blockade(data: &CsvData, root: &Area) -> DrawResult {
    let g = data.numbers("g_cw")?;
    let tf = data.numbers("t_forward")?;
    let tb = data.numbers("t_backward")?;
    let g2f = data.numbers("g2_forward")?;
    let g2b = data.numbers("g2_backward")?;
    let (x0, x1) = bounds(g.iter().copied());
    let panels = root.split_evenly((2, 1));

    let (y0, y1) = bounds(tf.iter().chain(&tb).copied());
    let mut top = ChartBuilder::on(&panels[0])
        .caption("transmission", ("sans-serif", 18))
        .margin(10)
        .x_label_area_size(35)
        .y_label_area_size(55)
        .build_cartesian_2d(x0..x1, y0..y1)?;
    top.configure_mesh().x_desc("g_cw").y_desc("T").draw()?;
    for (k, (name, ys)) in [("forward", &tf), ("backward", &tb)].into_iter().enumerate() {
        let color = PALETTE[k];
        top.draw_series(LineSeries::new(
            g.iter().zip(ys.iter()).map(|(&a, &b)| (a, b)).filter(|(_, b)| b.is_finite()),
            color.stroke_width(2),
        ))?
        .label(name)
        .legend(move |(x, y)| PathElement::new([(x, y), (x + 20, y)], color));
    }
    top.configure_series_labels().border_style(BLACK).background_style(WHITE.mix(0.8)).draw()?;

    let positive = |v: &&f64| v.is_finite() && **v > 0.0;
    let lo = g2f.iter().chain(&g2b).filter(positive).fold(1.0f64, |m, &v| m.min(v));
    let hi = g2f.iter().chain(&g2b).filter(positive).fold(1.0f64, |m, &v| m.max(v));
    let mut bottom = ChartBuilder::on(&panels[1])
        .caption("g2(0)", ("sans-serif", 18))
        .margin(10)
        .x_label_area_size(35)
        .y_label_area_size(55)
        .build_cartesian_2d(x0..x1, (0.8 * lo..1.25 * hi).log_scale())?;
    bottom.configure_mesh().x_desc("g_cw").y_desc("g2").draw()?;
    for (k, ys) in [&g2f, &g2b].into_iter().enumerate() {
        bottom.draw_series(LineSeries::new(
            g.iter().zip(ys.iter()).map(|(&a, &b)| (a, b)).filter(|(_, b)| b.is_finite() && *b > 0.0),
            PALETTE[k].stroke_width(2),
        ))?;
    }
    bottom.draw_series(LineSeries::new([(x0, 1.0), (x1, 1.0)], BLACK.mix(0.5)))?;
    Ok(())
}
