use std::path::PathBuf;
use std::process::ExitCode;

use chiral_cqed::fitting::{SpectrumFit, SpectrumPoints};
use chiral_cqed::Direction;
use clap::{Args, Parser, Subcommand, ValueEnum};

use chiral_cqed_cli::commands;
use chiral_cqed_cli::config::{RunConfig, CONFIG_ENV};
use chiral_cqed_cli::error::{CliError, Result};
use chiral_cqed_cli::plot::{plot, PlotKind};
use chiral_cqed_cli::sweep::{Quantity, Range, SweepSpec};
use chiral_cqed_cli::validate;

#[derive(Parser)]
#[command(name = "chiral-cqed", version, about = "Chiral cavity-QED transmission and photon statistics")]
struct Cli {
    /// Config file of key=value lines.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Config override, applied after the file (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
    #[arg(long, global = true, value_enum)]
    direction: Option<DirectionArg>,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Backward,
    Both,
}

#[derive(Args)]
struct GAxis {
    #[arg(long, default_value_t = 0.1)]
    g_min: f64,
    #[arg(long, default_value_t = 5.0)]
    g_max: f64,
    #[arg(long)]
    g_steps: Option<usize>,
}

impl GAxis {
    fn range(&self, default_steps: usize) -> Result<Range> {
        Range::new(self.g_min, self.g_max, self.g_steps.unwrap_or(default_steps))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Transmission spectrum of one direction.
    Spectrum {
        /// CW coupling (CCW follows from the ratio); config value when omitted.
        #[arg(long)]
        g_cw: Option<f64>,
        #[arg(long, requires = "delta_max")]
        delta_min: Option<f64>,
        #[arg(long, requires = "delta_min")]
        delta_max: Option<f64>,
        #[arg(long, default_value_t = commands::SPECTRUM_POINTS)]
        delta_steps: usize,
        /// Fit the two-dip lineshape and record it in a header comment.
        #[arg(long)]
        fit: bool,
    },
    /// Eigenfrequencies of the effective model versus coupling.
    PhaseDiagram {
        #[command(flatten)]
        g: GAxis,
        /// Also fit simulated spectra at each coupling.
        #[arg(long)]
        fit: bool,
    },
    /// Transmission over coupling and detuning.
    Map {
        #[command(flatten)]
        g: GAxis,
        #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
        delta_min: f64,
        #[arg(long, default_value_t = 10.0)]
        delta_max: f64,
        #[arg(long, default_value_t = 201)]
        delta_steps: usize,
        #[arg(long, default_value_t = 2)]
        cutoff: usize,
    },
    /// Resonant transmission and g2(0) of both directions versus coupling.
    Blockade {
        #[command(flatten)]
        g: GAxis,
    },
    /// Fit the two-dip lineshape to a spectrum CSV.
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// Starting point: delta_plus,delta_minus,gamma_plus,gamma_minus,c1,c2.
        #[arg(long, allow_negative_numbers = true)]
        init: Option<String>,
    },
    /// Run the acceptance criteria; --out names the JSON summary.
    Validate {
        /// Subset of criteria, e.g. 1,2,7.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
    /// Render an emitted CSV as SVG.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        kind: PlotKind,
    },
}

fn directions(arg: Option<DirectionArg>) -> Vec<Direction> {
    match arg {
        Some(DirectionArg::Forward) => vec![Direction::Forward],
        Some(DirectionArg::Backward) => vec![Direction::Backward],
        Some(DirectionArg::Both) | None => vec![Direction::Forward, Direction::Backward],
    }
}

fn parse_init(s: &str) -> Result<SpectrumFit> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::usage(format!("--init: {e}")))?;
    let [dp, dm, gp, gm, c1, c2] = v[..] else {
        return Err(CliError::usage("--init expects six comma-separated numbers"));
    };
    Ok(SpectrumFit::lineshape((dp, dm), (gp, gm), c1, c2))
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), &cli.sets)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if cli.jobs == 0 {
        return Err(CliError::usage("--jobs must be at least 1"));
    }
    let sweep = |quantity, g: Range, delta_p| SweepSpec {
        quantity,
        directions: directions(cli.direction),
        g_cw: g,
        delta_p,
        out: cli.out.clone(),
        jobs: cli.jobs,
    };
    match cli.command {
        Command::Spectrum {
            g_cw,
            delta_min,
            delta_max,
            delta_steps,
            fit,
        } => {
            let direction = match cli.direction {
                None => cfg.params.direction,
                Some(DirectionArg::Forward) => Direction::Forward,
                Some(DirectionArg::Backward) => Direction::Backward,
                Some(DirectionArg::Both) => {
                    return Err(CliError::usage("spectrum takes a single direction"))
                }
            };
            if let Some(g) = g_cw {
                cfg.params = cfg.params.with_g_cw(g);
                cfg.params.validate()?;
            }
            let grid = match (delta_min, delta_max) {
                (Some(a), Some(b)) => Some(Range::new(a, b, delta_steps)?),
                _ => None,
            };
            let run = commands::cmd_spectrum(&cfg, direction, grid, fit, cli.jobs)?;
            run.table.emit(cli.out.as_deref())
        }
        Command::PhaseDiagram { g, fit } => {
            let quantity = if fit { Quantity::FitSplitting } else { Quantity::Eigenfrequencies };
            let spec = sweep(quantity, g.range(101)?, None);
            commands::cmd_phase_diagram(&cfg, &spec, fit)?.emit(spec.out.as_deref())
        }
        Command::Map {
            g,
            delta_min,
            delta_max,
            delta_steps,
            cutoff,
        } => {
            cfg.params.fock_cutoff = cutoff;
            cfg.params.validate()?;
            let delta = Range::new(delta_min, delta_max, delta_steps)?;
            let spec = sweep(Quantity::Transmission, g.range(201)?, Some(delta));
            commands::cmd_transmission_map(&cfg, &spec)?.emit(spec.out.as_deref())
        }
        Command::Blockade { g } => {
            let spec = sweep(Quantity::G2, g.range(101)?, None);
            commands::cmd_blockade(&cfg, &spec)?.emit(spec.out.as_deref())
        }
        Command::Fit { input, init } => {
            let f = std::fs::File::open(&input).map_err(|e| CliError::io(&input, e))?;
            let points = SpectrumPoints::read_csv(f)?;
            let init = init.as_deref().map(parse_init).transpose()?;
            let (table, _) = commands::cmd_fit(&cfg, &points, init.as_ref())?;
            table.emit(cli.out.as_deref())
        }
        Command::Validate { criteria } => {
            if let Some(bad) = criteria.iter().find(|&&c| !(1..=8).contains(&c)) {
                return Err(CliError::usage(format!("no criterion {bad}; choose from 1-8")));
            }
            let reports = validate::run(&cfg, &criteria, cli.jobs);
            print!("{}", validate::render_table(&reports));
            let summary = cli.out.unwrap_or_else(|| PathBuf::from("validation.json"));
            validate::write_summary(&summary, &cfg, &reports)?;
            let failed: Vec<String> = reports
                .iter()
                .filter(|r| r.status == validate::Status::Fail)
                .map(|r| r.id.to_string())
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Validation(format!("criteria {}", failed.join(", "))))
            }
        }
        Command::Plot { input, kind } => {
            let out = cli.out.unwrap_or_else(|| input.with_extension("svg"));
            plot(&input, kind, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
