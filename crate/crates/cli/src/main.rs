//! `radscf`: energies, Mulliken analysis, qubit-suitability screening,
//! geometry optimization and bond scans from XYZ files.

mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use radscf::analysis::analyze;
use radscf::basis::{assign_basis, BasisSet};
use radscf::geomopt::{
    optimize, optimize_multistart, scan_bond, trajectory_xyz, EnergySurface, OptMethod,
    OptimizerConfig, DEFAULT_NOISE, DEFAULT_RESTARTS, DEFAULT_SEED,
};
use radscf::integrals::build_integral_tables;
use radscf::molsys::{Molecule, XyzDocument};
use radscf::report::to_json;
use radscf::scf::{scf, Method, ScfConfig};
use radscf::screener::{screen_analysis, screen_unconverged, ScreeningThresholds};
use radscf::Error;

use output::{EnergyReport, ErrorReport, OptimizeReport, Report, ScanReport};

#[derive(Parser, Debug)]
#[command(name = "radscf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// SCF energy, orbital energies and <S^2>.
    Energy(Common),
    /// Energy plus Mulliken populations, spin densities and bond orders.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Extra atom pair (1-based) to report a bond order for.
        #[arg(long = "pair", value_parser = parse_pair)]
        pairs: Vec<(usize, usize)>,
    },
    /// Analysis plus the four-criterion suitability report.
    Screen {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        thresholds: ThresholdArgs,
    },
    /// Relax the geometry and write a trajectory.
    Optimize {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opt: OptArgs,
    },
    /// Energies along one interatomic distance.
    Scan {
        #[command(flatten)]
        common: Common,
        /// Atom pair (1-based); the second atom moves.
        #[arg(long, value_parser = parse_pair)]
        coord: (usize, usize),
        /// First distance in bohr.
        #[arg(long)]
        from: f64,
        /// Last distance in bohr.
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Rhf,
    Uhf,
}

#[derive(Args, Debug)]
struct Common {
    /// XYZ file in ångström; `charge=` and `mult=` may appear on the comment line.
    #[arg(long)]
    geometry: PathBuf,
    /// Built-in name or file found via RADSCF_BASIS_PATH.
    #[arg(long, default_value = "sto-3g")]
    basis: String,
    #[arg(long, allow_hyphen_values = true)]
    charge: Option<i32>,
    #[arg(long)]
    mult: Option<u32>,
    #[arg(long, value_enum, default_value = "uhf")]
    method: MethodArg,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    energy_tol: Option<f64>,
    #[arg(long)]
    density_tol: Option<f64>,
    /// DIIS subspace size; below 2 disables DIIS.
    #[arg(long)]
    diis_depth: Option<usize>,
    #[arg(long)]
    level_shift: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long)]
    json: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[arg(long, default_value_t = 2)]
    top_k: usize,
    #[arg(long, default_value_t = 0.7)]
    fraction: f64,
    #[arg(long, default_value_t = 0.3)]
    bond_order_min: f64,
    #[arg(long, default_value_t = 8)]
    min_chain: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OptimizerArg {
    QuasiNewton,
    SteepestDescent,
}

#[derive(Args, Debug)]
struct OptArgs {
    #[arg(long, default_value_t = 5e-3)]
    fd_step: f64,
    #[arg(long, default_value_t = 3e-4)]
    grad_tol: f64,
    #[arg(long, default_value_t = 100)]
    max_steps: usize,
    #[arg(long, value_enum, default_value = "quasi-newton")]
    optimizer: OptimizerArg,
    /// Multi-frame XYZ trajectory path.
    #[arg(long, default_value = "trajectory.xyz")]
    trajectory: PathBuf,
    /// Also relax three randomly perturbed copies and keep the lowest.
    #[arg(long)]
    multistart: bool,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Energy(c) => c,
            Command::Analyze { common, .. }
            | Command::Screen { common, .. }
            | Command::Optimize { common, .. }
            | Command::Scan { common, .. } => common,
        }
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected 'a,b', got '{s}'"))?;
    let idx = |t: &str| -> Result<usize, String> {
        let i: usize = t
            .trim()
            .parse()
            .map_err(|_| format!("bad atom index '{t}'"))?;
        i.checked_sub(1)
            .ok_or_else(|| "atom indices start at 1".to_string())
    };
    Ok((idx(a)?, idx(b)?))
}

impl Common {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }

    fn method(&self) -> Method {
        match self.method {
            MethodArg::Rhf => Method::Rhf,
            MethodArg::Uhf => Method::Uhf,
        }
    }

    fn scf_config(&self) -> radscf::Result<ScfConfig> {
        let mut c = ScfConfig::default();
        if let Some(v) = self.max_iterations {
            c.max_iterations = v;
        }
        if let Some(v) = self.energy_tol {
            c.energy_tol = v;
        }
        if let Some(v) = self.density_tol {
            c.density_rms_tol = v;
        }
        if let Some(v) = self.diis_depth {
            c.diis_depth = v;
        }
        if let Some(v) = self.level_shift {
            c.level_shift = v;
        }
        c.validate()?;
        Ok(c)
    }

    /// Flags override the comment line, which overrides the defaults.
    fn molecule(&self) -> radscf::Result<Molecule> {
        let text = std::fs::read_to_string(&self.geometry)?;
        XyzDocument::parse(&text)?.into_molecule(self.charge, self.mult)
    }
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// so a failed run never leaves a partial file behind.
fn write_atomic(path: &Path, text: &str) -> radscf::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn emit(common: &Common, report: &impl Report) -> radscf::Result<()> {
    let text = match common.format() {
        Format::Json => to_json(report),
        Format::Text => report.to_text(),
    };
    match &common.output {
        Some(path) => write_atomic(path, &text),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Outcome of a command that produced a report but still signals failure.
enum Outcome {
    Done,
    Unconverged { iterations: usize },
}

fn run(cli: &Cli) -> radscf::Result<Outcome> {
    let common = cli.command.common();
    let cfg = common.scf_config()?;
    let m = common.molecule()?;
    let set = BasisSet::load(&common.basis)?;
    let method = common.method();

    match &cli.command {
        Command::Energy(_) | Command::Analyze { .. } | Command::Screen { .. } => {
            let thresholds = match &cli.command {
                Command::Screen { thresholds: t, .. } => {
                    let t = ScreeningThresholds {
                        localization_top_k: t.top_k,
                        localization_fraction: t.fraction,
                        bond_order_min: t.bond_order_min,
                        min_chain_length: t.min_chain,
                        ..ScreeningThresholds::default()
                    };
                    t.validate()?;
                    Some(t)
                }
                _ => None,
            };
            let basis = assign_basis(&m, &set)?;
            let tables = build_integral_tables(&basis, &m);
            let result = scf(&m, &tables, method, &cfg)?;
            let mut report = EnergyReport::new(&m, &set.name, &tables, &result);
            if !result.converged {
                if let Some(t) = &thresholds {
                    report.screening = Some(screen_unconverged(&m, t)?);
                    emit(common, &report)?;
                }
                return Ok(Outcome::Unconverged {
                    iterations: result.iterations,
                });
            }
            if !matches!(cli.command, Command::Energy(_)) {
                let pairs = match &cli.command {
                    Command::Analyze { pairs, .. } => pairs.as_slice(),
                    _ => &[],
                };
                let a = analyze(&result, &tables, &m, &basis, pairs)?;
                if let Some(t) = &thresholds {
                    report.screening = Some(screen_analysis(&m, &a, t)?);
                }
                report.analysis = Some(a.report(&m));
            }
            emit(common, &report)?;
            Ok(Outcome::Done)
        }
        Command::Optimize { opt, .. } => {
            let surface = EnergySurface::new(set.clone(), method, cfg);
            let ocfg = OptimizerConfig {
                fd_step: opt.fd_step,
                grad_tol: opt.grad_tol,
                max_steps: opt.max_steps,
                method: match opt.optimizer {
                    OptimizerArg::QuasiNewton => OptMethod::QuasiNewton,
                    OptimizerArg::SteepestDescent => OptMethod::SteepestDescent,
                },
                ..OptimizerConfig::default()
            };
            let (o, starts) = if opt.multistart {
                let ms = optimize_multistart(
                    &m,
                    &surface,
                    &ocfg,
                    DEFAULT_RESTARTS,
                    DEFAULT_NOISE,
                    DEFAULT_SEED,
                )?;
                (ms.best, Some(ms.energies))
            } else {
                (optimize(&m, &surface, &ocfg)?, None)
            };
            write_atomic(&opt.trajectory, &trajectory_xyz(&o.frames, &o.trace))?;
            let basis = assign_basis(&o.molecule, &set)?;
            let tables = build_integral_tables(&basis, &o.molecule);
            let a = analyze(&o.result, &tables, &o.molecule, &basis, &[])?;
            let mut energy = EnergyReport::new(&o.molecule, &set.name, &tables, &o.result);
            energy.analysis = Some(a.report(&o.molecule));
            let report = OptimizeReport::new(&o, starts, &opt.trajectory, energy);
            emit(common, &report)?;
            Ok(Outcome::Done)
        }
        Command::Scan {
            coord,
            from,
            to,
            steps,
            ..
        } => {
            let surface = EnergySurface::new(set.clone(), method, cfg);
            let points = scan_bond(&m, &surface, *coord, *from, *to, *steps)?;
            emit(
                common,
                &ScanReport::new(&m, &set.name, method, *coord, points),
            )?;
            Ok(Outcome::Done)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ScfNotConverged { .. } => 3,
        Error::Gradient { source, .. } if matches!(**source, Error::ScfNotConverged { .. }) => 3,
        e if e.is_input_error() => 2,
        _ => 4,
    }
}

fn fail(kind: &str, message: String, code: u8) -> ExitCode {
    let report = ErrorReport::new(kind, message, code);
    eprint!("{}", to_json(&report));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.command.common().threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            return fail("threads", e.to_string(), 4);
        }
    }
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Unconverged { iterations }) => {
            let e = Error::ScfNotConverged { iterations };
            fail(e.kind(), e.to_string(), 3)
        }
        Err(e) => fail(e.kind(), e.to_string(), exit_code(&e)),
    }
}
