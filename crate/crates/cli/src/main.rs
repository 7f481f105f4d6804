//! `eotx`: parameter sweeps for the entanglement-assisted EO transducer.
//!
//! Settings are layered: mode defaults, then `--config` (TOML), then flags.
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 numerical
//! failure (including a failed oracle check).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use eo_transducer::sweep::{self, output, AxisName, AxisSpec, Spacing, SqueezerAxis, SweepConfig, SweepMode};
use eo_transducer::Error;

#[derive(Parser)]
#[command(name = "eotx", version, about = "Capacity sweeps for a squeezing-assisted electro-optic transducer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bare on-resonance capacity against cooperativity
    Resonant {
        #[command(flatten)]
        common: Common,
        /// Coupling ratios (used for both cavities)
        #[arg(long, value_delimiter = ',')]
        zetas: Option<Vec<f64>>,
        /// Temperatures in kelvin
        #[arg(long, value_delimiter = ',')]
        temps: Option<Vec<f64>>,
    },
    /// Capacity over the (G, G') plane on resonance
    Grid {
        #[command(flatten)]
        common: Common,
    },
    /// Cuts through the (G, G') plane with PL/RDP/PA markers
    Slice {
        #[command(flatten)]
        common: Common,
        /// Which squeezer is swept
        #[arg(long, value_enum)]
        vary: Option<Vary>,
        /// Fixed squeezer gains in dB (with --vary gprime)
        #[arg(long, value_delimiter = ',')]
        g_db: Option<Vec<f64>>,
        /// Fixed anti-squeezer gains, linear (with --vary g)
        #[arg(long, value_delimiter = ',')]
        gprime: Option<Vec<f64>>,
    },
    /// Capacity against detuning, bare and assisted
    Bandwidth {
        #[command(flatten)]
        common: Common,
        /// Cooperativities, one curve pair each
        #[arg(long, value_delimiter = ',')]
        cg: Option<Vec<f64>>,
        /// Squeezer gain in dB
        #[arg(long)]
        g_db: Option<f64>,
        /// Fixed anti-squeezer gain; default follows the pure-loss setting per detuning
        #[arg(long)]
        gprime: Option<f64>,
        /// Also write the per-curve bandwidth table here
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Zero-capacity contour in the (G, G') plane
    Boundary {
        #[command(flatten)]
        common: Common,
        /// Bisection tolerance on G'
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Random cross-check of the closed forms against the numerical oracle
    OracleCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        draws: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Vary {
    G,
    Gprime,
}

#[derive(Args)]
struct Common {
    /// TOML file overriding the mode defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV (stdout if omitted)
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Bath temperature in kelvin
    #[arg(long)]
    temp: Option<f64>,
    /// Cooperativity; clears a fixed efficiency
    #[arg(long)]
    cooperativity: Option<f64>,
    #[arg(long)]
    zeta_m: Option<f64>,
    #[arg(long)]
    zeta_a: Option<f64>,
    /// Solve the resonant operating point for this efficiency
    #[arg(long)]
    eta: Option<f64>,
    /// Half-width of the RDP band around tau = 1
    #[arg(long)]
    rdp_tol: Option<f64>,
    /// Let the probe and ancilla inputs carry the microwave thermal occupation
    #[arg(long)]
    thermal_probe: bool,
    /// Cross-check every row against the numerical oracle
    #[arg(long)]
    oracle: bool,
    /// Axis override, NAME:MIN:MAX:POINTS:SPACING (repeatable)
    #[arg(long = "axis", value_parser = parse_axis)]
    axes: Vec<AxisSpec>,
}

fn parse_axis(s: &str) -> Result<AxisSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [name, min, max, points, spacing] = parts[..] else {
        return Err("expected NAME:MIN:MAX:POINTS:SPACING".into());
    };
    let name = match name {
        "cg" => AxisName::Cg,
        "zeta_m" => AxisName::ZetaM,
        "zeta_a" => AxisName::ZetaA,
        "g" => AxisName::G,
        "gprime" => AxisName::GPrime,
        "omega" => AxisName::Omega,
        "temperature" => AxisName::Temperature,
        other => return Err(format!("unknown axis '{other}'")),
    };
    let spacing = match spacing {
        "linear" => Spacing::Linear,
        "log" => Spacing::Log,
        "db" => Spacing::Db,
        other => return Err(format!("unknown spacing '{other}'")),
    };
    let num = |v: &str| v.parse::<f64>().map_err(|e| format!("'{v}': {e}"));
    Ok(AxisSpec::new(
        name,
        num(min)?,
        num(max)?,
        points.parse().map_err(|e| format!("'{points}': {e}"))?,
        spacing,
    ))
}

impl Common {
    fn load(&self, mode: SweepMode) -> Result<SweepConfig, Error> {
        let mut cfg = SweepConfig::defaults(mode);
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            cfg.apply_toml(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        }
        let s = &mut cfg.system;
        if let Some(t) = self.temp {
            s.temperature = t;
        }
        if let Some(c) = self.cooperativity {
            s.cooperativity = c;
            s.eta = None;
        }
        if let Some(z) = self.zeta_m {
            s.zeta_m = z;
        }
        if let Some(z) = self.zeta_a {
            s.zeta_a = z;
        }
        if self.eta.is_some() {
            s.eta = self.eta;
        }
        if let Some(t) = self.rdp_tol {
            cfg.rdp_tolerance = t;
        }
        cfg.thermal_probe |= self.thermal_probe;
        cfg.oracle |= self.oracle;
        for axis in &self.axes {
            cfg.axes.retain(|a| a.name != axis.name);
            cfg.axes.push(axis.clone());
        }
        Ok(cfg)
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Resonant { common, zetas, temps } => {
            let mut cfg = common.load(SweepMode::Resonant)?;
            if let Some(z) = zetas {
                cfg.resonant.zetas = z;
            }
            if let Some(t) = temps {
                cfg.resonant.temperatures = t;
            } else if let Some(t) = common.temp {
                cfg.resonant.temperatures = vec![t];
            }
            cfg.validate()?;
            sweep::run_to_csv(&cfg, open_out(common.out.as_deref())?)
        }
        Command::Grid { common } => {
            let cfg = common.load(SweepMode::Grid)?;
            cfg.validate()?;
            sweep::run_to_csv(&cfg, open_out(common.out.as_deref())?)
        }
        Command::Slice { common, vary, g_db, gprime } => {
            let mut cfg = common.load(SweepMode::Slice)?;
            let vary = match (vary, &g_db, &gprime) {
                (Some(Vary::G), _, _) | (None, None, Some(_)) => Some(SqueezerAxis::G),
                (Some(Vary::Gprime), _, _) => Some(SqueezerAxis::GPrime),
                _ => None,
            };
            if let Some(v) = vary {
                if v != cfg.slice.vary {
                    // Keep an explicit --axis for the new free squeezer.
                    let keep: Vec<AxisSpec> = common
                        .axes
                        .iter()
                        .filter(|a| matches!(a.name, AxisName::G | AxisName::GPrime))
                        .cloned()
                        .collect();
                    cfg.set_slice_vary(v);
                    for axis in keep {
                        cfg.axes.retain(|a| a.name != axis.name);
                        cfg.axes.push(axis);
                    }
                }
            }
            match cfg.slice.vary {
                SqueezerAxis::GPrime => {
                    if gprime.is_some() {
                        return Err(Error::Config("--gprime fixes G' and needs --vary g".into()));
                    }
                    if let Some(v) = g_db {
                        cfg.slice.fixed = v;
                    }
                }
                SqueezerAxis::G => {
                    if g_db.is_some() {
                        return Err(Error::Config("--g-db fixes G and needs --vary gprime".into()));
                    }
                    if let Some(v) = gprime {
                        cfg.slice.fixed = v;
                    }
                }
            }
            cfg.validate()?;
            sweep::run_to_csv(&cfg, open_out(common.out.as_deref())?)
        }
        Command::Bandwidth { common, cg, g_db, gprime, summary } => {
            let mut cfg = common.load(SweepMode::Bandwidth)?;
            if let Some(c) = cg {
                cfg.bandwidth.cooperativities = c;
            }
            if let Some(g) = g_db {
                cfg.bandwidth.g_db = g;
            }
            if gprime.is_some() {
                cfg.bandwidth.fixed_gprime = gprime;
            }
            cfg.validate()?;
            let out = sweep::run_bandwidth(&cfg)?;
            for s in &out.summary {
                info!("{}: bandwidth {} (kappa units), peak Q {}", s.curve, s.bandwidth, s.q_peak);
            }
            output::write_rows(open_out(common.out.as_deref())?, "bandwidth", &out.rows)?;
            if let Some(path) = summary {
                output::write_bandwidth_summary(open_out(Some(&path))?, &out.summary)?;
            }
            Ok(())
        }
        Command::Boundary { common, tolerance } => {
            let mut cfg = common.load(SweepMode::Boundary)?;
            if let Some(t) = tolerance {
                cfg.boundary_tolerance = t;
            }
            cfg.validate()?;
            let points = sweep::run_boundary(&cfg)?;
            let open = points.iter().filter(|p| p.status != sweep::BoundaryStatus::Resolved).count();
            if open > 0 {
                warn!("{open} boundary entries are unresolved or have no sign change");
            }
            output::write_boundary(open_out(common.out.as_deref())?, &points)
        }
        Command::OracleCheck { common, draws, seed } => {
            let mut cfg = common.load(SweepMode::OracleCheck)?;
            if let Some(d) = draws {
                cfg.oracle_check.draws = d;
            }
            if let Some(s) = seed {
                cfg.oracle_check.seed = s;
            }
            cfg.validate()?;
            sweep::run_to_csv(&cfg, open_out(common.out.as_deref())?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eotx: {e}");
            ExitCode::from(match e {
                Error::Config(_) => 2,
                Error::Io(_) => 1,
                _ => 3,
            })
        }
    }
}
