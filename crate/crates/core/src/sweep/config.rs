//! Sweep configuration: per-mode defaults, TOML overrides, validation.
//!
//! The file format is TOML. Every section and key is optional; anything left
//! out keeps the default of the selected mode. Unknown keys are rejected.
//!
//! ```toml
//! [system]
//! cooperativity = 0.2      # C_g, used when `eta` is absent
//! zeta_m = 0.999
//! zeta_a = 0.8
//! eta = 0.1                # optional: solve the resonant point for this η
//! kappa = 6.283185307179586e6
//! omega_m = 6.283185307179586e10
//! omega_o = 1.8849555921538759e15
//! temperature = 0.0
//!
//! [channel]
//! rdp_tol = 1e-9
//! thermal_probe = false
//! oracle = false
//!
//! [[axis]]
//! name = "gprime"          # cg | zeta_m | zeta_a | g | gprime | omega | temperature
//! min = 1.0
//! max = 20.0
//! points = 201
//! spacing = "linear"       # linear | log | db (db: g and gprime only)
//!
//! [resonant]
//! zetas = [1.0, 0.95, 0.9]
//! temperatures = [0.0, 0.01, 0.3]
//!
//! [slice]
//! vary = "gprime"          # the free squeezer; the other is fixed
//! fixed = [20.0]           # G in dB when vary = "gprime", G' when vary = "g"
//!
//! [bandwidth]
//! cooperativities = [0.2, 0.5, 1.0]
//! g_db = 20.0
//! fixed_gprime = 5.0       # optional: fixed G' instead of the per-ω pure-loss setting
//!
//! [boundary]
//! tolerance = 1e-10
//!
//! [oracle_check]
//! draws = 1000
//! seed = 7
//! ```

use std::fmt;

use serde::Deserialize;

use crate::channel::DEFAULT_RDP_TOLERANCE;
use crate::error::{Error, Result};
use crate::physics::{DEFAULT_MICROWAVE_FREQUENCY, DEFAULT_OPTICAL_FREQUENCY};

use super::axis::{AxisName, AxisSpec, Spacing};

/// Default grid resolution per axis.
pub const DEFAULT_POINTS: usize = 201;

/// Default cavity linewidth, `2π × 1 MHz`. Only ratios to it enter the sweeps.
pub const DEFAULT_KAPPA: f64 = 2.0 * std::f64::consts::PI * 1.0e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepMode {
    Resonant,
    Grid,
    Slice,
    Bandwidth,
    Boundary,
    OracleCheck,
}

impl SweepMode {
    pub fn name(self) -> &'static str {
        match self {
            SweepMode::Resonant => "resonant",
            SweepMode::Grid => "grid",
            SweepMode::Slice => "slice",
            SweepMode::Bandwidth => "bandwidth",
            SweepMode::Boundary => "boundary",
            SweepMode::OracleCheck => "oracle-check",
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The EO system a sweep runs on.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub cooperativity: f64,
    pub zeta_m: f64,
    pub zeta_a: f64,
    /// When set, the on-resonance operating point is solved so that `η`
    /// equals this value (cooperativity root at or below one).
    pub eta: Option<f64>,
    pub kappa: f64,
    pub omega_m: f64,
    pub omega_o: f64,
    pub temperature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezerAxis {
    G,
    GPrime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceSpec {
    pub vary: SqueezerAxis,
    /// Fixed values of the other squeezer: G in dB, or G′ linear.
    pub fixed: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthSpec {
    pub cooperativities: Vec<f64>,
    pub g_db: f64,
    pub fixed_gprime: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonantSpec {
    pub zetas: Vec<f64>,
    pub temperatures: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheckSpec {
    pub draws: usize,
    pub seed: u64,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: SweepMode,
    pub system: SystemSpec,
    pub rdp_tolerance: f64,
    pub thermal_probe: bool,
    /// Re-derive every row through the numerical oracle.
    pub oracle: bool,
    pub axes: Vec<AxisSpec>,
    pub resonant: ResonantSpec,
    pub slice: SliceSpec,
    pub bandwidth: BandwidthSpec,
    pub boundary_tolerance: f64,
    pub oracle_check: OracleCheckSpec,
}

impl SweepConfig {
    /// Defaults reproducing the figure each mode is built for.
    pub fn defaults(mode: SweepMode) -> Self {
        let fixed_eta = matches!(mode, SweepMode::Grid | SweepMode::Slice | SweepMode::Boundary);
        let (zeta_m, zeta_a) = match mode {
            SweepMode::Bandwidth => (0.999, 0.8),
            _ => (1.0, 1.0),
        };
        let axes = match mode {
            SweepMode::Resonant => vec![AxisSpec::new(AxisName::Cg, 0.01, 100.0, DEFAULT_POINTS, Spacing::Log)],
            SweepMode::Grid | SweepMode::Boundary => vec![
                AxisSpec::new(AxisName::G, 0.0, 30.0, DEFAULT_POINTS, Spacing::Db),
                AxisSpec::new(AxisName::GPrime, 1.0, 20.0, DEFAULT_POINTS, Spacing::Linear),
            ],
            SweepMode::Slice => vec![AxisSpec::new(AxisName::GPrime, 1.0, 20.0, DEFAULT_POINTS, Spacing::Linear)],
            SweepMode::Bandwidth => vec![AxisSpec::new(AxisName::Omega, -3.0, 3.0, DEFAULT_POINTS, Spacing::Linear)],
            SweepMode::OracleCheck => Vec::new(),
        };
        Self {
            mode,
            system: SystemSpec {
                cooperativity: 1.0,
                zeta_m,
                zeta_a,
                eta: fixed_eta.then_some(0.1),
                kappa: DEFAULT_KAPPA,
                omega_m: DEFAULT_MICROWAVE_FREQUENCY,
                omega_o: DEFAULT_OPTICAL_FREQUENCY,
                temperature: 0.0,
            },
            rdp_tolerance: DEFAULT_RDP_TOLERANCE,
            thermal_probe: false,
            oracle: false,
            axes,
            resonant: ResonantSpec {
                zetas: vec![1.0, 0.95, 0.9],
                temperatures: vec![0.0, 0.01, 0.3],
            },
            slice: SliceSpec {
                vary: SqueezerAxis::GPrime,
                fixed: vec![20.0],
            },
            bandwidth: BandwidthSpec {
                cooperativities: vec![0.2, 0.5, 1.0],
                g_db: 20.0,
                fixed_gprime: None,
            },
            boundary_tolerance: 1e-10,
            oracle_check: OracleCheckSpec { draws: 1000, seed: 7 },
        }
    }

    /// Defaults of `mode` overridden by a TOML document.
    pub fn from_toml(mode: SweepMode, text: &str) -> Result<Self> {
        let mut cfg = Self::defaults(mode);
        cfg.apply_toml(text)?;
        Ok(cfg)
    }

    pub fn apply_toml(&mut self, text: &str) -> Result<()> {
        let file: ConfigFile =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
        file.apply(self)?;
        self.validate()
    }

    pub fn axis(&self, name: AxisName) -> Option<&AxisSpec> {
        self.axes.iter().find(|a| a.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.system;
        positive("system.kappa", s.kappa)?;
        positive("system.omega_m", s.omega_m)?;
        positive("system.omega_o", s.omega_o)?;
        non_negative("system.cooperativity", s.cooperativity)?;
        non_negative("system.temperature", s.temperature)?;
        unit_interval("system.zeta_m", s.zeta_m)?;
        unit_interval("system.zeta_a", s.zeta_a)?;
        if let Some(eta) = s.eta {
            if !(eta > 0.0 && eta <= s.zeta_m * s.zeta_a) {
                return config_err(format!(
                    "system.eta = {eta} must lie in (0, zeta_m*zeta_a = {}]",
                    s.zeta_m * s.zeta_a
                ));
            }
        }
        positive("channel.rdp_tol", self.rdp_tolerance)?;
        positive("boundary.tolerance", self.boundary_tolerance)?;

        for (i, axis) in self.axes.iter().enumerate() {
            axis.validate().map_err(|e| Error::Config(format!("axis[{i}]: {e}")))?;
            if self.axes[..i].iter().any(|a| a.name == axis.name) {
                return config_err(format!("axis[{i}]: duplicate axis '{}'", axis.name));
            }
        }
        let required: &[AxisName] = match self.mode {
            SweepMode::Resonant => &[AxisName::Cg],
            SweepMode::Grid | SweepMode::Boundary => &[AxisName::G, AxisName::GPrime],
            SweepMode::Slice => match self.slice.vary {
                SqueezerAxis::G => &[AxisName::G],
                SqueezerAxis::GPrime => &[AxisName::GPrime],
            },
            SweepMode::Bandwidth => &[AxisName::Omega],
            SweepMode::OracleCheck => &[],
        };
        for name in required {
            if self.axis(*name).is_none() {
                return config_err(format!("mode '{}' needs an axis named '{name}'", self.mode));
            }
        }
        let optional = self.optional_axes();
        for axis in &self.axes {
            if !required.contains(&axis.name) && !optional.contains(&axis.name) {
                return config_err(format!(
                    "axis '{}' is not swept in mode '{}' (allowed: {})",
                    axis.name,
                    self.mode,
                    required
                        .iter()
                        .chain(optional.iter())
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
            }
        }
        if s.eta.is_some() && self.axis(AxisName::Cg).is_some() && self.mode != SweepMode::Resonant {
            return config_err("a cg axis conflicts with system.eta; drop one of them");
        }
        if self.mode == SweepMode::Bandwidth && s.eta.is_some() {
            return config_err("system.eta is not used in bandwidth mode; set bandwidth.cooperativities");
        }

        match self.mode {
            SweepMode::Resonant => {
                nonempty("resonant.zetas", &self.resonant.zetas)?;
                nonempty("resonant.temperatures", &self.resonant.temperatures)?;
                for z in &self.resonant.zetas {
                    unit_interval("resonant.zetas", *z)?;
                }
                for t in &self.resonant.temperatures {
                    non_negative("resonant.temperatures", *t)?;
                }
            }
            SweepMode::Slice => {
                nonempty("slice.fixed", &self.slice.fixed)?;
                for v in &self.slice.fixed {
                    match self.slice.vary {
                        SqueezerAxis::GPrime => non_negative("slice.fixed (G in dB)", *v)?,
                        SqueezerAxis::G if *v < 1.0 => {
                            return config_err(format!("slice.fixed: G' must be >= 1, got {v}"))
                        }
                        SqueezerAxis::G => {}
                    }
                }
            }
            SweepMode::Bandwidth => {
                nonempty("bandwidth.cooperativities", &self.bandwidth.cooperativities)?;
                for c in &self.bandwidth.cooperativities {
                    non_negative("bandwidth.cooperativities", *c)?;
                }
                non_negative("bandwidth.g_db", self.bandwidth.g_db)?;
                if let Some(gp) = self.bandwidth.fixed_gprime {
                    if !(gp >= 1.0) {
                        return config_err(format!("bandwidth.fixed_gprime must be >= 1, got {gp}"));
                    }
                }
            }
            SweepMode::OracleCheck if self.oracle_check.draws == 0 => {
                return config_err("oracle_check.draws must be > 0");
            }
            _ => {}
        }
        Ok(())
    }
}

impl SweepConfig {
    /// Outer axes a mode accepts on top of its required ones. Each point of
    /// their product is a separate operating point (curve).
    pub fn optional_axes(&self) -> &'static [AxisName] {
        match self.mode {
            SweepMode::Grid | SweepMode::Slice | SweepMode::Boundary => {
                &[AxisName::Cg, AxisName::ZetaM, AxisName::ZetaA, AxisName::Temperature]
            }
            SweepMode::Bandwidth => &[AxisName::ZetaM, AxisName::ZetaA, AxisName::Temperature],
            SweepMode::Resonant | SweepMode::OracleCheck => &[],
        }
    }
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        config_err(format!("{field} must be positive and finite, got {v}"))
    }
}

fn non_negative(field: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        config_err(format!("{field} must be >= 0, got {v}"))
    }
}

fn unit_interval(field: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        config_err(format!("{field} must lie in [0, 1], got {v}"))
    }
}

fn nonempty(field: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        config_err(format!("{field} must not be empty"))
    } else {
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    system: Option<SystemSection>,
    channel: Option<ChannelSection>,
    axis: Option<Vec<AxisSpec>>,
    resonant: Option<ResonantSection>,
    slice: Option<SliceSection>,
    bandwidth: Option<BandwidthSection>,
    boundary: Option<BoundarySection>,
    oracle_check: Option<OracleCheckSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemSection {
    cooperativity: Option<f64>,
    zeta_m: Option<f64>,
    zeta_a: Option<f64>,
    eta: Option<f64>,
    kappa: Option<f64>,
    omega_m: Option<f64>,
    omega_o: Option<f64>,
    temperature: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelSection {
    rdp_tol: Option<f64>,
    thermal_probe: Option<bool>,
    oracle: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResonantSection {
    zetas: Option<Vec<f64>>,
    temperatures: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SliceSection {
    vary: Option<VaryName>,
    fixed: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum VaryName {
    G,
    Gprime,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BandwidthSection {
    cooperativities: Option<Vec<f64>>,
    g_db: Option<f64>,
    fixed_gprime: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundarySection {
    tolerance: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleCheckSection {
    draws: Option<usize>,
    seed: Option<u64>,
}

macro_rules! set {
    ($dst:expr, $src:expr) => {
        if let Some(v) = $src {
            $dst = v;
        }
    };
}

impl ConfigFile {
    fn apply(self, cfg: &mut SweepConfig) -> Result<()> {
        if let Some(s) = self.system {
            set!(cfg.system.cooperativity, s.cooperativity);
            set!(cfg.system.zeta_m, s.zeta_m);
            set!(cfg.system.zeta_a, s.zeta_a);
            set!(cfg.system.kappa, s.kappa);
            set!(cfg.system.omega_m, s.omega_m);
            set!(cfg.system.omega_o, s.omega_o);
            set!(cfg.system.temperature, s.temperature);
            if s.eta.is_some() {
                cfg.system.eta = s.eta;
            } else if s.cooperativity.is_some() {
                // An explicit cooperativity switches off the fixed-η default.
                cfg.system.eta = None;
            }
        }
        if let Some(c) = self.channel {
            set!(cfg.rdp_tolerance, c.rdp_tol);
            set!(cfg.thermal_probe, c.thermal_probe);
            set!(cfg.oracle, c.oracle);
        }
        if let Some(axes) = self.axis {
            // Listed axes replace the defaults with the same name.
            for axis in axes {
                cfg.axes.retain(|a| a.name != axis.name);
                cfg.axes.push(axis);
            }
        }
        if let Some(r) = self.resonant {
            set!(cfg.resonant.zetas, r.zetas);
            set!(cfg.resonant.temperatures, r.temperatures);
        }
        if let Some(s) = self.slice {
            if let Some(v) = s.vary {
                let vary = match v {
                    VaryName::G => SqueezerAxis::G,
                    VaryName::Gprime => SqueezerAxis::GPrime,
                };
                if vary != cfg.slice.vary {
                    cfg.set_slice_vary(vary);
                }
            }
            set!(cfg.slice.fixed, s.fixed);
        }
        if let Some(b) = self.bandwidth {
            set!(cfg.bandwidth.cooperativities, b.cooperativities);
            set!(cfg.bandwidth.g_db, b.g_db);
            if b.fixed_gprime.is_some() {
                cfg.bandwidth.fixed_gprime = b.fixed_gprime;
            }
        }
        if let Some(b) = self.boundary {
            set!(cfg.boundary_tolerance, b.tolerance);
        }
        if let Some(o) = self.oracle_check {
            set!(cfg.oracle_check.draws, o.draws);
            set!(cfg.oracle_check.seed, o.seed);
        }
        Ok(())
    }
}

impl SweepConfig {
    /// Switches the free squeezer of a slice and swaps in that axis's default
    /// (the G′-fixed default reproduces the three-curve figure, G′ ∈ {7, 10, 13}).
    pub fn set_slice_vary(&mut self, vary: SqueezerAxis) {
        self.slice.vary = vary;
        self.axes.retain(|a| !matches!(a.name, AxisName::G | AxisName::GPrime));
        match vary {
            SqueezerAxis::G => {
                self.axes.push(AxisSpec::new(AxisName::G, 0.0, 30.0, DEFAULT_POINTS, Spacing::Db));
                self.slice.fixed = vec![7.0, 10.0, 13.0];
            }
            SqueezerAxis::GPrime => {
                self.axes
                    .push(AxisSpec::new(AxisName::GPrime, 1.0, 20.0, DEFAULT_POINTS, Spacing::Linear));
                self.slice.fixed = vec![20.0];
            }
        }
    }
}
