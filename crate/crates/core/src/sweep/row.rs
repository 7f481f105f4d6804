//! One evaluated grid point.

use crate::capacity::CapacityResult;
use crate::channel::{self, ChannelKind, SpecialChannel, SqueezerPair};
use crate::error::{Error, Result};
use crate::oracle;
use crate::physics::{self, EoParams};
use crate::pipeline::{self, Analysis};

use super::config::{SweepConfig, SystemSpec};

/// Tolerance on `|η + κ_P + κ_E − 1|` at emit time.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;
/// Relative tolerance on the commutator identity at emit time, taken
/// against `max(1, G·G′)`.
pub const COMMUTATOR_TOLERANCE: f64 = 1e-10;
/// Allowed analytic/oracle disagreement in bits.
pub const ORACLE_TOLERANCE_BITS: f64 = 1e-9;

/// Special anti-squeezer settings flagged in slice output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Marker {
    PureLoss,
    Rdp,
    PureAmplification,
}

impl Marker {
    pub fn label(self) -> &'static str {
        match self {
            Marker::PureLoss => "PL/TL",
            Marker::Rdp => "RDP",
            Marker::PureAmplification => "PA/TA",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub curve: String,
    pub cooperativity: f64,
    pub zeta_m: f64,
    pub zeta_a: f64,
    /// Detuning in units of the cavity linewidth.
    pub omega: f64,
    pub temperature: f64,
    pub g: f64,
    pub gprime: f64,
    pub eta: f64,
    pub kappa_p: f64,
    pub kappa_em: f64,
    pub kappa_ea: f64,
    pub tau: f64,
    pub c_p: f64,
    pub c_a: f64,
    pub l_m: f64,
    pub l_a: f64,
    pub kind: ChannelKind,
    pub special: Option<SpecialChannel>,
    pub n_e: Option<f64>,
    pub sigma2: Option<f64>,
    pub q_lb: f64,
    pub q_raw: f64,
    pub clamped: bool,
    pub marker: Option<Marker>,
}

impl SweepRow {
    pub fn kappa_e(&self) -> f64 {
        self.kappa_em + self.kappa_ea
    }

    /// `c_P² − c_A² + l_m² + l_a² − (1 − τ)`.
    pub fn commutator_defect(&self) -> f64 {
        self.c_p * self.c_p - self.c_a * self.c_a + self.l_m * self.l_m + self.l_a * self.l_a
            - (1.0 - self.tau)
    }

    pub fn normalization_defect(&self) -> f64 {
        self.eta + self.kappa_p + self.kappa_em + self.kappa_ea - 1.0
    }

    /// Rechecks the normalization and commutator identities.
    pub fn check_invariants(&self) -> Result<()> {
        if !(self.normalization_defect().abs() <= NORMALIZATION_TOLERANCE) {
            return Err(Error::Invariant(format!(
                "eta + kappa_P + kappa_E - 1 = {:e} at curve '{}', omega = {}",
                self.normalization_defect(),
                self.curve,
                self.omega
            )));
        }
        let scale = (self.g * self.gprime).max(1.0);
        if !(self.commutator_defect().abs() <= COMMUTATOR_TOLERANCE * scale) {
            return Err(Error::Invariant(format!(
                "commutator defect {:e} at G = {}, G' = {}",
                self.commutator_defect(),
                self.g,
                self.gprime
            )));
        }
        Ok(())
    }
}

/// A concrete EO system resolved from a [`SystemSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub params: EoParams<f64>,
    pub cooperativity: f64,
    pub zeta_m: f64,
    pub zeta_a: f64,
    /// Requested on-resonance efficiency, when the point was solved for one.
    pub eta_target: Option<f64>,
    pub kappa: f64,
}

impl OperatingPoint {
    pub fn new(sys: &SystemSpec) -> Result<Self> {
        let cooperativity = match sys.eta {
            Some(eta) => physics::cooperativity_for_efficiency(eta, sys.zeta_m, sys.zeta_a)?,
            None => sys.cooperativity,
        };
        let params = EoParams::from_cooperativity(cooperativity, sys.zeta_m, sys.zeta_a, sys.kappa)?
            .with_frequencies(sys.omega_m, sys.omega_o)
            .with_temperature(sys.temperature);
        params.validate()?;
        Ok(Self {
            params,
            cooperativity,
            zeta_m: sys.zeta_m,
            zeta_a: sys.zeta_a,
            eta_target: sys.eta,
            kappa: sys.kappa,
        })
    }

    /// On-resonance efficiency: the requested value if there is one.
    pub fn resonant_eta(&self) -> Result<f64> {
        match self.eta_target {
            Some(eta) => Ok(eta),
            None => Ok(physics::transfer_coefficients(&self.params, 0.0)?.eta),
        }
    }

    pub fn resonant_kappa_p(&self) -> Result<f64> {
        Ok(physics::transfer_coefficients(&self.params, 0.0)?.kappa_p)
    }
}

/// How the squeezers are set at a grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SqueezerChoice {
    Fixed(SqueezerPair<f64>),
    /// `G′` from the pure-loss condition at the point's own `κ_P(ω)`.
    PureLoss { g: f64 },
}

/// Evaluates one grid point through the analytic pipeline, rechecks the row
/// invariants and, if the config asks for it, the numerical oracle.
pub fn evaluate(
    cfg: &SweepConfig,
    point: &OperatingPoint,
    omega: f64,
    choice: SqueezerChoice,
    curve: &str,
    marker: Option<Marker>,
) -> Result<SweepRow> {
    let detuning = omega * point.kappa;
    let transfer = physics::transfer_coefficients(&point.params, detuning)?;
    let squeezers = match choice {
        SqueezerChoice::Fixed(pair) => pair,
        SqueezerChoice::PureLoss { g } => {
            SqueezerPair::new(g, channel::gprime_pure_loss(g, transfer.kappa_p)?)?
        }
    };
    let occupations = pipeline::occupations(&point.params, cfg.thermal_probe)?;
    let analysis = pipeline::analyze_transfer(&transfer, &squeezers, &occupations, cfg.rdp_tolerance)?;
    if cfg.oracle {
        cross_check(cfg, point, detuning, &squeezers, &analysis.capacity)?;
    }
    let row = build_row(point, omega, curve, marker, &analysis);
    row.check_invariants()?;
    Ok(row)
}

fn cross_check(
    cfg: &SweepConfig,
    point: &OperatingPoint,
    detuning: f64,
    squeezers: &SqueezerPair<f64>,
    analytic: &CapacityResult<f64>,
) -> Result<()> {
    let numeric = oracle::oracle_capacity(
        &point.params,
        detuning,
        squeezers,
        point.params.temperature,
        cfg.thermal_probe,
        cfg.rdp_tolerance,
    )?;
    let agree = (numeric.q_lb.is_infinite() && analytic.q_lb.is_infinite())
        || (numeric.q_lb - analytic.q_lb).abs() <= ORACLE_TOLERANCE_BITS;
    if agree {
        Ok(())
    } else {
        Err(Error::Invariant(format!(
            "oracle disagreement at G = {}, G' = {}, detuning = {detuning}: analytic {} vs numeric {}",
            squeezers.g, squeezers.g_prime, analytic.q_lb, numeric.q_lb
        )))
    }
}

fn build_row(
    point: &OperatingPoint,
    omega: f64,
    curve: &str,
    marker: Option<Marker>,
    a: &Analysis<f64>,
) -> SweepRow {
    SweepRow {
        curve: curve.to_string(),
        cooperativity: point.cooperativity,
        zeta_m: point.zeta_m,
        zeta_a: point.zeta_a,
        omega,
        temperature: point.params.temperature,
        g: a.coefficients.squeezers.g,
        gprime: a.coefficients.squeezers.g_prime,
        eta: a.transfer.eta,
        kappa_p: a.transfer.kappa_p,
        kappa_em: a.transfer.kappa_em,
        kappa_ea: a.transfer.kappa_ea,
        tau: a.channel.tau,
        c_p: a.coefficients.c_p,
        c_a: a.coefficients.c_a,
        l_m: a.coefficients.l_m,
        l_a: a.coefficients.l_a,
        kind: a.channel.kind,
        special: a.channel.special,
        n_e: a.channel.n_e,
        sigma2: a.channel.sigma2,
        q_lb: a.capacity.q_lb,
        q_raw: a.capacity.raw,
        clamped: a.capacity.clamped,
        marker,
    }
}
