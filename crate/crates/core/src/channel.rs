//! Squeezer composition and Gaussian-channel classification.
//!
//! The probe `P0` and ancilla `A0` are entangled by `S(G)`; the squeezed probe
//! drives the EO converter; the converted output and the ancilla are then
//! recombined by `S†(G′)`. The final output is
//!
//! ```text
//! out = s·S_in + c_P·P0 + c_A·A0† + l_m·E_m + l_a·E_a
//! ```
//!
//! with real coefficients built from the transfer magnitudes. The effective
//! gain is `τ = s² = G′η`; `τ < 1` is a generalized loss channel, `τ > 1` a
//! generalized amplifier and `τ = 1` a random-displacement channel.

use crate::error::{domain, Error, Result};
use crate::physics::TransferCoefficients;
use crate::Real;

/// Default half-width of the band around `τ = 1` classified as RDP.
pub const DEFAULT_RDP_TOLERANCE: f64 = 1e-9;

/// Half-width of the band around `τ = 1` in which the branch formulas lose
/// precision and are cross-checked against the RDP limit.
pub const NEAR_BOUNDARY_BAND: f64 = 1e-6;

/// Relative size below which an eliminated noise coefficient counts as zero.
const ELIMINATION_TOLERANCE: f64 = 1e-9;

/// Converts a squeezer strength in dB (`10 log₁₀ G`) to a linear gain.
pub fn gain_from_db<T: Real>(value_db: T) -> Result<T> {
    if !(value_db >= T::zero()) || !value_db.is_finite() {
        return domain(format!("squeezer strength must be >= 0 dB, got {value_db}"));
    }
    Ok(T::lit(10.0).powf(value_db / T::lit(10.0)))
}

pub fn gain_to_db<T: Real>(gain: T) -> T {
    T::lit(10.0) * gain.log10()
}

/// Squeezer `S(G)` before the converter and anti-squeezer `S†(G′)` after it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezerPair<T> {
    pub g: T,
    pub g_prime: T,
}

impl<T: Real> SqueezerPair<T> {
    pub fn new(g: T, g_prime: T) -> Result<Self> {
        if !(g >= T::one()) || !g.is_finite() {
            return domain(format!("squeezer gain G must be >= 1, got {g}"));
        }
        if !(g_prime >= T::one()) || !g_prime.is_finite() {
            return domain(format!("anti-squeezer gain G' must be >= 1, got {g_prime}"));
        }
        Ok(Self { g, g_prime })
    }

    /// No squeezing: the bare converter.
    pub fn identity() -> Self {
        Self {
            g: T::one(),
            g_prime: T::one(),
        }
    }
}

/// Input occupations (photons) of the noise ports.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PortOccupations<T> {
    pub n_p0: T,
    pub n_a0: T,
    pub n_em: T,
    pub n_ea: T,
}

impl<T: Real> PortOccupations<T> {
    pub fn vacuum() -> Self {
        Self {
            n_p0: T::zero(),
            n_a0: T::zero(),
            n_em: T::zero(),
            n_ea: T::zero(),
        }
    }

    /// Loss baths at their thermal occupations. Probe and ancilla stay in
    /// vacuum unless `thermal_probe` is set, in which case they share the
    /// microwave bath occupation.
    pub fn from_baths(n_m: T, n_a: T, thermal_probe: bool) -> Self {
        let probe = if thermal_probe { n_m } else { T::zero() };
        Self {
            n_p0: probe,
            n_a0: probe,
            n_em: n_m,
            n_ea: n_a,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [
            ("n_p0", self.n_p0),
            ("n_a0", self.n_a0),
            ("n_em", self.n_em),
            ("n_ea", self.n_ea),
        ] {
            if !(n >= T::zero()) || !n.is_finite() {
                return domain(format!("occupation {name} must be >= 0, got {n}"));
            }
        }
        Ok(())
    }
}

/// Real coefficients of the composed output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseCoefficients<T> {
    /// Signal amplitude `√(ηG′)`.
    pub s: T,
    /// Probe `P0` coefficient.
    pub c_p: T,
    /// Ancilla `A0†` coefficient.
    pub c_a: T,
    /// Microwave loss-bath amplitude `√(κ_Em G′)`.
    pub l_m: T,
    /// Optical loss-bath amplitude `√(κ_Ea G′)`.
    pub l_a: T,
    pub squeezers: SqueezerPair<T>,
}

impl<T: Real> NoiseCoefficients<T> {
    /// Effective gain `τ = G′η`.
    pub fn tau(&self) -> T {
        self.s * self.s
    }

    /// `c_P² − c_A² + l_m² + l_a² − (1 − τ)`; vanishes for a canonical map.
    pub fn commutator_defect(&self) -> T {
        self.c_p * self.c_p - self.c_a * self.c_a + self.l_m * self.l_m + self.l_a * self.l_a
            - (T::one() - self.tau())
    }

    /// Magnitude of the largest squared term before cancellation, `G·G′`.
    /// Relative checks of [`Self::commutator_defect`] are taken against it.
    pub fn cancellation_scale(&self) -> T {
        self.squeezers.g * self.squeezers.g_prime
    }

    /// Normally ordered noise moment `⟨n†n⟩` of the non-signal part.
    fn normal_moment(&self, occ: &PortOccupations<T>) -> T {
        let one = T::one();
        self.c_p * self.c_p * occ.n_p0
            + self.c_a * self.c_a * (occ.n_a0 + one)
            + self.l_m * self.l_m * occ.n_em
            + self.l_a * self.l_a * occ.n_ea
    }

    /// Anti-normally ordered noise moment `⟨n n†⟩`.
    fn anti_normal_moment(&self, occ: &PortOccupations<T>) -> T {
        let one = T::one();
        self.c_p * self.c_p * (occ.n_p0 + one)
            + self.c_a * self.c_a * occ.n_a0
            + self.l_m * self.l_m * (occ.n_em + one)
            + self.l_a * self.l_a * (occ.n_ea + one)
    }
}

/// Composes the bare transfer magnitudes with the squeezer pair.
///
/// Uses `|t|` for every port: the anti-squeezer phase is taken as locked to
/// the probe reflection, which makes all coefficients real.
pub fn compose<T: Real>(
    transfer: &TransferCoefficients<T>,
    squeezers: &SqueezerPair<T>,
) -> NoiseCoefficients<T> {
    let one = T::one();
    let g = squeezers.g;
    let gp = squeezers.g_prime;
    let kp = transfer.kappa_p;
    NoiseCoefficients {
        s: (transfer.eta * gp).sqrt(),
        c_p: (g * gp * kp).sqrt() - ((g - one) * (gp - one)).sqrt(),
        c_a: ((g - one) * gp * kp).sqrt() - (g * (gp - one)).sqrt(),
        l_m: (transfer.kappa_em * gp).sqrt(),
        l_a: (transfer.kappa_ea * gp).sqrt(),
        squeezers: *squeezers,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    GeneralizedLoss,
    GeneralizedAmplification,
    RandomDisplacement,
}

impl ChannelKind {
    pub fn label(self) -> &'static str {
        match self {
            ChannelKind::GeneralizedLoss => "GL",
            ChannelKind::GeneralizedAmplification => "GA",
            ChannelKind::RandomDisplacement => "RDP",
        }
    }
}

/// Settings at which one noise input drops out of the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialChannel {
    PureLoss,
    ThermalLoss,
    PureAmplification,
    ThermalAmplification,
}

impl SpecialChannel {
    pub fn label(self) -> &'static str {
        match self {
            SpecialChannel::PureLoss => "PL",
            SpecialChannel::ThermalLoss => "TL",
            SpecialChannel::PureAmplification => "PA",
            SpecialChannel::ThermalAmplification => "TA",
        }
    }
}

/// RDP iff `|τ − 1| ≤ tolerance`, otherwise loss or amplification by sign.
pub fn classify<T: Real>(tau: T, tolerance: T) -> ChannelKind {
    if (tau - T::one()).abs() <= tolerance {
        ChannelKind::RandomDisplacement
    } else if tau < T::one() {
        ChannelKind::GeneralizedLoss
    } else {
        ChannelKind::GeneralizedAmplification
    }
}

/// Added noise `N_e = ⟨ε_e†ε_e⟩` of a loss or amplification channel.
///
/// Loss: `N_e = ⟨n†n⟩/(1 − τ)`. Amplification: the noise enters through
/// `ε_e†`, so `N_e = ⟨n n†⟩/(τ − 1)`.
pub fn added_noise<T: Real>(
    coeffs: &NoiseCoefficients<T>,
    occupations: &PortOccupations<T>,
    tolerance: T,
) -> Result<T> {
    let tau = coeffs.tau();
    match classify(tau, tolerance) {
        ChannelKind::GeneralizedLoss => {
            Ok(coeffs.normal_moment(occupations) / (T::one() - tau))
        }
        ChannelKind::GeneralizedAmplification => {
            Ok(coeffs.anti_normal_moment(occupations) / (tau - T::one()))
        }
        ChannelKind::RandomDisplacement => Err(Error::WrongBranch(format!(
            "tau = {tau} is within {tolerance} of 1; use rdp_sigma2"
        ))),
    }
}

/// Added quadrature variance `⟨n†n⟩ + ⟨n n†⟩` in shot-noise units
/// (vacuum quadrature variance = 1), with no branch check.
fn quadrature_noise_variance<T: Real>(
    coeffs: &NoiseCoefficients<T>,
    occupations: &PortOccupations<T>,
) -> T {
    coeffs.normal_moment(occupations) + coeffs.anti_normal_moment(occupations)
}

/// Displacement-noise variance of the RDP channel.
///
/// Normalized so that `log₂(2/(eσ²))` is the common limit of the loss and
/// amplifier bounds as `τ → 1`: at `τ = 1` both `N_e(1 − τ)` and
/// `N_e(τ − 1)` tend to `σ²/2`.
pub fn rdp_sigma2<T: Real>(
    coeffs: &NoiseCoefficients<T>,
    occupations: &PortOccupations<T>,
    tolerance: T,
) -> Result<T> {
    let tau = coeffs.tau();
    if classify(tau, tolerance) != ChannelKind::RandomDisplacement {
        return Err(Error::WrongBranch(format!(
            "tau = {tau} is not within {tolerance} of 1"
        )));
    }
    Ok(quadrature_noise_variance(coeffs, occupations))
}

/// `G′ = G / [G(1 − κ_P) + κ_P]`, which cancels the ancilla term.
pub fn gprime_pure_loss<T: Real>(g: T, kappa_p: T) -> Result<T> {
    check_gain_and_kappa(g, kappa_p)?;
    let denom = g * (T::one() - kappa_p) + kappa_p;
    if !(denom > T::zero()) {
        return domain(format!("pure-loss condition undefined: denominator {denom} <= 0"));
    }
    Ok(g / denom)
}

/// `G′ = (G − 1) / [G(1 − κ_P) − 1]`, which cancels the probe term.
pub fn gprime_pure_amp<T: Real>(g: T, kappa_p: T) -> Result<T> {
    check_gain_and_kappa(g, kappa_p)?;
    let denom = g * (T::one() - kappa_p) - T::one();
    if !(denom > T::zero()) {
        return domain(format!(
            "pure-amplification condition unreachable: G(1 - kappa_P) = {} <= 1",
            g * (T::one() - kappa_p)
        ));
    }
    Ok((g - T::one()) / denom)
}

/// Squeezer gain `G` that puts a fixed `G′` on the pure-loss condition.
pub fn g_for_pure_loss<T: Real>(g_prime: T, kappa_p: T) -> Result<T> {
    check_gain_and_kappa(g_prime, kappa_p)?;
    let denom = T::one() - g_prime * (T::one() - kappa_p);
    if !(denom > T::zero()) {
        return domain(format!("no G reaches the pure-loss condition at G' = {g_prime}"));
    }
    let g = g_prime * kappa_p / denom;
    if !(g >= T::one()) {
        return domain(format!("pure-loss condition needs G = {g} < 1"));
    }
    Ok(g)
}

/// Squeezer gain `G` that puts a fixed `G′` on the pure-amplification condition.
pub fn g_for_pure_amp<T: Real>(g_prime: T, kappa_p: T) -> Result<T> {
    check_gain_and_kappa(g_prime, kappa_p)?;
    let denom = g_prime * (T::one() - kappa_p) - T::one();
    if !(denom > T::zero()) {
        return domain(format!("no G reaches the pure-amplification condition at G' = {g_prime}"));
    }
    let g = (g_prime - T::one()) / denom;
    if !(g >= T::one()) {
        return domain(format!("pure-amplification condition needs G = {g} < 1"));
    }
    Ok(g)
}

fn check_gain_and_kappa<T: Real>(gain: T, kappa_p: T) -> Result<()> {
    if !(gain >= T::one()) || !gain.is_finite() {
        return domain(format!("gain must be >= 1, got {gain}"));
    }
    if !(kappa_p >= T::zero() && kappa_p <= T::one()) {
        return domain(format!("kappa_P must lie in [0, 1], got {kappa_p}"));
    }
    Ok(())
}

/// Classified effective channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDescriptor<T> {
    pub kind: ChannelKind,
    pub special: Option<SpecialChannel>,
    /// Effective transmissivity or gain `G′η`.
    pub tau: T,
    /// Added noise, for loss and amplification channels.
    pub n_e: Option<T>,
    /// Displacement variance, for RDP channels.
    pub sigma2: Option<T>,
    /// RDP variance evaluated at a point that is not RDP but lies within
    /// [`NEAR_BOUNDARY_BAND`] of `τ = 1`.
    pub boundary_sigma2: Option<T>,
    pub tolerance: T,
}

/// Classifies the composed output and computes its noise parameters.
pub fn describe<T: Real>(
    coeffs: &NoiseCoefficients<T>,
    occupations: &PortOccupations<T>,
    tolerance: T,
) -> Result<ChannelDescriptor<T>> {
    occupations.validate()?;
    if !(tolerance > T::zero()) {
        return domain(format!("classification tolerance must be > 0, got {tolerance}"));
    }
    let tau = coeffs.tau();
    let kind = classify(tau, tolerance);
    let mut desc = ChannelDescriptor {
        kind,
        special: None,
        tau,
        n_e: None,
        sigma2: None,
        boundary_sigma2: None,
        tolerance,
    };
    match kind {
        ChannelKind::RandomDisplacement => {
            desc.sigma2 = Some(rdp_sigma2(coeffs, occupations, tolerance)?);
        }
        _ => {
            desc.n_e = Some(added_noise(coeffs, occupations, tolerance)?);
            if (tau - T::one()).abs() < T::lit(NEAR_BOUNDARY_BAND) {
                desc.boundary_sigma2 = Some(quadrature_noise_variance(coeffs, occupations));
            }
            desc.special = special_tag(kind, coeffs, occupations);
        }
    }
    Ok(desc)
}

fn special_tag<T: Real>(
    kind: ChannelKind,
    coeffs: &NoiseCoefficients<T>,
    occ: &PortOccupations<T>,
) -> Option<SpecialChannel> {
    let threshold = T::lit(ELIMINATION_TOLERANCE) * coeffs.cancellation_scale().sqrt();
    let one = T::one();
    match kind {
        ChannelKind::GeneralizedLoss if coeffs.c_a.abs() <= threshold => {
            let residual = coeffs.c_p * coeffs.c_p * occ.n_p0
                + coeffs.l_m * coeffs.l_m * occ.n_em
                + coeffs.l_a * coeffs.l_a * occ.n_ea;
            Some(if residual == T::zero() {
                SpecialChannel::PureLoss
            } else {
                SpecialChannel::ThermalLoss
            })
        }
        ChannelKind::GeneralizedAmplification if coeffs.c_p.abs() <= threshold => {
            let residual = coeffs.c_a * coeffs.c_a * occ.n_a0
                + coeffs.l_m * coeffs.l_m * (occ.n_em + one)
                + coeffs.l_a * coeffs.l_a * (occ.n_ea + one);
            Some(if residual == T::zero() {
                SpecialChannel::PureAmplification
            } else {
                SpecialChannel::ThermalAmplification
            })
        }
        _ => None,
    }
}
