//! Quantum-capacity lower bounds for single-mode Gaussian channels.
//!
//! Loss and amplification channels with effective gain `τ` and added noise
//! `N_e` use `log₂|τ/(1−τ)| − g(N_e)`; the random-displacement channel uses
//! `log₂(2/(eσ²))` with `σ²` the added quadrature variance in shot-noise units.

use crate::channel::{ChannelDescriptor, ChannelKind};
use crate::error::{domain, Error, Result};
use crate::Real;

/// Disagreement (bits) between a branch value and its RDP limit that is
/// reported as a warning near `τ = 1`.
pub const BOUNDARY_AGREEMENT_BITS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CapacityBranch {
    Loss,
    Amplification,
    Rdp,
}

impl CapacityBranch {
    pub fn label(self) -> &'static str {
        match self {
            CapacityBranch::Loss => "loss",
            CapacityBranch::Amplification => "amplification",
            CapacityBranch::Rdp => "rdp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult<T> {
    /// Lower bound in bits per channel use, never negative.
    pub q_lb: T,
    /// Value before clamping at zero. Root finders bisect on this.
    pub raw: T,
    pub branch: CapacityBranch,
    /// Set when `raw < 0` and `q_lb` was clamped to zero.
    pub clamped: bool,
}

impl<T: Real> CapacityResult<T> {
    fn from_raw(raw: T, branch: CapacityBranch) -> Self {
        let clamped = raw < T::zero();
        Self {
            q_lb: if clamped { T::zero() } else { raw },
            raw,
            branch,
            clamped,
        }
    }
}

/// Entropy of a thermal state with mean photon number `n`, in bits:
/// `(n+1)log₂(n+1) − n log₂ n`.
pub fn g_func<T: Real>(n: T) -> Result<T> {
    if !(n >= T::zero()) {
        return domain(format!("photon number must be >= 0, got {n}"));
    }
    if n == T::zero() {
        return Ok(T::zero());
    }
    if n.is_infinite() {
        return Ok(n);
    }
    // log₂(n+1) + n·log₂(1 + 1/n)
    let nats = n.ln_1p() + n * n.recip().ln_1p();
    Ok(nats * T::LOG2_E())
}

/// `max{0, log₂(τ/|1−τ|) − g(N_e)}` for `τ ≠ 1`.
pub fn q_lb_loss_amp<T: Real>(tau: T, n_e: T) -> Result<CapacityResult<T>> {
    if !(tau >= T::zero()) {
        return domain(format!("tau must be >= 0, got {tau}"));
    }
    if tau == T::one() {
        return Err(Error::WrongBranch("tau = 1 requires the RDP bound".into()));
    }
    let branch = if tau < T::one() {
        CapacityBranch::Loss
    } else {
        CapacityBranch::Amplification
    };
    let raw = tau.log2() - (T::one() - tau).abs().log2() - g_func(n_e)?;
    Ok(CapacityResult::from_raw(raw, branch))
}

/// `max{0, log₂(2/(eσ²))}`.
pub fn q_lb_rdp<T: Real>(sigma2: T) -> Result<CapacityResult<T>> {
    if !(sigma2 > T::zero()) {
        return domain(format!("RDP variance must be > 0, got {sigma2}"));
    }
    let raw = (T::two() / (T::E() * sigma2)).log2();
    Ok(CapacityResult::from_raw(raw, CapacityBranch::Rdp))
}

/// Dispatches a classified channel to its bound.
///
/// A noiseless RDP channel (`σ² = 0`, the identity) has unbounded capacity and
/// returns `+∞`.
pub fn q_lb<T: Real>(channel: &ChannelDescriptor<T>) -> Result<CapacityResult<T>> {
    let expected = crate::channel::classify(channel.tau, channel.tolerance);
    if expected != channel.kind {
        return Err(Error::Contract(format!(
            "descriptor kind {:?} inconsistent with tau = {} (tolerance {})",
            channel.kind, channel.tau, channel.tolerance
        )));
    }
    match channel.kind {
        ChannelKind::RandomDisplacement => {
            let sigma2 = channel
                .sigma2
                .ok_or_else(|| Error::Contract("RDP descriptor without sigma2".into()))?;
            if sigma2 == T::zero() {
                return Ok(CapacityResult {
                    q_lb: T::infinity(),
                    raw: T::infinity(),
                    branch: CapacityBranch::Rdp,
                    clamped: false,
                });
            }
            q_lb_rdp(sigma2)
        }
        ChannelKind::GeneralizedLoss | ChannelKind::GeneralizedAmplification => {
            let n_e = channel
                .n_e
                .ok_or_else(|| Error::Contract("loss/amplifier descriptor without N_e".into()))?;
            let result = q_lb_loss_amp(channel.tau, n_e)?;
            if let Some(s2) = channel.boundary_sigma2.filter(|s| *s > T::zero()) {
                let limit = q_lb_rdp(s2)?;
                let gap = (limit.raw - result.raw).abs();
                if gap > T::lit(BOUNDARY_AGREEMENT_BITS) {
                    log::warn!(
                        "near tau = 1 (tau = {}): branch bound {} and RDP limit {} differ by {} bits",
                        channel.tau,
                        result.raw,
                        limit.raw,
                        gap
                    );
                }
            }
            Ok(result)
        }
    }
}
