//! Randomized cross-check of the closed-form pipeline against the numerical
//! oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{ChannelKind, SqueezerPair};
use crate::error::Result;
use crate::oracle::{self, Ladder, Port};
use crate::pipeline;

use super::config::{SweepConfig, SweepMode, SystemSpec};
use super::row::{OperatingPoint, ORACLE_TOLERANCE_BITS};

/// Largest accepted relative deviation of any compared quantity.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

/// One random parameter draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub cooperativity: f64,
    pub zeta_m: f64,
    pub zeta_a: f64,
    /// Detuning in units of the cavity linewidth.
    pub omega: f64,
    pub temperature: f64,
    pub g: f64,
    pub gprime: f64,
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..=hi.ln()).exp().clamp(lo, hi)
}

/// `n` draws from a seeded ChaCha stream: `C ∈ [0.01, 10]` and `G, G′ ∈
/// [1, 10³]` log-uniform; `ζ ∈ [0.5, 1]`, `ω ∈ [−5κ, 5κ]` and `T ∈ [0, 0.5] K`
/// uniform.
pub fn draws(n: usize, seed: u64) -> Vec<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Draw {
            cooperativity: log_uniform(&mut rng, 0.01, 10.0),
            zeta_m: rng.gen_range(0.5..=1.0),
            zeta_a: rng.gen_range(0.5..=1.0),
            omega: rng.gen_range(-5.0..=5.0),
            temperature: rng.gen_range(0.0..=0.5),
            g: log_uniform(&mut rng, 1.0, 1e3),
            gprime: log_uniform(&mut rng, 1.0, 1e3),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub index: usize,
    pub draw: Draw,
    pub kind: ChannelKind,
    pub oracle_kind: ChannelKind,
    /// Max of `|a − b| / max(|a|, |b|)` over `η, κ_P, κ_Em, κ_Ea, c_P², c_A²`
    /// and `N_e` (or `σ²`); zero where both sides vanish.
    pub relative_deviation: f64,
    pub q_analytic: f64,
    pub q_oracle: f64,
    pub q_difference: f64,
    pub pass: bool,
}

/// Evaluates one draw through both paths.
pub fn check_draw(cfg: &SweepConfig, index: usize, draw: &Draw) -> Result<CheckRow> {
    let system = SystemSpec {
        cooperativity: draw.cooperativity,
        zeta_m: draw.zeta_m,
        zeta_a: draw.zeta_a,
        eta: None,
        temperature: draw.temperature,
        ..cfg.system.clone()
    };
    let point = OperatingPoint::new(&system)?;
    let detuning = draw.omega * point.kappa;
    let squeezers = SqueezerPair::new(draw.g, draw.gprime)?;

    let a = pipeline::analyze(&point.params, detuning, &squeezers, cfg.thermal_probe, cfg.rdp_tolerance)?;
    let (numeric, moments, desc) = oracle::oracle_channel(
        &point.params,
        detuning,
        &squeezers,
        draw.temperature,
        cfg.thermal_probe,
        cfg.rdp_tolerance,
    )?;
    let q_oracle = crate::capacity::q_lb(&desc)?.q_lb;

    let t = &a.transfer;
    let c = &a.coefficients;
    let (cp2, ca2) = (c.c_p * c.c_p, c.c_a * c.c_a);
    let noise = |d: &crate::ChannelDescriptor<f64>| d.n_e.or(d.sigma2).unwrap_or(f64::NAN);
    let relative_deviation = [
        (t.eta, numeric.eta()),
        (t.kappa_p, numeric.kappa_p()),
        (t.kappa_em, numeric.kappa_em()),
        (t.kappa_ea, numeric.kappa_ea()),
        (cp2, moments.port_weight(Port::Probe, Ladder::Annihilation)),
        (ca2, moments.port_weight(Port::Ancilla, Ladder::Creation)),
        (noise(&a.channel), noise(&desc)),
    ]
    .iter()
    .fold(0.0_f64, |m, &(x, y)| m.max(relative(x, y)));

    let q_analytic = a.capacity.q_lb;
    let q_difference = if q_analytic.is_infinite() && q_oracle.is_infinite() {
        0.0
    } else {
        (q_analytic - q_oracle).abs()
    };
    let pass = a.channel.kind == desc.kind
        && relative_deviation <= RELATIVE_TOLERANCE
        && q_difference <= ORACLE_TOLERANCE_BITS;
    Ok(CheckRow {
        index,
        draw: *draw,
        kind: a.channel.kind,
        oracle_kind: desc.kind,
        relative_deviation,
        q_analytic,
        q_oracle,
        q_difference,
        pass,
    })
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Runs the configured number of draws; rows come back in draw order.
pub fn run_oracle_check(cfg: &SweepConfig) -> Result<Vec<CheckRow>> {
    if cfg.mode != SweepMode::OracleCheck {
        return Err(crate::Error::Config(format!(
            "config is for mode '{}', not 'oracle-check'",
            cfg.mode
        )));
    }
    let draws = draws(cfg.oracle_check.draws, cfg.oracle_check.seed);
    draws
        .par_iter()
        .enumerate()
        .map(|(i, d)| check_draw(cfg, i, d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_reproducible() {
        assert_eq!(draws(10, 3), draws(10, 3));
        assert_ne!(draws(10, 3), draws(10, 4));
        for d in draws(200, 1) {
            assert!((0.01..=10.0).contains(&d.cooperativity));
            assert!((1.0..=1e3).contains(&d.g) && (1.0..=1e3).contains(&d.gprime));
        }
    }
}
