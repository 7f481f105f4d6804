//! Sweep axes.

use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    /// Cooperativity `C_g`.
    Cg,
    ZetaM,
    ZetaA,
    /// Squeezer gain `G`.
    G,
    /// Anti-squeezer gain `G′`.
    #[serde(rename = "gprime")]
    GPrime,
    /// Detuning in units of the cavity linewidth.
    Omega,
    /// Bath temperature (K).
    Temperature,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::Cg => "cg",
            AxisName::ZetaM => "zeta_m",
            AxisName::ZetaA => "zeta_a",
            AxisName::G => "g",
            AxisName::GPrime => "gprime",
            AxisName::Omega => "omega",
            AxisName::Temperature => "temperature",
        }
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    /// Geometric spacing; bounds must be positive.
    Log,
    /// Uniform in `10 log₁₀`; bounds are given in dB. Squeezer axes only.
    Db,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl AxisSpec {
    pub fn new(name: AxisName, min: f64, max: f64, points: usize, spacing: Spacing) -> Self {
        Self {
            name,
            min,
            max,
            points,
            spacing,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Config(format!("axis '{}': {m}", self.name)));
        if !self.min.is_finite() || !self.max.is_finite() {
            return err("bounds must be finite".into());
        }
        if !(self.min < self.max) {
            return err(format!("min ({}) must be below max ({})", self.min, self.max));
        }
        if self.points < 2 {
            return err(format!("points must be >= 2, got {}", self.points));
        }
        if self.spacing == Spacing::Db && !matches!(self.name, AxisName::G | AxisName::GPrime) {
            return err("db spacing is only allowed for g and gprime".into());
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return err("log spacing needs min > 0".into());
        }
        let (lo, _) = self.linear_bounds();
        match self.name {
            AxisName::G | AxisName::GPrime if lo < 1.0 => {
                return err(format!("squeezer gains must be >= 1 (0 dB), got lower bound {lo}"));
            }
            AxisName::Cg | AxisName::Temperature if self.min < 0.0 => {
                return err("values must be >= 0".into());
            }
            AxisName::ZetaM | AxisName::ZetaA if self.min < 0.0 || self.max > 1.0 => {
                return err("coupling ratios must lie in [0, 1]".into());
            }
            _ => {}
        }
        Ok(())
    }

    fn linear_bounds(&self) -> (f64, f64) {
        match self.spacing {
            Spacing::Db => (db_to_linear(self.min), db_to_linear(self.max)),
            _ => (self.min, self.max),
        }
    }

    /// Grid values in linear units, endpoints included exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear | Spacing::Log if i == 0 => self.min,
                    Spacing::Linear | Spacing::Log if i == n - 1 => self.max,
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                    Spacing::Db if i == n - 1 => db_to_linear(self.max),
                    Spacing::Db => db_to_linear(self.min + (self.max - self.min) * t),
                }
            })
            .collect()
    }

    /// Spacing of a linear axis; `None` for log and dB axes.
    pub fn step(&self) -> Option<f64> {
        (self.spacing == Spacing::Linear).then(|| (self.max - self.min) / (self.points - 1) as f64)
    }
}

pub(crate) fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_endpoints_exact() {
        let a = AxisSpec::new(AxisName::Omega, -3.0, 3.0, 201, Spacing::Linear);
        let v = a.values();
        assert_eq!(v.len(), 201);
        assert_eq!(v[0], -3.0);
        assert_eq!(v[200], 3.0);
        assert_eq!(v[100], 0.0);
        assert_eq!(a.step(), Some(0.03));
    }

    #[test]
    fn db_axis_is_linear_gain() {
        let a = AxisSpec::new(AxisName::G, 0.0, 30.0, 4, Spacing::Db);
        let v = a.values();
        assert_eq!(v[0], 1.0);
        assert!((v[2] - 100.0).abs() < 1e-12);
        assert!((v[3] - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn log_axis() {
        let a = AxisSpec::new(AxisName::Cg, 0.01, 100.0, 5, Spacing::Log);
        let v = a.values();
        assert!((v[2] - 1.0).abs() < 1e-14);
        assert_eq!(v[4], 100.0);
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(AxisSpec::new(AxisName::G, 0.0, 30.0, 1, Spacing::Db).validate().is_err());
        assert!(AxisSpec::new(AxisName::Omega, 0.0, 3.0, 5, Spacing::Db).validate().is_err());
        assert!(AxisSpec::new(AxisName::GPrime, 0.5, 3.0, 5, Spacing::Linear).validate().is_err());
        assert!(AxisSpec::new(AxisName::Cg, 0.0, 3.0, 5, Spacing::Log).validate().is_err());
        assert!(AxisSpec::new(AxisName::ZetaM, 0.5, 1.2, 5, Spacing::Linear).validate().is_err());
        assert!(AxisSpec::new(AxisName::G, 0.0, 30.0, 5, Spacing::Db).validate().is_ok());
    }
}
