//! Sweep runners, one per mode.
//!
//! Grid points are evaluated in parallel and returned in a fixed order: outer
//! axes (cg, zeta_m, zeta_a, temperature) slowest, then the mode's own axes in
//! the order they are documented on each runner.

use rayon::prelude::*;

use crate::channel::{self, SqueezerPair};
use crate::error::{Error, Result};
use crate::pipeline;

use super::axis::{db_to_linear, AxisName, AxisSpec};
use super::config::{SqueezerAxis, SweepConfig, SweepMode, SystemSpec};
use super::row::{evaluate, Marker, OperatingPoint, SqueezerChoice, SweepRow};

/// Two values closer than this (relative) are the same grid point.
const MERGE_TOLERANCE: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;

/// One operating point of the outer-axis product with its curve label.
#[derive(Debug, Clone)]
pub struct Variant {
    pub label: String,
    pub system: SystemSpec,
}

/// Product of the outer axes present in `cfg`, in the order cg, zeta_m,
/// zeta_a, temperature.
pub fn variants(cfg: &SweepConfig) -> Vec<Variant> {
    let mut out = vec![Variant {
        label: String::new(),
        system: cfg.system.clone(),
    }];
    for name in cfg.optional_axes() {
        let Some(axis) = cfg.axis(*name) else { continue };
        let values = axis.values();
        out = out
            .into_iter()
            .flat_map(|v| {
                values.iter().map(move |&x| {
                    let mut system = v.system.clone();
                    match name {
                        AxisName::Cg => system.cooperativity = x,
                        AxisName::ZetaM => system.zeta_m = x,
                        AxisName::ZetaA => system.zeta_a = x,
                        AxisName::Temperature => system.temperature = x,
                        _ => unreachable!("not an outer axis"),
                    }
                    Variant {
                        label: join_label(&v.label, &format!("{name}={x}")),
                        system,
                    }
                })
            })
            .collect();
    }
    out
}

fn join_label(a: &str, b: &str) -> String {
    match (a.is_empty(), b.is_empty()) {
        (true, _) => b.to_string(),
        (_, true) => a.to_string(),
        _ => format!("{a};{b}"),
    }
}

fn required_axis(cfg: &SweepConfig, name: AxisName) -> Result<&AxisSpec> {
    cfg.axis(name)
        .ok_or_else(|| Error::Config(format!("mode '{}' needs an axis named '{name}'", cfg.mode)))
}

fn expect_mode(cfg: &SweepConfig, mode: SweepMode) -> Result<()> {
    if cfg.mode == mode {
        Ok(())
    } else {
        Err(Error::Config(format!("config is for mode '{}', not '{mode}'", cfg.mode)))
    }
}

struct Task {
    point: usize,
    omega: f64,
    choice: SqueezerChoice,
    curve: String,
    marker: Option<Marker>,
}

fn run_tasks(cfg: &SweepConfig, points: &[OperatingPoint], tasks: Vec<Task>) -> Result<Vec<SweepRow>> {
    tasks
        .par_iter()
        .map(|t| evaluate(cfg, &points[t.point], t.omega, t.choice, &t.curve, t.marker))
        .collect()
}

fn fixed(g: f64, gprime: f64) -> Result<SqueezerChoice> {
    Ok(SqueezerChoice::Fixed(SqueezerPair::new(g, gprime)?))
}

/// Bare capacity on resonance against cooperativity.
///
/// Order: zeta, temperature, cg. Both cavities share the coupling ratio.
pub fn run_resonant(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    expect_mode(cfg, SweepMode::Resonant)?;
    let cg = required_axis(cfg, AxisName::Cg)?.values();
    let mut points = Vec::new();
    let mut tasks = Vec::new();
    for &zeta in &cfg.resonant.zetas {
        for &temperature in &cfg.resonant.temperatures {
            let curve = format!("zeta={zeta};T={temperature}");
            for &c in &cg {
                let system = SystemSpec {
                    cooperativity: c,
                    zeta_m: zeta,
                    zeta_a: zeta,
                    eta: None,
                    temperature,
                    ..cfg.system.clone()
                };
                points.push(OperatingPoint::new(&system)?);
                tasks.push(Task {
                    point: points.len() - 1,
                    omega: 0.0,
                    choice: SqueezerChoice::Fixed(SqueezerPair::identity()),
                    curve: curve.clone(),
                    marker: None,
                });
            }
        }
    }
    run_tasks(cfg, &points, tasks)
}

/// On-resonance capacity over the (G, G′) plane.
///
/// Order: outer axes, G, G′.
pub fn run_gg_grid(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    expect_mode(cfg, SweepMode::Grid)?;
    let gs = required_axis(cfg, AxisName::G)?.values();
    let gps = required_axis(cfg, AxisName::GPrime)?.values();
    let vars = variants(cfg);
    let points = vars
        .iter()
        .map(|v| OperatingPoint::new(&v.system))
        .collect::<Result<Vec<_>>>()?;
    let mut tasks = Vec::with_capacity(vars.len() * gs.len() * gps.len());
    for (i, v) in vars.iter().enumerate() {
        let curve = if v.label.is_empty() { "grid".to_string() } else { v.label.clone() };
        for &g in &gs {
            for &gp in &gps {
                tasks.push(Task {
                    point: i,
                    omega: 0.0,
                    choice: fixed(g, gp)?,
                    curve: curve.clone(),
                    marker: None,
                });
            }
        }
    }
    run_tasks(cfg, &points, tasks)
}

/// Marker positions along the free squeezer axis for one slice.
pub fn slice_markers(
    vary: SqueezerAxis,
    fixed_gain: f64,
    kappa_p: f64,
    eta: f64,
) -> Vec<(f64, Marker)> {
    let mut out = Vec::new();
    match vary {
        SqueezerAxis::GPrime => {
            if let Ok(gp) = channel::gprime_pure_loss(fixed_gain, kappa_p) {
                out.push((gp, Marker::PureLoss));
            }
            if eta > 0.0 {
                out.push((1.0 / eta, Marker::Rdp));
            }
            if let Ok(gp) = channel::gprime_pure_amp(fixed_gain, kappa_p) {
                out.push((gp, Marker::PureAmplification));
            }
        }
        SqueezerAxis::G => {
            if let Ok(g) = channel::g_for_pure_loss(fixed_gain, kappa_p) {
                out.push((g, Marker::PureLoss));
            }
            if let Ok(g) = channel::g_for_pure_amp(fixed_gain, kappa_p) {
                out.push((g, Marker::PureAmplification));
            }
        }
    }
    out
}

/// Merges marker positions that fall inside the axis range into the grid.
/// A marker on an existing grid value tags that value instead of adding one.
pub fn merge_markers(values: &[f64], markers: &[(f64, Marker)]) -> Vec<(f64, Option<Marker>)> {
    let lo = values.first().copied().unwrap_or(f64::NAN);
    let hi = values.last().copied().unwrap_or(f64::NAN);
    let mut out: Vec<(f64, Option<Marker>)> = values.iter().map(|&v| (v, None)).collect();
    for &(x, m) in markers {
        if !(x >= lo && x <= hi) {
            continue;
        }
        match out
            .iter_mut()
            .find(|(v, tag)| tag.is_none() && (v - x).abs() <= MERGE_TOLERANCE * x.abs().max(1.0))
        {
            Some(slot) => slot.1 = Some(m),
            None => out.push((x, Some(m))),
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// One-dimensional cuts through the (G, G′) plane with the special
/// anti-squeezer settings merged in as tagged rows.
///
/// Order: outer axes, fixed values, free squeezer.
pub fn run_slices(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    expect_mode(cfg, SweepMode::Slice)?;
    let vary = cfg.slice.vary;
    let axis = required_axis(
        cfg,
        match vary {
            SqueezerAxis::G => AxisName::G,
            SqueezerAxis::GPrime => AxisName::GPrime,
        },
    )?;
    let values = axis.values();
    let vars = variants(cfg);
    let points = vars
        .iter()
        .map(|v| OperatingPoint::new(&v.system))
        .collect::<Result<Vec<_>>>()?;
    let mut tasks = Vec::new();
    for (i, (v, point)) in vars.iter().zip(&points).enumerate() {
        let kappa_p = point.resonant_kappa_p()?;
        let eta = point.resonant_eta()?;
        for &fixed_value in &cfg.slice.fixed {
            let (fixed_gain, part) = match vary {
                SqueezerAxis::GPrime => (db_to_linear(fixed_value), format!("g_db={fixed_value}")),
                SqueezerAxis::G => (fixed_value, format!("gprime={fixed_value}")),
            };
            let curve = join_label(&v.label, &part);
            let markers = slice_markers(vary, fixed_gain, kappa_p, eta);
            for (x, marker) in merge_markers(&values, &markers) {
                let choice = match vary {
                    SqueezerAxis::GPrime => fixed(fixed_gain, x)?,
                    SqueezerAxis::G => fixed(x, fixed_gain)?,
                };
                tasks.push(Task {
                    point: i,
                    omega: 0.0,
                    choice,
                    curve: curve.clone(),
                    marker,
                });
            }
        }
    }
    run_tasks(cfg, &points, tasks)
}

/// Per-curve bandwidth figures.
#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthSummary {
    pub curve: String,
    pub cooperativity: f64,
    pub assisted: bool,
    pub g: f64,
    /// Fixed `G′`, or `None` when it follows the pure-loss condition.
    pub gprime: Option<f64>,
    pub positive_points: usize,
    pub step: f64,
    /// Positive-capacity bandwidth in units of the cavity linewidth.
    pub bandwidth: f64,
    pub q_peak: f64,
    pub q_center: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthOutput {
    pub rows: Vec<SweepRow>,
    pub summary: Vec<BandwidthSummary>,
}

/// Capacity against detuning, bare and squeezing-assisted.
///
/// Order: outer axes, cooperativity, bare before assisted, detuning.
pub fn run_bandwidth(cfg: &SweepConfig) -> Result<BandwidthOutput> {
    expect_mode(cfg, SweepMode::Bandwidth)?;
    let axis = required_axis(cfg, AxisName::Omega)?;
    let step = axis
        .step()
        .ok_or_else(|| Error::Config("bandwidth mode needs a linear omega axis".into()))?;
    let omegas = axis.values();
    let g = db_to_linear(cfg.bandwidth.g_db);
    let assisted_choice = match cfg.bandwidth.fixed_gprime {
        Some(gp) => fixed(g, gp)?,
        None => SqueezerChoice::PureLoss { g },
    };

    let mut points = Vec::new();
    let mut curves = Vec::new();
    let mut tasks = Vec::new();
    for v in variants(cfg) {
        for &c in &cfg.bandwidth.cooperativities {
            let system = SystemSpec {
                cooperativity: c,
                eta: None,
                ..v.system.clone()
            };
            points.push(OperatingPoint::new(&system)?);
            for (assisted, choice) in [
                (false, SqueezerChoice::Fixed(SqueezerPair::identity())),
                (true, assisted_choice),
            ] {
                let tag = if assisted { "assisted" } else { "bare" };
                let curve = join_label(&v.label, &format!("{tag};cg={c}"));
                curves.push((curve.clone(), c, assisted));
                for &omega in &omegas {
                    tasks.push(Task {
                        point: points.len() - 1,
                        omega,
                        choice,
                        curve: curve.clone(),
                        marker: None,
                    });
                }
            }
        }
    }
    let rows = run_tasks(cfg, &points, tasks)?;

    let centre = omegas
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let summary = curves
        .into_iter()
        .zip(rows.chunks(omegas.len()))
        .map(|((curve, cooperativity, assisted), chunk)| {
            let positive_points = chunk.iter().filter(|r| r.q_lb > 0.0).count();
            BandwidthSummary {
                curve,
                cooperativity,
                assisted,
                g: if assisted { g } else { 1.0 },
                gprime: if assisted { cfg.bandwidth.fixed_gprime } else { Some(1.0) },
                positive_points,
                step,
                bandwidth: positive_points as f64 * step,
                q_peak: chunk.iter().map(|r| r.q_lb).fold(f64::NEG_INFINITY, f64::max),
                q_center: chunk[centre].q_lb,
            }
        })
        .collect();
    Ok(BandwidthOutput { rows, summary })
}

/// Result of a bracketed root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    /// Bracket width reached `tolerance`.
    pub converged: bool,
}

/// Bisects `f` on `[lo, hi]` until the bracket is narrower than `tolerance`.
/// Returns `None` when `f(lo)` and `f(hi)` have the same sign.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tolerance: f64) -> Result<Option<Bisection>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(Some(Bisection { x: lo, fx: 0.0, iterations: 0, converged: true }));
    }
    if f_hi == 0.0 {
        return Ok(Some(Bisection { x: hi, fx: 0.0, iterations: 0, converged: true }));
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Ok(None);
    }
    let mut iterations = 0;
    while hi - lo > tolerance && iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        iterations += 1;
        if f_mid == 0.0 {
            return Ok(Some(Bisection { x: mid, fx: 0.0, iterations, converged: true }));
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok(Some(Bisection {
        x,
        fx: f(x)?,
        iterations,
        converged: hi - lo <= tolerance,
    }))
}

/// Raw (unclamped) on-resonance capacity bound of `system` with the given
/// squeezers.
pub fn resonant_raw_capacity(system: &SystemSpec, squeezers: &SqueezerPair<f64>, cfg: &SweepConfig) -> Result<f64> {
    let point = OperatingPoint::new(system)?;
    let a = pipeline::analyze(&point.params, 0.0, squeezers, cfg.thermal_probe, cfg.rdp_tolerance)?;
    Ok(a.capacity.raw)
}

/// Cooperativity in `[lo, hi]` where the bare on-resonance capacity bound of
/// `system` crosses zero.
pub fn resonant_threshold(
    cfg: &SweepConfig,
    system: &SystemSpec,
    lo: f64,
    hi: f64,
    tolerance: f64,
) -> Result<Option<Bisection>> {
    let identity = SqueezerPair::identity();
    bisect(
        |c| {
            let s = SystemSpec {
                cooperativity: c,
                eta: None,
                ..system.clone()
            };
            resonant_raw_capacity(&s, &identity, cfg)
        },
        lo,
        hi,
        tolerance,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    /// `Q` turns positive with increasing `G′`.
    Lower,
    /// `Q` turns non-positive with increasing `G′`.
    Upper,
}

impl Edge {
    pub fn label(self) -> &'static str {
        match self {
            Edge::Lower => "lower",
            Edge::Upper => "upper",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryStatus {
    Resolved,
    /// Bisection stopped before the bracket reached the tolerance.
    Unresolved,
    /// No sign change of `Q` along this column.
    NoSignChange,
}

impl BoundaryStatus {
    pub fn label(self) -> &'static str {
        match self {
            BoundaryStatus::Resolved => "resolved",
            BoundaryStatus::Unresolved => "unresolved",
            BoundaryStatus::NoSignChange => "no_sign_change",
        }
    }
}

/// One crossing of the `Q = 0` contour along a fixed-`G` column.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    pub curve: String,
    pub g: f64,
    pub edge: Option<Edge>,
    pub gprime: Option<f64>,
    pub q_raw: Option<f64>,
    pub status: BoundaryStatus,
}

/// Traces the positive-capacity region in the (G, G′) plane: for every G on
/// the grid, each sign change of the raw bound along the G′ axis is refined
/// by bisection.
///
/// Order: outer axes, G, increasing G′.
pub fn run_boundary(cfg: &SweepConfig) -> Result<Vec<BoundaryPoint>> {
    expect_mode(cfg, SweepMode::Boundary)?;
    let gs = required_axis(cfg, AxisName::G)?.values();
    let gps = required_axis(cfg, AxisName::GPrime)?.values();
    let vars = variants(cfg);
    let columns: Vec<(usize, f64)> = (0..vars.len())
        .flat_map(|i| gs.iter().map(move |&g| (i, g)))
        .collect();
    let points = vars
        .iter()
        .map(|v| OperatingPoint::new(&v.system))
        .collect::<Result<Vec<_>>>()?;
    let occupations = points
        .iter()
        .map(|p| pipeline::occupations(&p.params, cfg.thermal_probe))
        .collect::<Result<Vec<_>>>()?;
    let transfers = points
        .iter()
        .map(|p| crate::physics::transfer_coefficients(&p.params, 0.0))
        .collect::<Result<Vec<_>>>()?;

    let per_column: Vec<Vec<BoundaryPoint>> = columns
        .par_iter()
        .map(|&(i, g)| {
            let q = |gp: f64| -> Result<f64> {
                let pair = SqueezerPair::new(g, gp)?;
                let a = pipeline::analyze_transfer(&transfers[i], &pair, &occupations[i], cfg.rdp_tolerance)?;
                Ok(a.capacity.raw)
            };
            let curve = if vars[i].label.is_empty() { "boundary".to_string() } else { vars[i].label.clone() };
            let samples = gps.iter().map(|&gp| q(gp)).collect::<Result<Vec<_>>>()?;
            let mut found = Vec::new();
            for k in 1..gps.len() {
                let (a, b) = (samples[k - 1] > 0.0, samples[k] > 0.0);
                if a == b {
                    continue;
                }
                let edge = if b { Edge::Lower } else { Edge::Upper };
                let hit = bisect(q, gps[k - 1], gps[k], cfg.boundary_tolerance)?;
                let hit = hit.expect("bracket has a sign change");
                found.push(BoundaryPoint {
                    curve: curve.clone(),
                    g,
                    edge: Some(edge),
                    gprime: Some(hit.x),
                    q_raw: Some(q(hit.x)?),
                    status: if hit.converged { BoundaryStatus::Resolved } else { BoundaryStatus::Unresolved },
                });
            }
            if found.is_empty() {
                found.push(BoundaryPoint {
                    curve,
                    g,
                    edge: None,
                    gprime: None,
                    q_raw: None,
                    status: BoundaryStatus::NoSignChange,
                });
            }
            Ok(found)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_column.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_root() {
        let b = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14).unwrap().unwrap();
        assert!((b.x - 2f64.sqrt()).abs() < 1e-14);
        assert!(b.converged);
        assert!(bisect(|x| Ok(x * x + 1.0), 0.0, 2.0, 1e-12).unwrap().is_none());
    }

    #[test]
    fn markers_merge_sorted() {
        let values = [1.0, 2.0, 3.0, 4.0];
        let merged = merge_markers(&values, &[(2.5, Marker::Rdp), (3.0, Marker::PureLoss), (9.0, Marker::PureAmplification)]);
        let xs: Vec<f64> = merged.iter().map(|m| m.0).collect();
        assert_eq!(xs, vec![1.0, 2.0, 2.5, 3.0, 4.0]);
        assert_eq!(merged[2].1, Some(Marker::Rdp));
        assert_eq!(merged[3].1, Some(Marker::PureLoss));
    }

    #[test]
    fn variants_cover_product() {
        let mut cfg = SweepConfig::defaults(SweepMode::Grid);
        cfg.axes.push(AxisSpec::new(AxisName::Temperature, 0.0, 0.3, 2, super::super::axis::Spacing::Linear));
        cfg.axes.push(AxisSpec::new(AxisName::ZetaA, 0.8, 1.0, 3, super::super::axis::Spacing::Linear));
        cfg.validate().unwrap();
        let v = variants(&cfg);
        assert_eq!(v.len(), 6);
        assert_eq!(v[0].label, "zeta_a=0.8;temperature=0");
        assert_eq!(v[5].system.temperature, 0.3);
    }
}
