//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;

use eo_transducer::capacity::q_lb_rdp;
use eo_transducer::channel::{self, gprime_pure_amp, gprime_pure_loss, g_for_pure_loss, SqueezerPair};
use eo_transducer::physics::{self, EoParams};
use eo_transducer::pipeline;
use eo_transducer::sweep::check::{self, RELATIVE_TOLERANCE};
use eo_transducer::sweep::row::{OperatingPoint, ORACLE_TOLERANCE_BITS};
use eo_transducer::sweep::run::{resonant_threshold, slice_markers};
use eo_transducer::sweep::{
    self, AxisName, AxisSpec, Marker, Spacing, SqueezerAxis, SweepConfig, SweepMode, SweepRow,
};

use common::{fixture, golden_path, render, MODES};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: eo_transducer::Error) -> String {
    e.to_string()
}

/// The eta = 0.1, zeta = 1 system of the slice and grid defaults.
fn fixed_eta_point() -> OperatingPoint {
    OperatingPoint::new(&SweepConfig::defaults(SweepMode::Slice).system).unwrap()
}

fn matched_point() -> Outcome {
    let p = EoParams::<f64>::from_cooperativity(1.0, 1.0, 1.0, 1.0).map_err(err)?;
    let t = physics::transfer_coefficients(&p, 0.0).map_err(err)?;
    ensure((t.eta - 1.0).abs() <= 1e-12 && t.kappa_p.abs() <= 1e-12, || {
        format!("eta = {}, kappa_P = {}", t.eta, t.kappa_p)
    })?;
    Ok(format!("eta - 1 = {:.1e}, kappa_P = {:.1e}", t.eta - 1.0, t.kappa_p))
}

fn threshold() -> Outcome {
    let cfg = SweepConfig::defaults(SweepMode::Resonant);
    let mut worst = 0.0_f64;
    for zeta in [1.0_f64, 0.95, 0.9] {
        let z = zeta * zeta;
        let b = 4.0 * z - 1.0;
        let roots = [b - (b * b - 1.0).sqrt(), b + (b * b - 1.0).sqrt()];
        let system = sweep::SystemSpec {
            zeta_m: zeta,
            zeta_a: zeta,
            temperature: 0.0,
            ..cfg.system.clone()
        };
        let brackets = [(1e-3, 1.0), (1.0, 1e3)];
        for (root, (lo, hi)) in roots.iter().zip(brackets) {
            let hit = resonant_threshold(&cfg, &system, lo, hi, 1e-13)
                .map_err(err)?
                .ok_or_else(|| format!("no sign change in [{lo}, {hi}] at zeta = {zeta}"))?;
            worst = worst.max((hit.x - root).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("largest root error {worst:e}"))?;

    // Positive bound exactly where eta(0) > 1/2, at T = 0.
    let mut grid = cfg.clone();
    grid.resonant.temperatures = vec![0.0];
    grid.axes = vec![AxisSpec::new(AxisName::Cg, 0.01, 100.0, 2001, Spacing::Log)];
    let rows = sweep::run_resonant(&grid).map_err(err)?;
    let bad: Vec<&SweepRow> = rows
        .iter()
        .filter(|r| (r.eta - 0.5).abs() > 1e-12 && (r.q_lb > 0.0) != (r.eta > 0.5))
        .collect();
    ensure(bad.is_empty(), || format!("{} grid points violate Q > 0 <=> eta > 1/2", bad.len()))?;
    Ok(format!("roots within {worst:.1e}; sign rule holds on {} points", rows.len()))
}

fn oracle_equivalence() -> Outcome {
    let mut worst_rel = 0.0_f64;
    let mut worst_q = 0.0_f64;
    let mut n = 0;
    for thermal_probe in [false, true] {
        let mut cfg = SweepConfig::defaults(SweepMode::OracleCheck);
        cfg.oracle_check.draws = 2000;
        cfg.thermal_probe = thermal_probe;
        let rows = check::run_oracle_check(&cfg).map_err(err)?;
        for r in &rows {
            ensure(r.pass, || format!("draw {} failed: {r:?}", r.index))?;
            worst_rel = worst_rel.max(r.relative_deviation);
            worst_q = worst_q.max(r.q_difference);
        }
        n += rows.len();
    }
    ensure(worst_rel <= RELATIVE_TOLERANCE && worst_q <= ORACLE_TOLERANCE_BITS, || {
        format!("relative {worst_rel:e}, bits {worst_q:e}")
    })?;
    Ok(format!("{n} draws; max relative {worst_rel:.1e}, max |dQ| {worst_q:.1e} bits"))
}

fn commutator() -> Outcome {
    let mut worst = 0.0_f64;
    let mut count = 0;
    // Random draws, G and G' up to 1e4.
    for d in check::draws(2000, 11) {
        let p = OperatingPoint::new(&sweep::SystemSpec {
            cooperativity: d.cooperativity,
            zeta_m: d.zeta_m,
            zeta_a: d.zeta_a,
            eta: None,
            ..SweepConfig::defaults(SweepMode::OracleCheck).system
        })
        .map_err(err)?;
        let t = physics::transfer_coefficients(&p.params, d.omega * p.kappa).map_err(err)?;
        for (g, gp) in [(d.g, d.gprime), (d.g * 10.0, d.gprime * 10.0)] {
            let c = channel::compose(&t, &SqueezerPair::new(g, gp).map_err(err)?);
            let lhs = c.c_p * c.c_p - c.c_a * c.c_a + gp * t.kappa_e();
            let rel = (lhs - (1.0 - gp * t.eta)).abs() / c.cancellation_scale().max(1.0);
            worst = worst.max(rel);
            count += 1;
        }
    }
    // Every row emitted by the default sweeps.
    let mut rows = Vec::new();
    rows.extend(sweep::run_resonant(&SweepConfig::defaults(SweepMode::Resonant)).map_err(err)?);
    rows.extend(sweep::run_gg_grid(&SweepConfig::defaults(SweepMode::Grid)).map_err(err)?);
    rows.extend(sweep::run_slices(&SweepConfig::defaults(SweepMode::Slice)).map_err(err)?);
    rows.extend(sweep::run_bandwidth(&SweepConfig::defaults(SweepMode::Bandwidth)).map_err(err)?.rows);
    for r in &rows {
        let rel = r.commutator_defect().abs() / (r.g * r.gprime).max(1.0);
        worst = worst.max(rel);
    }
    ensure(worst <= 1e-10, || format!("largest relative defect {worst:e}"))?;
    Ok(format!("{count} draws and {} sweep rows; max relative defect {worst:.1e}", rows.len()))
}

fn pure_loss_fixture() -> Outcome {
    let point = fixed_eta_point();
    let kappa_p = point.resonant_kappa_p().map_err(err)?;
    let exact = g_for_pure_loss(7.0, kappa_p).map_err(err)?;
    ensure((exact - 21.0).abs() <= 1e-9, || format!("inverted G = {exact}"))?;

    let mut cfg = SweepConfig::defaults(SweepMode::Slice);
    cfg.set_slice_vary(SqueezerAxis::G);
    cfg.slice.fixed = vec![7.0];
    let rows = sweep::run_slices(&cfg).map_err(err)?;
    let best = rows
        .iter()
        .max_by(|a, b| a.q_lb.total_cmp(&b.q_lb))
        .ok_or("empty slice")?;
    let target = (7.0_f64 / 3.0).log2();
    // The nearest grid neighbours of G = 21 on the dB axis.
    let axis = cfg.axis(AxisName::G).unwrap().values();
    let k = axis.iter().position(|&g| g > 21.0).ok_or("axis below 21")?;
    let (below, above) = (axis[k - 1], axis[k]);
    ensure(best.g >= below && best.g <= above, || format!("arg-max at G = {}", best.g))?;
    ensure((best.q_lb - target).abs() <= 1e-9, || format!("Q = {} vs {target}", best.q_lb))?;
    ensure(best.marker == Some(Marker::PureLoss), || "arg-max row is not the PL marker".into())?;
    Ok(format!("arg-max G = {:.12}, Q = {:.13} (log2(7/3) = {target:.13})", best.g, best.q_lb))
}

fn markers() -> Outcome {
    let point = fixed_eta_point();
    let kappa_p = point.resonant_kappa_p().map_err(err)?;
    let eta = point.resonant_eta().map_err(err)?;
    let m = slice_markers(SqueezerAxis::GPrime, 100.0, kappa_p, eta);
    let find = |k: Marker| m.iter().find(|(_, t)| *t == k).map(|(x, _)| *x);
    let pl = find(Marker::PureLoss).ok_or("no PL marker")?;
    let rdp = find(Marker::Rdp).ok_or("no RDP marker")?;
    let pa = find(Marker::PureAmplification).ok_or("no PA marker")?;
    ensure((pl - 9.1743).abs() <= 1e-4, || format!("PL at {pl}"))?;
    ensure(rdp == 10.0, || format!("RDP at {rdp}"))?;
    ensure((pa - 11.0).abs() <= 1e-9, || format!("PA at {pa}"))?;
    ensure(
        (gprime_pure_loss(100.0, kappa_p).map_err(err)? - pl).abs() == 0.0
            && (gprime_pure_amp(100.0, kappa_p).map_err(err)? - pa).abs() == 0.0,
        || "markers disagree with the closed forms".into(),
    )?;

    // The default slice carries the markers as tagged rows.
    let rows = sweep::run_slices(&SweepConfig::defaults(SweepMode::Slice)).map_err(err)?;
    let tagged: Vec<(f64, Marker)> = rows.iter().filter_map(|r| r.marker.map(|k| (r.gprime, k))).collect();
    ensure(tagged == vec![(pl, Marker::PureLoss), (rdp, Marker::Rdp), (pa, Marker::PureAmplification)], || {
        format!("slice markers {tagged:?}")
    })?;
    Ok(format!("PL/TL {pl:.6}, RDP {rdp}, PA/TA {pa:.12}"))
}

fn rdp_continuity() -> Outcome {
    let point = fixed_eta_point();
    let t = physics::transfer_coefficients(&point.params, 0.0).map_err(err)?;
    let occ = pipeline::occupations(&point.params, false).map_err(err)?;
    let tol = channel::DEFAULT_RDP_TOLERANCE;
    let at = |gp: f64| -> Result<f64, String> {
        let a = pipeline::analyze_transfer(&t, &SqueezerPair::new(100.0, gp).map_err(err)?, &occ, tol)
            .map_err(err)?;
        Ok(a.capacity.raw)
    };
    let rdp = pipeline::analyze_transfer(&t, &SqueezerPair::new(100.0, 1.0 / t.eta).map_err(err)?, &occ, tol)
        .map_err(err)?;
    let sigma2 = rdp.channel.sigma2.ok_or("not an RDP channel at tau = 1")?;
    let q_rdp = q_lb_rdp(sigma2).map_err(err)?.raw;
    let below = at((1.0 - 1e-6) / t.eta)?;
    let above = at((1.0 + 1e-6) / t.eta)?;
    let worst = (below - q_rdp).abs().max((above - q_rdp).abs());
    ensure(worst < 1e-3, || format!("|dQ| = {worst:e} bits"))?;
    Ok(format!("Q_RDP = {q_rdp:.9}, max |dQ| at tau = 1 +- 1e-6: {worst:.1e} bits"))
}

fn log_linear() -> Outcome {
    let point = fixed_eta_point();
    let t = physics::transfer_coefficients(&point.params, 0.0).map_err(err)?;
    let occ = pipeline::occupations(&point.params, false).map_err(err)?;
    let gs = AxisSpec::new(AxisName::G, 30.0, 60.0, 61, Spacing::Db).values();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for g in gs {
        let a = pipeline::analyze_transfer(&t, &SqueezerPair::new(g, 10.0).map_err(err)?, &occ, 1e-9)
            .map_err(err)?;
        ensure(a.channel.kind == channel::ChannelKind::RandomDisplacement, || {
            format!("G = {g} is off the RDP locus (tau = {})", a.channel.tau)
        })?;
        xs.push(g.log2());
        ys.push(a.capacity.q_lb);
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    ensure((slope - 1.0).abs() <= 0.01, || format!("slope {slope}"))?;
    Ok(format!("slope {slope:.6} over G in [1e3, 1e6]"))
}

fn bandwidth() -> Outcome {
    let cfg = SweepConfig::defaults(SweepMode::Bandwidth);
    let out = sweep::run_bandwidth(&cfg).map_err(err)?;
    let n = cfg.axis(AxisName::Omega).unwrap().points;
    let curve = |c: f64, assisted: bool| -> Result<(&[SweepRow], &sweep::BandwidthSummary), String> {
        let i = out
            .summary
            .iter()
            .position(|s| s.cooperativity == c && s.assisted == assisted)
            .ok_or_else(|| format!("no curve for cg = {c}"))?;
        Ok((&out.rows[i * n..(i + 1) * n], &out.summary[i]))
    };

    let (bare, _) = curve(0.2, false)?;
    ensure(bare.iter().all(|r| r.q_lb == 0.0), || "bare cg = 0.2 has positive capacity".into())?;
    let (assisted, s) = curve(0.2, true)?;
    let centre = assisted.iter().find(|r| r.omega == 0.0).ok_or("no omega = 0 point")?;
    ensure(centre.q_lb > 0.0 && s.positive_points > 1, || {
        format!("assisted Q(0) = {}, {} positive points", centre.q_lb, s.positive_points)
    })?;
    // The positive set is one contiguous band around resonance.
    let idx: Vec<usize> = (0..n).filter(|&k| assisted[k].q_lb > 0.0).collect();
    ensure(idx.windows(2).all(|w| w[1] == w[0] + 1), || "positive set is not contiguous".into())?;

    let mut widths = Vec::new();
    for c in [0.2, 0.5, 1.0] {
        let (b, sb) = curve(c, false)?;
        let (a, sa) = curve(c, true)?;
        ensure(sa.bandwidth >= sb.bandwidth, || format!("cg = {c}: {} < {}", sa.bandwidth, sb.bandwidth))?;
        let lost = b.iter().zip(a).filter(|(rb, ra)| rb.q_lb > 0.0 && !(ra.q_lb > 0.0)).count();
        ensure(lost == 0, || format!("cg = {c}: {lost} points positive only without squeezing"))?;
        widths.push(format!("cg={c}: {:.2} vs {:.2}", sa.bandwidth, sb.bandwidth));
    }
    Ok(format!("assisted vs bare bandwidth (kappa units) {}", widths.join(", ")))
}

fn thermal_ordering() -> Outcome {
    let temperatures = [0.0, 0.01, 0.3];
    let mut checked = 0;
    let mut worst_low = 0.0_f64;
    for thermal_probe in [false, true] {
        let runs = temperatures
            .iter()
            .map(|&t| {
                let mut cfg = SweepConfig::defaults(SweepMode::Grid);
                cfg.system.zeta_m = 0.999;
                cfg.system.zeta_a = 0.8;
                cfg.system.temperature = t;
                cfg.thermal_probe = thermal_probe;
                sweep::run_gg_grid(&cfg).map_err(err)
            })
            .collect::<Result<Vec<_>, _>>()?;
        for ((cold, low), hot) in runs[0].iter().zip(&runs[1]).zip(&runs[2]) {
            ensure(hot.q_lb <= low.q_lb && low.q_lb <= cold.q_lb, || {
                format!(
                    "G = {}, G' = {}: Q = {} / {} / {}",
                    cold.g, cold.gprime, cold.q_lb, low.q_lb, hot.q_lb
                )
            })?;
            worst_low = worst_low.max((low.q_lb - cold.q_lb).abs());
            checked += 1;
        }
    }
    let resonant = sweep::run_resonant(&SweepConfig::defaults(SweepMode::Resonant)).map_err(err)?;
    let by_curve = |z: f64, t: f64| -> Vec<f64> {
        let label = format!("zeta={z};T={t}");
        resonant.iter().filter(|r| r.curve == label).map(|r| r.q_lb).collect()
    };
    for z in [1.0, 0.95, 0.9] {
        let (a, b, c) = (by_curve(z, 0.0), by_curve(z, 0.01), by_curve(z, 0.3));
        for k in 0..a.len() {
            ensure(c[k] <= b[k] && b[k] <= a[k], || format!("resonant zeta = {z}, point {k}"))?;
            worst_low = worst_low.max((b[k] - a[k]).abs());
            checked += 1;
        }
    }
    ensure(worst_low <= 1e-6, || format!("|Q(0.01 K) - Q(0)| = {worst_low:e}"))?;
    Ok(format!("{checked} points ordered; max |Q(0.01 K) - Q(0)| = {worst_low:.1e} bits"))
}

fn determinism() -> Outcome {
    for mode in MODES {
        let cfg = fixture(mode);
        let first = render(&cfg);
        ensure(first == render(&cfg), || format!("{mode}: two runs differ"))?;
        let golden = std::fs::read(golden_path(mode)).map_err(|e| format!("{mode}: {e}"))?;
        ensure(first == golden, || format!("{mode}: output differs from golden file"))?;
    }
    Ok(format!("{} subcommands byte-identical across runs and against golden files", MODES.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("matched-point exactness", matched_point),
        ("threshold reproduction", threshold),
        ("oracle equivalence", oracle_equivalence),
        ("commutator conservation", commutator),
        ("pure-loss fixture", pure_loss_fixture),
        ("special-G' markers", markers),
        ("RDP continuity", rdp_continuity),
        ("log-linear RDP capacity", log_linear),
        ("bandwidth dominance", bandwidth),
        ("thermal ordering", thermal_ordering),
        ("determinism and schema", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
