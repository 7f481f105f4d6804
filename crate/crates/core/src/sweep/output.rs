//! CSV output.
//!
//! Every table starts with one `#schema=eo-transducer/<table>/<version>` line
//! followed by a header row. Floats are written as `{:.16e}`, which round-trips
//! an `f64` exactly; missing values are empty fields.

use std::io::Write;

use crate::error::{Error, Result};

use super::check::CheckRow;
use super::run::{BandwidthSummary, BoundaryPoint};
use super::row::SweepRow;

pub const SCHEMA_VERSION: u32 = 1;

fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn write_table<W: Write>(mut out: W, table: &str, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    writeln!(out, "#schema=eo-transducer/{table}/{SCHEMA_VERSION}").map_err(io_err)?;
    let mut w = csv::WriterBuilder::new().from_writer(out);
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(&row).map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    Ok(())
}

pub const ROW_HEADER: &[&str] = &[
    "curve", "cg", "zeta_m", "zeta_a", "omega", "temperature", "g", "g_db", "gprime", "eta", "kappa_p",
    "kappa_em", "kappa_ea", "tau", "c_p", "c_a", "l_m", "l_a", "kind", "special", "n_e", "sigma2", "q_lb",
    "q_raw", "clamped", "marker",
];

fn row_record(r: &SweepRow) -> Vec<String> {
    vec![
        r.curve.clone(),
        float(r.cooperativity),
        float(r.zeta_m),
        float(r.zeta_a),
        float(r.omega),
        float(r.temperature),
        float(r.g),
        float(10.0 * r.g.log10()),
        float(r.gprime),
        float(r.eta),
        float(r.kappa_p),
        float(r.kappa_em),
        float(r.kappa_ea),
        float(r.tau),
        float(r.c_p),
        float(r.c_a),
        float(r.l_m),
        float(r.l_a),
        r.kind.label().into(),
        r.special.map(|s| s.label()).unwrap_or_default().into(),
        opt(r.n_e),
        opt(r.sigma2),
        float(r.q_lb),
        float(r.q_raw),
        r.clamped.to_string(),
        r.marker.map(|m| m.label()).unwrap_or_default().into(),
    ]
}

/// Writes sweep rows under the given table name (`resonant`, `grid`, ...).
pub fn write_rows<W: Write>(out: W, table: &str, rows: &[SweepRow]) -> Result<()> {
    write_table(out, table, ROW_HEADER, rows.iter().map(row_record))
}

pub const BANDWIDTH_SUMMARY_HEADER: &[&str] = &[
    "curve", "cg", "assisted", "g", "gprime", "positive_points", "step", "bandwidth", "q_peak", "q_center",
];

pub fn write_bandwidth_summary<W: Write>(out: W, summary: &[BandwidthSummary]) -> Result<()> {
    write_table(
        out,
        "bandwidth-summary",
        BANDWIDTH_SUMMARY_HEADER,
        summary.iter().map(|s| {
            vec![
                s.curve.clone(),
                float(s.cooperativity),
                s.assisted.to_string(),
                float(s.g),
                opt(s.gprime),
                s.positive_points.to_string(),
                float(s.step),
                float(s.bandwidth),
                float(s.q_peak),
                float(s.q_center),
            ]
        }),
    )
}

pub const BOUNDARY_HEADER: &[&str] = &["curve", "g", "g_db", "edge", "gprime", "q_raw", "status"];

pub fn write_boundary<W: Write>(out: W, points: &[BoundaryPoint]) -> Result<()> {
    write_table(
        out,
        "boundary",
        BOUNDARY_HEADER,
        points.iter().map(|p| {
            vec![
                p.curve.clone(),
                float(p.g),
                float(10.0 * p.g.log10()),
                p.edge.map(|e| e.label()).unwrap_or_default().into(),
                opt(p.gprime),
                opt(p.q_raw),
                p.status.label().into(),
            ]
        }),
    )
}

pub const CHECK_HEADER: &[&str] = &[
    "index", "cg", "zeta_m", "zeta_a", "omega", "temperature", "g", "gprime", "kind", "oracle_kind",
    "relative_deviation", "q_analytic", "q_oracle", "q_difference", "pass",
];

pub fn write_check<W: Write>(out: W, rows: &[CheckRow]) -> Result<()> {
    write_table(
        out,
        "oracle-check",
        CHECK_HEADER,
        rows.iter().map(|r| {
            let d = &r.draw;
            vec![
                r.index.to_string(),
                float(d.cooperativity),
                float(d.zeta_m),
                float(d.zeta_a),
                float(d.omega),
                float(d.temperature),
                float(d.g),
                float(d.gprime),
                r.kind.label().into(),
                r.oracle_kind.label().into(),
                float(r.relative_deviation),
                float(r.q_analytic),
                float(r.q_oracle),
                float(r.q_difference),
                r.pass.to_string(),
            ]
        }),
    )
}
