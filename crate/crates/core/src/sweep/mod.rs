//! Parameter sweeps behind the `eotx` CLI.
//!
//! A [`SweepConfig`] picks a mode and its grid; the runners in [`run`] and
//! [`check`] evaluate it and [`output`] writes the CSV tables.

pub mod axis;
pub mod check;
pub mod config;
pub mod output;
pub mod row;
pub mod run;

pub use axis::{AxisName, AxisSpec, Spacing};
pub use check::{run_oracle_check, CheckRow, Draw};
pub use config::{SqueezerAxis, SweepConfig, SweepMode, SystemSpec};
pub use row::{Marker, OperatingPoint, SweepRow};
pub use run::{
    run_bandwidth, run_boundary, run_gg_grid, run_resonant, run_slices, BandwidthOutput, BandwidthSummary,
    BoundaryPoint, BoundaryStatus, Edge,
};

use std::io::Write;

use crate::error::{Error, Result};

/// Runs `cfg` and writes its main table: the sweep rows, the boundary
/// points or the oracle-check draws. A failed oracle draw is reported as
/// [`Error::Invariant`] after the table has been written.
pub fn run_to_csv<W: Write>(cfg: &SweepConfig, out: W) -> Result<()> {
    match cfg.mode {
        SweepMode::Resonant => output::write_rows(out, "resonant", &run_resonant(cfg)?),
        SweepMode::Grid => output::write_rows(out, "grid", &run_gg_grid(cfg)?),
        SweepMode::Slice => output::write_rows(out, "slice", &run_slices(cfg)?),
        SweepMode::Bandwidth => output::write_rows(out, "bandwidth", &run_bandwidth(cfg)?.rows),
        SweepMode::Boundary => output::write_boundary(out, &run_boundary(cfg)?),
        SweepMode::OracleCheck => {
            let rows = run_oracle_check(cfg)?;
            output::write_check(out, &rows)?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            if failed > 0 {
                return Err(Error::Invariant(format!(
                    "{failed} of {} oracle draws disagree with the closed forms",
                    rows.len()
                )));
            }
            Ok(())
        }
    }
}
