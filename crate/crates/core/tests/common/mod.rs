#![allow(dead_code)]

use std::path::PathBuf;

use eo_transducer::sweep::{self, SweepConfig, SweepMode};

pub const MODES: [SweepMode; 6] = [
    SweepMode::Resonant,
    SweepMode::Grid,
    SweepMode::Slice,
    SweepMode::Bandwidth,
    SweepMode::Boundary,
    SweepMode::OracleCheck,
];

pub fn tests_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

/// The small golden-file configuration of `mode`.
pub fn fixture(mode: SweepMode) -> SweepConfig {
    let path = tests_dir().join("fixtures").join(format!("{}.toml", mode.name()));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    SweepConfig::from_toml(mode, &text).unwrap()
}

pub fn golden_path(mode: SweepMode) -> PathBuf {
    tests_dir().join("golden").join(format!("{}.csv", mode.name()))
}

pub fn render(cfg: &SweepConfig) -> Vec<u8> {
    let mut buf = Vec::new();
    sweep::run_to_csv(cfg, &mut buf).unwrap();
    buf
}
