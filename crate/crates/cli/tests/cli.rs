use std::path::PathBuf;
use std::process::{Command, Output};

const SUBCOMMANDS: [&str; 6] = ["resonant", "grid", "slice", "bandwidth", "boundary", "oracle-check"];

fn core_tests() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests")
}

fn eotx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eotx")).args(args).output().expect("spawn eotx")
}

fn with_fixture(sub: &str) -> Output {
    let config = core_tests().join("fixtures").join(format!("{sub}.toml"));
    eotx(&[sub, "--config", config.to_str().unwrap()])
}

#[test]
fn subcommands_reproduce_golden_files() {
    for sub in SUBCOMMANDS {
        let out = with_fixture(sub);
        assert!(out.status.success(), "{sub}: {}", String::from_utf8_lossy(&out.stderr));
        let golden = std::fs::read(core_tests().join("golden").join(format!("{sub}.csv"))).unwrap();
        assert!(out.stdout == golden, "{sub} differs from its golden file");
        assert_eq!(with_fixture(sub).stdout, out.stdout, "{sub} is not deterministic");
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let config = core_tests().join("fixtures/grid.toml");
    let out = eotx(&["grid", "--config", config.to_str().unwrap(), "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), with_fixture("grid").stdout);
}

#[test]
fn bandwidth_summary_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("summary.csv");
    let config = core_tests().join("fixtures/bandwidth.toml");
    let out = eotx(&["bandwidth", "--config", config.to_str().unwrap(), "--summary", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("#schema=eo-transducer/bandwidth-summary/1"));
    assert!(lines.next().unwrap().starts_with("curve,cg,assisted"));
    // One bare and one assisted curve per cooperativity.
    assert_eq!(lines.count(), 4);
}

#[test]
fn axis_flag_overrides_the_config() {
    let out = eotx(&["grid", "--axis", "g:0:20:3:db", "--axis", "gprime:1:10:4:linear"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2 + 12);
}

#[test]
fn bad_axis_is_a_usage_error() {
    let out = eotx(&["grid", "--axis", "g:0:20:db"]);
    assert_eq!(out.status.code(), Some(2));
    let out = eotx(&["grid", "--axis", "wavelength:0:1:3:linear"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[system]\ncooperativty = 0.5\n").unwrap();
    let out = eotx(&["grid", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cooperativty"));
}

#[test]
fn invalid_values_exit_with_2() {
    assert_eq!(eotx(&["grid", "--eta", "1.5"]).status.code(), Some(2));
    assert_eq!(eotx(&["resonant", "--temp", "-1"]).status.code(), Some(2));
    assert_eq!(eotx(&["slice", "--gprime", "5"]).status.code(), Some(0));
    assert_eq!(eotx(&["slice", "--vary", "gprime", "--gprime", "5"]).status.code(), Some(2));
}

#[test]
fn missing_config_file_exits_with_2() {
    let out = eotx(&["grid", "--config", "/nonexistent/eotx.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_1() {
    let out = eotx(&["resonant", "-o", "/nonexistent/dir/out.csv"]);
    assert_eq!(out.status.code(), Some(1));
}
