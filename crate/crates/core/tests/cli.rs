mod support;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lizard_ca::cli::{run_pipeline, run_pipeline_with_initial, RunConfig, SnapshotSource};
use lizard_ca::{
    render, Boundary, Field, LatticeSpec, QuadNeighborhood, RenderConfig, Termination,
};

use support::parse_trace_csv;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lizard-ca"))
        .args(args)
        .output()
        .unwrap()
}

fn config(lattice: LatticeSpec, seed: u64, out: &Path) -> RunConfig {
    RunConfig {
        out_dir: out.to_path_buf(),
        ..RunConfig::new(lattice, seed)
    }
}

#[test]
fn help_exits_zero() {
    let out = cli(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for flag in [
        "--lattice",
        "--boundary",
        "--quad-neighborhood",
        "--p1",
        "--probs",
        "--snapshots",
        "--cell-px",
    ] {
        assert!(text.contains(flag), "help is missing {flag}");
    }
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["--frobnicate"][..],
        &[
            "--lattice",
            "hex",
            "--height",
            "99",
            "--boundary",
            "periodic",
        ],
        &["--snapshots", "0,11"],
    ] {
        let out = cli(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn io_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, b"x").unwrap();
    let out_dir = blocker.join("sub");
    let out = cli(&[
        "--width",
        "10",
        "--height",
        "10",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn hex_pipeline_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = cli(&[
        "--lattice",
        "hex",
        "--width",
        "100",
        "--height",
        "100",
        "--seed",
        "42",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    for name in [
        "pattern_A0000.pgm",
        "pattern_A0001.pgm",
        "pattern_A0002.pgm",
        "pattern_A0010.pgm",
        "trace.csv",
        "run.txt",
    ] {
        assert!(out.join(name).is_file(), "{name} missing");
    }
    let rows = parse_trace_csv(&fs::read(out.join("trace.csv")).unwrap());
    assert!(!rows.is_empty() && rows.len() <= 10);
    let summary = fs::read_to_string(out.join("run.txt")).unwrap();
    assert!(summary.contains("seed: 42"));
    assert!(summary.contains("prng: ChaCha8"));
}

#[test]
fn initial_snapshot_matches_direct_render() {
    let dir = tempfile::tempdir().unwrap();
    let lat = LatticeSpec::quadratic(30, 20, Boundary::Clamped, QuadNeighborhood::Moore8).unwrap();
    let cfg = config(lat, 9, dir.path());
    run_pipeline(&cfg).unwrap();
    let f = Field::random(lat, &cfg.init);
    let expected = render(&f, &RenderConfig::new(cfg.cell_px, 2))
        .unwrap()
        .to_pgm();
    assert_eq!(
        fs::read(dir.path().join("pattern_A0000.pgm")).unwrap(),
        expected
    );
    // quadratic rasters are cell_px times the lattice size
    assert!(expected.starts_with(b"P5\n180 120\n255\n"));
}

#[test]
fn uniform_start_is_a_fixed_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&[
        "--p1",
        "0",
        "--width",
        "20",
        "--height",
        "20",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = parse_trace_csv(&fs::read(dir.path().join("trace.csv")).unwrap());
    assert_eq!(rows, vec![(1, 0, 0)]);
    let csv = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(csv.contains("# termination=fixed_point at_action=1\n"));
    let summary = fs::read_to_string(dir.path().join("run.txt")).unwrap();
    assert!(summary.contains("termination: fixed_point at_action=1"));
    assert!(summary.contains("substituted_snapshot: A=10 uses fixed point reached at action 1"));
    // past the fixed point the same field is written
    let a1 = fs::read(dir.path().join("pattern_A0001.pgm")).unwrap();
    assert_eq!(fs::read(dir.path().join("pattern_A0002.pgm")).unwrap(), a1);
    assert_eq!(fs::read(dir.path().join("pattern_A0010.pgm")).unwrap(), a1);
}

#[test]
fn injected_checkerboard_reports_two_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let lat =
        LatticeSpec::quadratic(10, 10, Boundary::Periodic, QuadNeighborhood::VonNeumann4).unwrap();
    let mut cfg = config(lat, 0, dir.path());
    cfg.snapshots = [0, 1, 2, 7, 10].into();
    let summary = run_pipeline_with_initial(&cfg, Field::checkerboard(lat)).unwrap();
    assert_eq!(
        summary.termination,
        Termination::Cycle {
            period: 2,
            first_detected_at: 2
        }
    );
    assert_eq!(
        summary.snapshots[&7],
        SnapshotSource::CyclePhase {
            period: 2,
            first_detected_at: 2
        }
    );
    let text = fs::read_to_string(dir.path().join("run.txt")).unwrap();
    assert!(text.contains("termination: cycle period=2 first_detected_at=2"));
    assert!(text.contains("initial_field: injected"));
    let read = |a: usize| fs::read(dir.path().join(format!("pattern_A{a:04}.pgm"))).unwrap();
    assert_ne!(read(0), read(1));
    assert_eq!(read(0), read(2));
    assert_eq!(read(0), read(10));
    assert_eq!(read(1), read(7));
    let rows = parse_trace_csv(&fs::read(dir.path().join("trace.csv")).unwrap());
    assert_eq!(rows, vec![(1, 100, 100), (2, 100, 200)]);
}

#[test]
fn injected_field_must_match_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let lat =
        LatticeSpec::quadratic(10, 10, Boundary::Periodic, QuadNeighborhood::VonNeumann4).unwrap();
    let other =
        LatticeSpec::quadratic(10, 8, Boundary::Periodic, QuadNeighborhood::VonNeumann4).unwrap();
    let cfg = config(lat, 0, dir.path());
    assert!(run_pipeline_with_initial(&cfg, Field::checkerboard(other)).is_err());
}

#[test]
fn multi_state_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&[
        "--lattice",
        "quad",
        "--states",
        "3",
        "--probs",
        "0.3,0.3,0.4",
        "--width",
        "24",
        "--height",
        "16",
        "--cell-px",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let pgm = fs::read(dir.path().join("pattern_A0000.pgm")).unwrap();
    let header = b"P5\n48 32\n255\n";
    assert!(pgm.starts_with(header));
    assert!(pgm[header.len()..]
        .iter()
        .all(|p| [0, 128, 255].contains(p)));
}
