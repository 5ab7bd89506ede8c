use std::path::Path;
use std::process::{Command, Output};

const SCENARIO: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/pursuit_saccades_blink.json");

fn evio(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evio")).args(args).output().expect("spawn evio")
}

fn ok(args: &[&str]) -> String {
    let out = evio(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn perfect_prediction_scores_zero() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("rec");
    ok(&["simulate", "--scenario", SCENARIO, "--out", p(&rec)]);
    for f in ["events.csv", "events.bin", "labels.csv"] {
        assert!(rec.join(f).is_file(), "{f} missing");
    }
    // labels double as a trajectory once the blink column is dropped
    let labels = std::fs::read_to_string(rec.join("labels.csv")).unwrap();
    let traj: String = labels
        .lines()
        .map(|l| l.rsplit_once(',').unwrap().0)
        .map(|l| format!("{l}\n"))
        .collect();
    let pred = dir.path().join("truth.csv");
    std::fs::write(&pred, traj).unwrap();
    let report = dir.path().join("report.csv");
    let stdout = ok(&["evaluate", "--pred", p(&pred), "--labels", p(&rec.join("labels.csv")), "--report", p(&report)]);
    assert!(stdout.lines().nth(1).unwrap().contains(" 0.0000 "), "{stdout}");
    let csv = std::fs::read_to_string(report).unwrap();
    assert_eq!(csv.lines().nth(1).unwrap(), "truth,0.0000,1.0000,1.0000,1.0000,482");
}

#[test]
fn csv_and_bin_agree() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("rec");
    ok(&["simulate", "--scenario", SCENARIO, "--out", p(&rec)]);
    let back = dir.path().join("back.bin");
    ok(&["convert", "--input", p(&rec.join("events.csv")), "--output", p(&back)]);
    assert_eq!(std::fs::read(back).unwrap(), std::fs::read(rec.join("events.bin")).unwrap());
    let csv = dir.path().join("back.csv");
    ok(&["convert", "--input", p(&rec.join("events.bin")), "--output", p(&csv)]);
    assert_eq!(std::fs::read(csv).unwrap(), std::fs::read(rec.join("events.csv")).unwrap());
}

#[test]
fn directory_of_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let scenarios = dir.path().join("scenarios");
    std::fs::create_dir(&scenarios).unwrap();
    let text = std::fs::read_to_string(SCENARIO).unwrap();
    std::fs::write(scenarios.join("a.json"), &text).unwrap();
    std::fs::write(scenarios.join("b.json"), &text).unwrap();
    let out = dir.path().join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_evio"))
        .args(["simulate", "--scenario", p(&scenarios), "--out", p(&out), "--seed", "7"])
        .env("EVIO_THREADS", "2")
        .status()
        .unwrap();
    assert!(status.success());
    let a = std::fs::read(out.join("a/events.bin")).unwrap();
    assert_eq!(a, std::fs::read(out.join("b/events.bin")).unwrap());
}

#[test]
fn pipeline_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let rec = d.join("rec");
    ok(&["simulate", "--scenario", SCENARIO, "--out", p(&rec)]);
    let (ev, lb) = (rec.join("events.bin"), rec.join("labels.csv"));
    ok(&["augment", "--events", p(&ev), "--labels", p(&lb), "--out", p(&d.join("aug")), "--shift-us", "-30000", "--flip-v"]);
    let aug_labels = std::fs::read_to_string(d.join("aug/labels.csv")).unwrap();
    assert_eq!(aug_labels.lines().count(), 1 + 497);
    ok(&["track", "--events", p(&ev), "--labels", p(&lb), "--out", p(&d.join("centroid.csv"))]);
    ok(&[
        "track", "--tracker", "linear", "--epochs", "50", "--events", p(&ev), "--labels", p(&lb),
        "--out", p(&d.join("linear.csv")), "--model-out", p(&d.join("model.csv")),
    ]);
    ok(&["track", "--tracker", "linear", "--model", p(&d.join("model.csv")), "--events", p(&ev), "--labels", p(&lb), "--out", p(&d.join("again.csv"))]);
    assert_eq!(std::fs::read(d.join("linear.csv")).unwrap(), std::fs::read(d.join("again.csv")).unwrap());
    ok(&[
        "postprocess", "--pred", p(&d.join("centroid.csv")), "--events", p(&ev), "--m2f", "--ofe", "--blink-override",
        "--method", "acceleration", "--out", p(&d.join("post.csv")),
    ]);
    ok(&["report", "--pred", p(&d.join("centroid.csv")), p(&d.join("post.csv")), "--labels", p(&lb), "--out", p(&d.join("rep"))]);
    let svg = std::fs::read_to_string(d.join("rep/trajectory.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
    let report = std::fs::read_to_string(d.join("rep/report.csv")).unwrap();
    assert_eq!(report.lines().count(), 3);
    ok(&["dump", "--events", p(&ev), "--labels", p(&lb), "--out", p(&d.join("frames")), "--channel", "neg", "--downsample", "2"]);
    let frame = std::fs::read_to_string(d.join("frames/frame_000000.csv")).unwrap();
    assert_eq!(frame.lines().count(), 30);
    assert_eq!(frame.lines().next().unwrap().split(',').count(), 40);
}

#[test]
fn usage_and_io_errors() {
    let out = evio(&["evaluate", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = evio(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = evio(&["evaluate", "--pred", "/nonexistent/p.csv", "--labels", "/nonexistent/l.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/l.csv"));
    let out = evio(&["postprocess", "--pred", "x.csv", "--out", "y.csv", "--ofe"]);
    assert_eq!(out.status.code(), Some(1));
}
