//! Command-line contract: exit codes, CSV layouts, record echo and replay.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use entropy_picture::cli::{RunConfig, RunRecord};
use entropy_picture::gravity::SourceDistribution;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entropy-picture"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str], extra: &[&Path]) -> Output {
    let mut c = bin();
    c.args(args);
    for p in extra {
        c.arg(p);
    }
    c.output().expect("spawn")
}

fn header(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string()
}

fn record(path: &Path) -> RunRecord {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn evolve_s_two_level_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let o = bin()
        .args(["evolve-s", "--config"])
        .arg(configs().join("two_level.json"))
        .arg("--out")
        .arg(&out)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(header(&out), "step,tau,norm,expect_S,re_0,im_0,re_1,im_1");
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 52);
    let rec = record(&dir.path().join("traj.record.json"));
    assert_eq!(rec.csv_format_version, 1);
    assert_eq!(rec.artifacts, vec!["traj.csv".to_string()]);
    assert!(rec.all_passed());
}

#[test]
fn headers_of_every_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let expect = [
        (
            "evolve-h",
            "evolve_h",
            "step,t,norm,expect_H,re_0,im_0,re_1,im_1",
        ),
        (
            "compare-pictures",
            "compare_pictures",
            "step,tau,t,deviation,norm_ratio",
        ),
        ("gravity", "gravity", "x,y,z,h"),
        (
            "onsager",
            "onsager",
            "step,tprime,y_0,y_1,y_2,y_3,entropy,entropy_rate",
        ),
        ("fluct", "fluct", "dp,dV,dT,dS"),
        ("stokes", "stokes", "resolution,area,boundary_action,gap"),
    ];
    for (sub, stem, head) in expect {
        let o = run(&[sub, "--out-dir"], &[dir.path()]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{sub}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert_eq!(
            header(&dir.path().join(format!("{stem}.csv"))),
            head,
            "{sub}"
        );
    }
    let cov: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("fluct.covariance.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(cov["n"], 100_000);
    for key in ["ds_dt_over_kBT", "ds_dtau_over_kB", "dT_dV"] {
        assert!(cov[key]["std_error"].as_f64().unwrap() > 0.0, "{key}");
    }
}

#[test]
fn malformed_config_exits_two_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"sede": 3}"#,
        r#"{"evolve_s": {"temperature": "hot"}}"#,
        r#"{"evolve_s": {"epsilon": -0.1, "gravity_x": 0.2}}"#,
        "{ not json",
    ];
    for (i, text) in cases.iter().enumerate() {
        let p = dir.path().join(format!("bad{i}.json"));
        std::fs::write(&p, text).unwrap();
        let o = bin()
            .args(["evolve-s", "--config"])
            .arg(&p)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(2), "{text}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains("configuration error"), "{text}: {err}");
    }
    let o = run(&["evolve-s", "--out-dir"], &[dir.path()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(
        &["evolve-s", "--config"],
        &[&dir.path().join("missing.json")],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scenario_mismatch_exits_two() {
    let o = run(
        &["gravity", "--config"],
        &[&configs().join("two_level.json")],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("overflow.json");
    std::fs::write(
        &p,
        r#"{"evolve_s": {"epsilon": -50, "tau_max": 100, "steps": 10}}"#,
    )
    .unwrap();
    let o = bin()
        .args(["evolve-s", "--config"])
        .arg(&p)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn invariant_failure_exits_four() {
    // 1000 fluctuation samples at this seed land just over three standard
    // errors: a genuine, reproducible statistical miss
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("small.json");
    std::fs::write(
        &p,
        r#"{"check_all": {"fluct_samples": 1000, "trials": 2, "dim": 4}}"#,
    )
    .unwrap();
    let o = bin()
        .args(["check-all", "--seed", "390", "--config"])
        .arg(&p)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    let rec = record(&dir.path().join("check_all.record.json"));
    assert!(!rec.all_passed());
    let csv = std::fs::read_to_string(dir.path().join("check_all.csv")).unwrap();
    assert!(csv.starts_with("name,measured,comparison,tolerance,passed\n"));
    assert!(csv.contains(",false\n"));

    // reporting never changes the verdict, only tabulates it
    let r = run(&["report"], &[&dir.path().join("check_all.record.json")]);
    assert_eq!(r.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&r.stdout).contains("FAIL"));
}

#[test]
fn echoed_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let o = bin()
        .args(["stokes", "--seed", "11", "--config"])
        .arg(configs().join("stokes_random.json"))
        .arg("--out-dir")
        .arg(&a)
        .output()
        .unwrap();
    assert!(o.status.success());
    let rec = record(&a.join("stokes.record.json"));
    assert_eq!(rec.config.seed, 11);
    let echo = dir.path().join("echo.json");
    std::fs::write(&echo, serde_json::to_string(&rec.config).unwrap()).unwrap();
    assert_eq!(RunConfig::load(&echo).unwrap(), rec.config);
    let b = dir.path().join("b");
    let o = bin()
        .args(["stokes", "--config"])
        .arg(&echo)
        .arg("--out-dir")
        .arg(&b)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(
        std::fs::read(a.join("stokes.csv")).unwrap(),
        std::fs::read(b.join("stokes.csv")).unwrap()
    );
    assert_eq!(
        record(&b.join("stokes.record.json")).deterministic_part(),
        rec.deterministic_part()
    );
}

#[test]
fn fluct_bytes_do_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    for w in ["1", "3"] {
        let o = bin()
            .args(["fluct", "--workers", w, "--config"])
            .arg(configs().join("fluct_ideal_gas.json"))
            .arg("--out-dir")
            .arg(dir.path().join(w))
            .output()
            .unwrap();
        assert!(o.status.success());
    }
    for f in ["fluct.csv", "fluct.covariance.json"] {
        assert_eq!(
            std::fs::read(dir.path().join("1").join(f)).unwrap(),
            std::fs::read(dir.path().join("3").join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn raw_lattice_source_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    let src = SourceDistribution::uniform_ball([0.0; 3], 0.4, 1.5, 12).unwrap();
    std::fs::create_dir(dir.path().join("lattice")).unwrap();
    src.write_raw(dir.path().join("lattice/ball.json")).unwrap();
    let cfg = dir.path().join("g.json");
    std::fs::write(
        &cfg,
        r#"{"scenario": "gravity", "gravity": {"source": {"kind": "raw", "header": "lattice/ball.json"},
            "region": {"shape": "shell", "center": [0, 0, 0], "radius": 2, "samples": 500},
            "probes": [[4, 0, 0]]}}"#,
    )
    .unwrap();
    let o = bin()
        .args(["gravity", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rec = record(&dir.path().join("gravity.record.json"));
    let m = src.total_mass();
    let x = rec.outputs["mean_h"].as_f64().unwrap();
    // exterior of a ball: h = 4M/r on the shell
    assert!((x / (2.0 * m) - 1.0).abs() < 1e-3, "{x} vs {}", 2.0 * m);

    let inside = dir.path().join("inside.json");
    std::fs::write(
        &inside,
        r#"{"gravity": {"source": {"kind": "raw", "header": "lattice/ball.json"}, "probes": [[0, 0, 0]]}}"#,
    )
    .unwrap();
    let o = bin()
        .args(["gravity", "--config"])
        .arg(&inside)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_rejects_non_records() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.json");
    std::fs::write(&p, "{}").unwrap();
    assert_eq!(run(&["report"], &[&p]).status.code(), Some(2));
    assert_eq!(run(&["report"], &[]).status.code(), Some(2));
}
