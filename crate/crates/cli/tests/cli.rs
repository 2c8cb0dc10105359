use std::fs;
use std::process::{Command, Output};

use canoma_core::harness::{read_csv, read_json, CSV_HEADER};

fn canoma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canoma"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_report() {
    let o = canoma(&["eval", "--samples", "2000"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(
        text.contains("b1 = 0.0375  b2 = 0.15  b21 = 0.15"),
        "{text}"
    );
    assert!(text.contains("0.0396872537"), "{text}");
    assert!(text.contains("empirical"));
}

#[test]
fn eval_infeasible_split() {
    let o = canoma(&["eval", "--a", "0.3", "--samples", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("SIC infeasible"), "{text}");
    assert!(text.contains("b21 = infeasible"));
}

#[test]
fn sweep_writes_csv_to_stdout() {
    let o = canoma(&["sweep-a", "--samples", "1000", "--grid-points", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some(CSV_HEADER.join(",").as_str()));
    let rows = read_csv(&text).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows
        .iter()
        .all(|r| r.scheme == "CA-NOMA" && r.n_samples == Some(1000)));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# coarse snr grid\nexperiment = sweep-snr\nsamples = 0\ngrid_start = 10\ngrid_stop = 30\ngrid_points = 5\nbeta = 1\n",
    )
    .unwrap();
    let out = dir.path().join("rows.json");
    let o = canoma(&[
        "sweep-snr",
        "--config",
        cfg.to_str().unwrap(),
        "--beta",
        "2",
        "--grid-points",
        "3",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let doc = read_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.rows.len(), 9);
    assert!(doc
        .rows
        .iter()
        .all(|r| r.beta == 2.0 && r.p_empirical.is_none()));
    assert_eq!(doc.config["grid"]["points"], 3);
    assert_eq!(doc.config["grid"]["start"], 10.0);
    let oma20 = &doc.rows[5];
    assert_eq!(oma20.scheme, "OMA");
    assert!((oma20.p_analytic.unwrap() - 0.139_292).abs() < 1e-6);
}

#[test]
fn malformed_config_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "samples = 10\nthis line has no separator\n").unwrap();
    let out = dir.path().join("rows.csv");
    let o = canoma(&[
        "sweep-a",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn missing_config_exits_2() {
    let o = canoma(&["eval", "--config", "/nonexistent/canoma.cfg"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_for_other_experiment_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "experiment = sweep-a\n").unwrap();
    let o = canoma(&["eval", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_flag_values_exit_2() {
    for args in [
        &["eval", "--beta", "two"][..],
        &["eval", "--scheme", "TDMA"],
        &["eval", "--format", "xml"],
        &["sweep-a", "--grid-start", "0.3", "--grid-stop", "0.1"],
        &["eval", "--streams", "0"],
        &["eval", "--bogus", "1"],
    ] {
        assert_eq!(canoma(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    for args in [
        &["eval", "--a", "1.5", "--samples", "0"][..],
        &["eval", "--beta", "-1", "--samples", "0"],
        &[
            "sweep-a",
            "--grid-start",
            "0.5",
            "--grid-stop",
            "1.5",
            "--samples",
            "0",
        ],
        &[
            "sweep-amin",
            "--grid-start",
            "-30",
            "--grid-stop",
            "0",
            "--samples",
            "0",
            "--out",
            out.to_str().unwrap(),
        ],
    ] {
        assert_eq!(canoma(args).status.code(), Some(3), "{args:?}");
    }
    assert!(!out.exists());
}

#[test]
fn reruns_are_byte_identical_across_streams() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (k, streams) in ["1", "4", "4"].iter().enumerate() {
        let out = dir.path().join(format!("run{k}.csv"));
        let o = canoma(&[
            "sweep-a",
            "--samples",
            "5000",
            "--grid-points",
            "6",
            "--seed",
            "99",
            "--streams",
            streams,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        files.push(fs::read(&out).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[1], files[2]);
}

#[test]
fn sweep_row_seed_reproduces_with_eval() {
    let o = canoma(&[
        "sweep-a",
        "--samples",
        "3000",
        "--grid-points",
        "5",
        "--seed",
        "11",
    ]);
    let rows = read_csv(&stdout(&o)).unwrap();
    let r = &rows[3];
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("point.csv");
    let a = r.a.unwrap().to_string();
    let seed = r.seed.unwrap().to_string();
    let o = canoma(&[
        "eval",
        "--a",
        &a,
        "--samples",
        "3000",
        "--seed",
        &seed,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let again = read_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(again[0].p_empirical, r.p_empirical);
    assert_eq!(again[0].seed, r.seed);
}
