use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chronohurst"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn report_writes_the_file_set() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = run(&["report", "--fixture", "patents", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for name in ["report.json", "che.csv", "clean.csv"] {
        assert!(out.join(name).is_file(), "{name}");
        assert!(stdout(&o).contains(name));
    }
    let che = std::fs::read_to_string(out.join("che.csv")).unwrap();
    assert_eq!(che.lines().count(), 1 + 449);
}

#[test]
fn short_series_without_cleaning_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("short.csv");
    let rows: String = (1..=10)
        .map(|m| format!("2021-{m:02},{}\n", 40 + m % 3))
        .collect();
    std::fs::write(&csv, format!("date,value\n{rows}")).unwrap();
    let o = run(&[
        "report",
        "--input",
        path(&csv),
        "--clean",
        "off",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("insufficient data"), "{}", stderr(&o));
    assert!(stderr(&o).contains("stage"), "{}", stderr(&o));
}

#[test]
fn malformed_input_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("gap.csv");
    std::fs::write(&csv, "date,value\n1977-09,2669\n1977-11,2552\n").unwrap();
    let o = run(&["stats", "--input", path(&csv)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse stage"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_with_one() {
    let cases: [&[&str]; 5] = [
        &["frobnicate"],
        &["stats", "--fixture", "copyrights"],
        &["stats", "--fixture", "patents", "--min-window", "12"],
        &["stats", "--fixture", "patents", "--input", "x.csv"],
        &["stats"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        "# lab defaults\nfixture = trademarks\nmin_window = 30\nmethod = dfa\n",
    )
    .unwrap();

    let o = run(&["che", "--config", path(&cfg)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1 + 472 - 30 + 1);

    let o = run(&["hurst", "--config", path(&cfg), "--method", "rs"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["method"], "rs");
    let o = run(&["hurst", "--config", path(&cfg)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["method"], "dfa");

    std::fs::write(&cfg, "fixture = trademarks\ncolour = blue\n").unwrap();
    assert_eq!(
        run(&["stats", "--config", path(&cfg)]).status.code(),
        Some(1)
    );
}

#[test]
fn battery_families_select_sections() {
    let o = run(&[
        "battery",
        "--fixture",
        "trademarks",
        "--family",
        "seasonality",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, ["seasonality"]);
    assert_eq!(v["seasonality"].as_array().unwrap().len(), 4);

    let o = run(&["battery", "--fixture", "patents"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["integration_order"], 1);
    assert_eq!(v["verdicts"]["non_linear"], true);
}

#[test]
fn clean_and_segment_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["clean", "--fixture", "patents", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["replacements"].as_array().unwrap().len(), 4);
    assert!(dir.path().join("clean.csv").is_file());

    let o = run(&[
        "clean",
        "--fixture",
        "patents",
        "--months",
        "1995-06,2013-03",
        "--out",
        path(dir.path()),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["replacements"].as_array().unwrap().len(), 2);
    assert_eq!(v["replacements"][0]["replacement"], 13041.0);

    let o = run(&["segment", "--fixture", "patents"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["p1_end"].as_str().unwrap() < v["p2_end"].as_str().unwrap());
}

#[test]
fn figures_from_saved_reports() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(run(&["report", "--fixture", "patents", "--out", path(&a)])
        .status
        .success());
    assert!(
        run(&["report", "--fixture", "trademarks", "--out", path(&b)])
            .status
            .success()
    );
    let figs = dir.path().join("figs");
    let ra = a.join("report.json");
    let rb = b.join("report.json");

    let o = run(&[
        "figures",
        "--report",
        path(&ra),
        "--report",
        path(&rb),
        "--out",
        path(&figs),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for name in ["fig_patents.svg", "fig_trademarks.svg", "fig_compare.svg"] {
        assert!(figs.join(name).is_file(), "{name}");
    }

    let o = run(&[
        "figures",
        "--report",
        path(&ra),
        "--compare",
        "--out",
        path(&figs),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("requires two reports"));
}

#[test]
fn simulate_fgn_is_seeded() {
    let a = run(&["simulate-fgn", "--h", "0.7", "--n", "128", "--seed", "9"]);
    let b = run(&["simulate-fgn", "--h", "0.7", "--n", "128", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().next(), Some("index,value"));
    assert_eq!(text.lines().count(), 129);

    let bad = run(&["simulate-fgn", "--h", "0.7", "--n", "100"]);
    assert_eq!(bad.status.code(), Some(2));
}
