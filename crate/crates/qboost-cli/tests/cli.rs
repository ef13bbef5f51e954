use std::process::{Command, Output};

fn qboost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qboost")).args(args).env_remove("QBOOST_PRECISION").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn metrics_json_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = qboost(&["metrics", "--q", "3/2", "--format", "json", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for f in ["metric_upper.json", "lorentz_r_plus.json", "report.json"] {
        assert!(dir.path().join(f).exists(), "{}", f);
    }
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert!(rep["entries"].as_array().is_some_and(|e| !e.is_empty()));
}

#[test]
fn metrics_classical_minkowski() {
    let o = qboost(&["metrics", "--q", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let block = out.split("\nmetric_upper:\n").nth(1).unwrap();
    let rows: Vec<&str> = block.lines().take(4).map(str::trim).collect();
    assert!(rows[0].starts_with("-1.000000"));
    for (i, r) in rows.iter().enumerate().skip(1) {
        let cells: Vec<&str> = r.split_whitespace().collect();
        assert_eq!(cells[i], "1.000000");
    }
}

#[test]
fn metrics_rejects_zero_q() {
    let o = qboost(&["metrics", "--q", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("q must be positive"));
}

#[test]
fn rep_vz_half() {
    let o = qboost(&["rep", "--l", "1/2", "--q", "2", "--generator", "Vz"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("0.441176"), "{}", out);
}

#[test]
fn rep_scalar_block() {
    let o = qboost(&["rep", "--l", "0", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("gamma = 1.000000000000"));
}

#[test]
fn rep_above_lmax_is_usage_error() {
    let o = qboost(&["rep", "--l", "5", "--q", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cg_half_half() {
    let o = qboost(&["cg", "--l2", "1/2", "--l1", "1/2", "--q", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("1,0,1/2,-1/2,") && out.contains(",1,5\n"), "{}", out);
    assert!(out.contains(",4,5\n"));
}

#[test]
fn cg_half_one_dimension() {
    let o = qboost(&["cg", "--l2", "1/2", "--l1", "1", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dimension 6 = 4 + 2"));
}

#[test]
fn cg_at_one_needs_limit() {
    let o = qboost(&["cg", "--l2", "1/2", "--l1", "1/2", "--q", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--limit"));
    let o = qboost(&["cg", "--l2", "1/2", "--l1", "1/2", "--q", "1", "--limit"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0.707106781187"));
}

#[test]
fn verify_at_one_skips_coupling() {
    let o = qboost(&["verify", "--q-samples", "1", "--lmax", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("SKIPPED(q=1)"));
}

#[test]
fn strict_literal_fails() {
    let o = qboost(&["verify", "--q-samples", "2", "--lmax", "1", "--strict-literal"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("eq77-79 ket labels"));
}

#[test]
fn tables_literal_flags_kets() {
    let o = qboost(&["tables", "--q", "2", "--variant", "literal"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("EXPECTED-DEVIATION") && l.contains("eq79")));
}

#[test]
fn tables_missing_golden_dir() {
    let dir = tempfile::tempdir().unwrap();
    let o = qboost(&["tables", "--q", "2", "--golden-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tables_normalization_sums() {
    let o = qboost(&["tables", "--q", "2", "--check-normalization"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let sums: Vec<&str> = out.lines().filter(|l| l.contains("sum of squares")).map(|l| l.rsplit(' ').next().unwrap()).collect();
    assert!(!sums.is_empty() && sums.iter().all(|s| *s == "1"));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# run\nq = 5/4\nl = 1\nformat = json\n").unwrap();
    let o = qboost(&["rep", "--config", cfg.to_str().unwrap(), "--q", "2", "--suite", "none"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    std::fs::write(&cfg, "colour = red\n").unwrap();
    let o = qboost(&["metrics", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = qboost(&["cg", "--l2", "1", "--l1", "1/2", "--q", "5/4", "--format", "json", "--out", d.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(!names.is_empty());
    for n in names {
        assert_eq!(std::fs::read(a.path().join(&n)).unwrap(), std::fs::read(b.path().join(&n)).unwrap(), "{:?}", n);
    }
}
