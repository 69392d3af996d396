use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use w2eit::oracle::alpha_grid_search;
use w2eit::PeriodicDensity;

fn w2eit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_w2eit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_value(out: &Output, key: &str) -> f64 {
    let text = String::from_utf8_lossy(&out.stdout);
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(|v| v.trim().parse().unwrap()))
        .unwrap_or_else(|| panic!("no '{key}' in output:\n{text}"))
}

fn write_density(path: &Path, values: &[f64]) {
    let body: Vec<String> = values.iter().map(|v| format!("{v:.17e}")).collect();
    fs::write(path, body.join("\n")).unwrap();
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn identical_densities_have_zero_distance() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.csv");
    let vals: Vec<f64> = (0..256).map(|i| 1.0 + 0.4 * (2.0 * PI * i as f64 / 256.0).cos()).collect();
    write_density(&f, &vals);
    let out = w2eit(&["w2", "--f", p(&f), "--g", p(&f)]);
    assert!(out.status.success());
    assert_eq!(stdout_value(&out, "w2_squared"), 0.0);
}

#[test]
fn w2_matches_grid_search_oracle() {
    let n = 4096;
    let dir = tempfile::tempdir().unwrap();
    let (fp, gp, jp) = (dir.path().join("f.csv"), dir.path().join("g.csv"), dir.path().join("sol.json"));
    let fv: Vec<f64> = (0..n)
        .map(|i| {
            let t = (i as f64 + 0.5) / n as f64;
            1.0 + 0.6 * (2.0 * PI * t).sin() + 0.2 * (6.0 * PI * t).cos()
        })
        .collect();
    let gv: Vec<f64> = (0..n)
        .map(|i| {
            let t = (i as f64 + 0.5) / n as f64;
            1.0 + 0.5 * (2.0 * PI * (t - 0.3)).cos()
        })
        .collect();
    write_density(&fp, &fv);
    write_density(&gp, &gv);
    let out = w2eit(&["w2", "--f", p(&fp), "--g", p(&gp), "--json-out", p(&jp)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let w2 = stdout_value(&out, "w2_squared");
    let alpha = stdout_value(&out, "alpha_star");

    let (fd, gd) = (PeriodicDensity::new(fv).unwrap(), PeriodicDensity::new(gv).unwrap());
    let (oa, ow2) = alpha_grid_search(&fd, &gd, 1_000_000).unwrap();
    assert!((w2 - ow2).abs() <= 1e-6, "cli {w2} oracle {ow2}");
    assert!((alpha - oa).abs() <= 1e-4, "cli {alpha} oracle {oa}");

    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&jp).unwrap()).unwrap();
    assert_eq!(json["w2_squared"].as_f64().unwrap(), w2);
    assert_eq!(json["alpha_star"].as_f64().unwrap(), alpha);
}

#[test]
fn invalid_density_exits_with_input_code() {
    let dir = tempfile::tempdir().unwrap();
    let (fp, gp) = (dir.path().join("f.csv"), dir.path().join("g.csv"));
    write_density(&fp, &[1.0, 1.0, 1.0, 1.0]);
    write_density(&gp, &[1.0, 0.0, 1.0, 1.0]);
    let out = w2eit(&["w2", "--f", p(&fp), "--g", p(&gp)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2"));

    let missing = w2eit(&["w2", "--f", p(&fp), "--g", "/nonexistent/g.csv"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn bench_validates_sizes() {
    assert_eq!(w2eit(&["bench", "--sizes"]).status.code(), Some(2));
    assert_eq!(w2eit(&["bench", "--sizes", "512,256"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = w2eit(&["bench", "--sizes", "128", "--repeats", "2", "--csv-out", p(&csv)]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("128,"));
}

#[test]
fn invert_with_constant_truth_stays_near_truth() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.txt");
    fs::write(&cfg, "misfit = w2\ni_max = 5\n").unwrap();
    let out_dir = dir.path().join("run");
    let out = w2eit(&["invert", "--config", p(&cfg), "--truth", "preset:constant", "--out", p(&out_dir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_value(&out, "final_relative_error") < 1e-2);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert!(summary["initial_value"].as_f64().unwrap() < 1e-4);
    assert!(!out_dir.join("FAILED").exists());

    let again = w2eit(&["invert", "--config", p(&cfg), "--truth", "preset:constant", "--out", p(&out_dir)]);
    assert_eq!(again.status.code(), Some(2), "non-empty output directory is refused");
}

#[test]
fn noisy_inversion_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.txt");
    fs::write(&cfg, "misfit = w2\ni_max = 8\neps = 0.01\nseed = 11\n").unwrap();
    let mut traces = Vec::new();
    for k in 0..2 {
        let out_dir = dir.path().join(format!("run{k}"));
        let out = w2eit(&["invert", "--config", p(&cfg), "--truth", "preset:disk", "--out", p(&out_dir)]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        traces.push(fs::read(out_dir.join("trace.json")).unwrap());
    }
    assert_eq!(traces[0], traces[1]);
}

#[test]
fn invert_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.txt");
    fs::write(&cfg, "misfit = w3\n").unwrap();
    let out = w2eit(&["invert", "--config", p(&cfg), "--truth", "preset:disk", "--out", p(&dir.path().join("r"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}
