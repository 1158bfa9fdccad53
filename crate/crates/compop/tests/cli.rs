use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use compop::cli::report::parse_spectrum_csv;

fn compop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_compop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn an_affine_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spectrum.csv");
    let o = compop(&[
        "an",
        "--symbol",
        "affine:r=0.5",
        "--N",
        "32",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{o:?}");
    let sp = parse_spectrum_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(sp.values.len(), 32);
    for n in 1..=32 {
        let want = 0.5f64.powi(n as i32);
        assert!((sp.a(n) - want).abs() <= 1e-12 * want);
    }
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("n,a_n,error_radius,certified\n1,0.5,"));
}

#[test]
fn malformed_symbol_exits_2_without_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = compop(&[
        "verify",
        "--check",
        "sandwich",
        "--symbol",
        "affine:r=",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let o = compop(&["an", "--N", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = compop(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn monte_carlo_requires_seed_and_is_deterministic() {
    let base = [
        "area",
        "--symbol",
        "cusp",
        "--t",
        "0.125",
        "--method",
        "mc",
        "--samples",
        "200000",
    ];
    let o = compop(&base);
    assert_eq!(o.status.code(), Some(2));
    let mut args = base.to_vec();
    args.extend(["--seed", "7"]);
    let (a, b) = (compop(&args), compop(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["result"]["method"], "monte-carlo");
    assert!(v["result"]["std_error"].as_f64().unwrap() > 0.0);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn exact_area_and_zinc() {
    let o = compop(&["area", "--symbol", "cusp", "--t", "0.015625"]);
    assert!(o.status.success());
    let v = json(&o);
    let t: f64 = 0.015625;
    let ratio = v["result"]["value"].as_f64().unwrap() / t.powi(3);
    assert!(ratio > 0.1 && ratio < 0.2, "{ratio}");
    let o = compop(&["zinc", "--symbol", "affine:r=0.5", "--n", "6"]);
    let v = json(&o);
    assert_eq!(v["result"]["value"].as_f64().unwrap(), 6.0 * 0.5f64.powi(6));
}

#[test]
fn verify_writes_artifacts_with_hash() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = compop(&[
        "verify",
        "--check",
        "sandwich",
        "--symbol",
        "affine:r=0.5",
        "--N",
        "48",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["result"][0]["check"], "sandwich");
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains(report["config_hash"].as_str().unwrap()));
    assert!(summary.contains("sandwich: PASS"));
    assert!(Path::new(&out.join("spectrum.csv")).exists());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "symbol = \"affine:r=0.3\"\nn = 10\n").unwrap();
    let c = cfg.to_str().unwrap();
    let a = parse_spectrum_csv(&stdout(&compop(&["an", "--config", c]))).unwrap();
    assert_eq!(a.values.len(), 10);
    assert!((a.a(1) - 0.3).abs() < 1e-15);
    let b = parse_spectrum_csv(&stdout(&compop(&[
        "an",
        "--config",
        c,
        "--symbol",
        "affine:r=0.6",
    ])))
    .unwrap();
    assert!((b.a(1) - 0.6).abs() < 1e-15);
    fs::write(&cfg, "symbol = \"cusp\"\nunknown_key = 1\n").unwrap();
    assert_eq!(compop(&["an", "--config", c]).status.code(), Some(2));
}

#[test]
fn fit_reads_spectrum_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    compop(&[
        "an",
        "--symbol",
        "affine:r=0.5",
        "--N",
        "40",
        "--out",
        out.to_str().unwrap(),
    ]);
    let o = compop(&[
        "fit",
        "--in",
        out.to_str().unwrap(),
        "--models",
        "geometric,rootn,nlogn",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["result"][0]["model"], "geometric");
    assert!((v["result"][0]["c"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-6);
    let short = dir.path().join("short.csv");
    compop(&[
        "an",
        "--symbol",
        "affine:r=0.5",
        "--N",
        "10",
        "--out",
        short.to_str().unwrap(),
    ]);
    let o = compop(&["fit", "--in", short.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn series_and_bound_calculus() {
    let o = compop(&[
        "series",
        "pow",
        "--symbol",
        "affine:r=0.5",
        "--k",
        "3",
        "--deg",
        "8",
    ]);
    let text = stdout(&o);
    assert!(
        text.lines().nth(4).unwrap().starts_with("3,0.125,"),
        "{text}"
    );
    let o = compop(&[
        "series", "pow", "--symbol", "cusp", "--k", "2", "--deg", "64",
    ]);
    assert!(o.status.success());
    let o = compop(&["bound-calculus", "--eps", "inv-log", "--n-max", "2000"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["pass"], true);
    let o = compop(&["bound-calculus", "--eps", "power:0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn blaschke_cert_json() {
    let o = compop(&[
        "blaschke-cert",
        "--r",
        "4",
        "--angle-levels",
        "2",
        "--size-levels",
        "5",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["result"]["windows"], 25);
    assert!(v["result"]["value"].as_f64().unwrap() > 0.0);
}
