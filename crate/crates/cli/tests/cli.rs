use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn semiriem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiriem"))
        .args(args)
        .env_remove("SEMIRIEM_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_file(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn curvature_check_exit_codes() {
    let out = semiriem(&["curvature-check", "--space", "product:hyperbolic(2)*sphere(2)", "--k", "1", "--samples", "2000"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sphere.json");
    let out = semiriem(&["curvature-check", "--space", "sphere(2)", "--k", "2", "--samples", "200", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let report = json_file(&path);
    assert_eq!(report["report"]["passed"], false);
    assert!(report["report"]["witness"]["u"].is_array());

    let out = semiriem(&["curvature-check", "--space", "nonsense", "--k", "1"]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(code(&semiriem(&["curvature-check", "--k", "1"])), 1);
    assert_eq!(code(&semiriem(&["frobnicate"])), 1);
    assert_eq!(code(&semiriem(&["--help"])), 0);
    assert_eq!(code(&semiriem(&["--workers", "0", "scan"])), 1);
}

#[test]
fn warped_space_passes_with_k_one() {
    let out = semiriem(&[
        "curvature-check",
        "--space",
        "warped:hyperbolic(2)*torus(2):alpha=busemann",
        "--k",
        "1",
        "--samples",
        "1000",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("space,k,seed,samples"));
    assert!(text.trim_end().ends_with(",true"));
}

#[test]
fn su21_suite() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("su21.json");
    let p = path.to_str().unwrap();
    let out = semiriem(&["su21", "--t", "-0.8", "--k", "0.1", "--samples", "2000", "--pairs", "200", "--out", p]);
    assert_eq!(code(&out), 0);
    let report = json_file(&path);
    assert_eq!(report["exact"]["passed"], true);
    assert_eq!(report["feasibility"]["feasible"], true);

    let out = semiriem(&["su21", "--t", "-0.5", "--k", "0.2", "--samples", "500", "--pairs", "100", "--out", p]);
    assert_eq!(code(&out), 2);
    let report = json_file(&path);
    assert_eq!(report["exact"]["passed"], true);
    assert_eq!(report["feasibility"]["ineq"][3], false);

    let out = semiriem(&["su21", "--t", "-0.8", "--k", "1/2", "--samples", "10", "--pairs", "10", "--out", p]);
    assert_eq!(code(&out), 2);
    assert_eq!(json_file(&path)["f1_f2"]["margin"], "-3/10");

    assert_eq!(code(&semiriem(&["su21", "--t", "-1.0", "--k", "0.1"])), 1);
}

#[test]
fn scan_default_grid_and_consistency() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = semiriem(&["scan", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("feasible t range"));
    let csv = fs::read_to_string(&path).unwrap();
    let mut feasible_ts = Vec::new();
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields[6] == "true" {
            feasible_ts.push(fields[0].parse::<f64>().unwrap());
        }
    }
    assert!(!feasible_ts.is_empty());
    assert!(feasible_ts.iter().all(|&t| t > -1.0 && t < -0.6));

    // A one-cell grid agrees with the su21 feasibility verdict.
    let out = semiriem(&[
        "scan", "--t-start", "-0.8", "--t-stop", "-0.8", "--t-step", "0.1", "--k-start", "0.1", "--k-stop", "0.1",
        "--k-step", "0.1",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap().split(',').nth(6), Some("true"));

    let out = semiriem(&["scan", "--t-start", "-0.5", "--t-stop", "-0.6"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn geodesic_demos() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lightlike.csv");
    let out = semiriem(&["geodesic", "warped-lightlike", "--k", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(&path).unwrap();
    let header: serde_json::Value = serde_json::from_str(csv.lines().next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    assert!(header["run"]["status"]["BlowUp"].is_object());
    let estimate = header["run"]["breakdown_estimate"].as_f64().unwrap();
    assert!((estimate + 1.0).abs() < 1e-2);
    assert!(csv.lines().nth(1).unwrap().starts_with("t,y0"));

    let out = semiriem(&["geodesic", "warped-timelike", "--k", "1", "--c1", "2", "--format", "json"]);
    assert_eq!(code(&out), 1);

    let out = semiriem(&["geodesic", "euler-arnold", "--t", "-0.8", "--u-max", "1000", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["run"]["status"], "Completed");

    let out = semiriem(&["geodesic", "euler-arnold", "--v1", "0,0,0,0,1,0,0,0"]);
    assert_eq!(code(&out), 1);

    let out = semiriem(&["geodesic", "riccati", "--k", "1", "--h0", "0"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["runs"][0]["forward"]["sup_abs"].as_f64().unwrap() < 1.0);
}

#[test]
fn reports_are_byte_identical_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let run = |cmd: &[&str], workers: &str, name: &str| -> Vec<u8> {
        let path = dir.path().join(format!("{name}-{workers}"));
        let mut args = cmd.to_vec();
        args.extend(["--out", path.to_str().unwrap()]);
        let out = Command::new(env!("CARGO_BIN_EXE_semiriem"))
            .args(&args)
            .env("SEMIRIEM_THREADS", workers)
            .output()
            .unwrap();
        assert!(out.status.code().is_some_and(|c| c == 0 || c == 2));
        fs::read(path).unwrap()
    };
    let commands: [(&str, &[&str]); 3] = [
        ("curv", &["curvature-check", "--space", "warped:hyperbolic(2)*torus(2):alpha=busemann", "--k", "1", "--samples", "500", "--seed", "7"]),
        ("su21", &["su21", "--t", "-0.8", "--k", "0.1", "--samples", "1000", "--pairs", "50", "--seed", "3"]),
        ("scan", &["scan", "--samples", "5", "--t-step", "0.1", "--k-step", "0.05"]),
    ];
    for (name, cmd) in commands {
        let one = run(cmd, "1", name);
        assert_eq!(one, run(cmd, "2", name), "{name}");
        assert_eq!(one, run(cmd, "8", name), "{name}");
        assert_eq!(one, run(cmd, "1", name), "{name}");
    }
}
