use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_floqmap"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn temp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("floqmap-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

fn bessel_j(n: i32, x: f64) -> f64 {
    // power series, adequate for x ≤ 4
    let m = n.unsigned_abs() as i32;
    let mut term = (0.5 * x).powi(m) / (1..=m).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..60 {
        term *= -(0.25 * x * x) / (k as f64 * (k + m) as f64);
        sum += term;
    }
    if n < 0 && m % 2 == 1 {
        -sum
    } else {
        sum
    }
}

#[test]
fn version_flag_succeeds() {
    let out = run(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("floqmap"));
}

#[test]
fn unknown_flag_is_a_usage_error_without_outputs() {
    let dir = temp_dir("unknown");
    let cfg = config("qubit_pair.json");
    let out = run(&["--out", dir.to_str().unwrap(), "catalog", "--config", cfg.to_str().unwrap(), "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.exists());
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn malformed_config_reports_field_and_exits_two() {
    let dir = temp_dir("malformed");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"modes\": [{\"label\": \"Q1\", \"freq_GHz\": \"five\"}]\n}\n").unwrap();
    let out = run(&["catalog", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("freq_GHz"), "{err}");
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn missing_config_exits_two() {
    let out = run(&["catalog", "--config", "/nonexistent/system.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_error_exits_one() {
    // the target needs a negative drive frequency at this harmonic
    let cfg = config("qubit_pair.json");
    let out = run(&["error-budget", "--config", cfg.to_str().unwrap(), "--target", "01-10", "--harmonic", "1"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn qubit_strength_sweep_follows_bessel_curves() {
    let cfg = config("qubit_pair.json");
    let out = run(&[
        "strength-sweep", "--config", cfg.to_str().unwrap(), "--scheme", "qubit", "--n", "0,1,2", "--xmax", "4",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eps_over_fp,g0_MHz,g1_MHz,g2_MHz"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 81);
    assert_eq!(rows.last().unwrap()[0], 4.0);
    for r in &rows {
        for (k, n) in [0, 1, 2].into_iter().enumerate() {
            let want = 5.0 * bessel_j(n, r[0]);
            assert!((r[k + 1] - want).abs() < 1e-9, "x={} n={n}: {} vs {want}", r[0], r[k + 1]);
        }
    }
}

#[test]
fn coupler_strength_sweep_starts_from_static_coupling() {
    let cfg = config("coupled_via_coupler.json");
    let out = run(&[
        "strength-sweep", "--config", cfg.to_str().unwrap(), "--scheme", "coupler", "--n", "1,2", "--xmax", "300",
        "--points", "4",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows[0], vec![0.0, 0.0, 0.0]);
    assert!(rows[3][1].abs() > rows[1][1].abs());
}

#[test]
fn catalog_lists_table_rows() {
    let cfg = config("qubit_pair.json");
    let out = run(&["catalog", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("bra,ket,class,channel,C,detuning_MHz,base_strength_MHz\n"));
    assert!(text.contains("\n01,10,co,qubit,1,"));
    assert!(text.contains("\n02,11,co,qubit,2,"));
}

#[test]
fn output_directory_gets_csv_and_json_mirror() {
    let dir = temp_dir("mirror");
    let cfg = config("qubit_pair.json");
    let out = run(&["--out", dir.to_str().unwrap(), "catalog", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.join("catalog.csv")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("catalog.json")).unwrap()).unwrap();
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), csv.lines().count() - 1);
    assert_eq!(json["columns"][5]["unit"], "MHz");
}

#[test]
fn landscape_is_identical_across_worker_counts() {
    let cfg = config("qubit_pair.json");
    let args = |w: &'static str| {
        vec![
            "--workers".to_string(),
            w.to_string(),
            "landscape".into(),
            "--config".into(),
            cfg.to_str().unwrap().to_string(),
            "--fmin".into(),
            "100".into(),
            "--fmax".into(),
            "400".into(),
            "--points".into(),
            "16".into(),
            "--eps-over-fp".into(),
            "1.84".into(),
        ]
    };
    let one = bin().args(args("1")).output().unwrap();
    let eight = bin().args(args("8")).output().unwrap();
    assert!(one.status.success() && eight.status.success());
    assert_eq!(one.stdout, eight.stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    assert!(text.starts_with("fp_MHz,max_theta_rad,argmax_bra,argmax_ket\n"));
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn zz_sweep_has_the_documented_columns() {
    let cfg = config("coupled_via_coupler.json");
    let a = |w: &str| {
        run(&[
            "--workers", w, "zz", "--config", cfg.to_str().unwrap(), "--coupler-min-ghz", "6.3", "--coupler-max-ghz",
            "7.4", "--points", "5",
        ])
    };
    let one = a("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, a("4").stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    assert!(text.starts_with("omega_c_GHz,zz_exact_kHz,zz_pert2_kHz,zz_pert3_kHz,zz_pert4_kHz\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn error_budget_writes_summary_and_full_json() {
    let dir = temp_dir("budget");
    let cfg = config("qubit_pair.json");
    let out = run(&[
        "--out", dir.to_str().unwrap(), "error-budget", "--config", cfg.to_str().unwrap(), "--target", "11-20",
        "--harmonic", "-1", "--eps-over-fp", "1.84",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let full: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("error_budget_full.json")).unwrap()).unwrap();
    let total = full["total_error"].as_f64().unwrap();
    assert!(total > 0.0 && total <= full["total_bound"].as_f64().unwrap());
    assert!(full["counter_rotating"]["error"].as_f64().unwrap() < 1e-2 * full["co_rotating"]["error"].as_f64().unwrap());
    let summary = std::fs::read_to_string(dir.join("error_budget.csv")).unwrap();
    assert!(summary.lines().last().unwrap().starts_with("total,"));
    assert!(dir.join("error_budget_harmonics.csv").exists());
}

#[test]
fn allocate_writes_solution_and_smt() {
    let dir = temp_dir("allocate");
    std::fs::create_dir_all(&dir).unwrap();
    let smt = dir.join("problem.smt2");
    let problem = config("allocate_two_qubit.json");
    let out = run(&[
        "--seed", "3", "allocate", "--problem", problem.to_str().unwrap(), "--export-smt", smt.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sol: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(sol["solution"]["satisfied"], true);
    assert_eq!(sol["solution"]["stage"], "refined");
    assert!(sol["solution"]["worst_margin"].as_f64().unwrap() >= 10.0);
    let text = std::fs::read_to_string(&smt).unwrap();
    assert!(text.contains("(set-logic QF_LRA)"));
    assert!(text.contains("(check-sat)"));
}

#[test]
fn allocate_with_contradictory_boxes_exits_one() {
    let dir = temp_dir("contradiction");
    std::fs::create_dir_all(&dir).unwrap();
    let mut p: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(config("allocate_two_qubit.json")).unwrap()).unwrap();
    // Q1 pinned onto Q2: the target sideband cannot be resonant at any positive drive frequency
    p["variables"][0]["lo"] = serde_json::json!(5.0);
    p["variables"][0]["hi"] = serde_json::json!(5.0);
    let path = dir.join("p.json");
    std::fs::write(&path, serde_json::to_string(&p).unwrap()).unwrap();
    let out = run(&["allocate", "--problem", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}
