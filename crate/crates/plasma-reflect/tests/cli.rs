//! End-to-end tests of the binary: exit codes, output formats, config
//! merging and sweep determinism.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plasma-reflect"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn reflect_emits_json_and_exits_zero() {
    let o = run(&["reflect", "--k", "0.1", "--eps", "0.01", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = v["R"].as_f64().unwrap();
    assert!((r - 0.9794729391749188).abs() < 1e-10);
    assert!(v["phi"].as_f64().unwrap() < 0.0);
    assert!(v.get("diagnostics").is_none());
}

#[test]
fn reflect_diagnostics_flag_adds_flow_record() {
    let o = run(&[
        "reflect", "--k", "0.1", "--eps", "0.01", "--alpha", "1.0", "--diagnostics",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let d = &v["diagnostics"];
    assert!(d["balance_rel"].as_f64().unwrap() < 1e-8);
    assert!(d["e0_residual"].as_f64().unwrap() < 1e-7);
}

#[test]
fn reflect_longwave_close_to_exact() {
    let exact = run(&["reflect", "--k", "0.05", "--eps", "0.001", "--alpha", "0.5"]);
    let lw = run(&[
        "reflect", "--k", "0.05", "--eps", "0.001", "--alpha", "0.5", "--longwave",
    ]);
    let re: serde_json::Value = serde_json::from_str(&stdout(&exact)).unwrap();
    let rl: serde_json::Value = serde_json::from_str(&stdout(&lw)).unwrap();
    let (a, b) = (re["R"].as_f64().unwrap(), rl["R"].as_f64().unwrap());
    assert!((a - b).abs() / a < 1e-2, "{a} vs {b}");
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        vec!["reflect", "--k", "0.1", "--eps", "0.01", "--alpha", "1.5"],
        vec!["reflect", "--k=-0.1", "--eps", "0.01", "--alpha", "0.5"],
        vec!["reflect", "--k", "0.1", "--eps", "0.0", "--alpha", "0.5"],
        vec!["sweep", "--k-range", "0.1:0.3:0", "--eps", "0.01", "--alpha", "1.0"],
        vec!["reflect", "--eps", "0.01", "--alpha", "0.5"], // missing --k
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr).into_owned();
        let v: serde_json::Value = serde_json::from_str(err.lines().last().unwrap()).unwrap();
        assert!(v["error"].is_string(), "{err}");
    }
    // mutually exclusive selectors are a usage error (clap exits 2 as well)
    let o = run(&["sweep", "--figure", "3", "--k-range", "0.1:0.3:5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solver_failure_exits_three() {
    // k far outside the long-wave band: eta0 would land on the cut and the
    // discrete mode does not exist
    let o = run(&["reflect", "--k", "5.0", "--eps", "0.001", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    let v: serde_json::Value = serde_json::from_str(err.lines().last().unwrap()).unwrap();
    assert_eq!(v["status"], "mode-absent");
}

#[test]
fn sweep_figure_csv_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.csv");
    let p2 = dir.path().join("b.csv");
    let o = run(&[
        "sweep", "--figure", "5", "--jobs", "1", "--out", p1.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "sweep", "--figure", "5", "--jobs", "4", "--out", p2.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let a = std::fs::read(&p1).unwrap();
    let b = std::fs::read(&p2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "parallel sweep must be byte-identical");
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,epsilon,alpha_p,R,phi,K_re,K_im,eta0_re,eta0_im,n_zeros,qerr,status"
    );
    assert_eq!(lines.count(), 4 * 21); // figure-5 grid
}

#[test]
fn sweep_ranges_json_to_stdout() {
    let o = run(&[
        "sweep",
        "--k-range",
        "0.05:0.15:3",
        "--eps",
        "0.01",
        "--alpha",
        "1.0",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["status"] == "ok"));
}

#[test]
fn plot_script_written_next_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig3.csv");
    let o = run(&[
        "sweep", "--figure", "3", "--out", csv.to_str().unwrap(), "--plot-script",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let gp = std::fs::read_to_string(dir.path().join("fig3.gp")).unwrap();
    assert!(gp.contains("plot"));
    assert!(gp.contains("fig3.csv"));
}

#[test]
fn config_file_merges_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "k = 0.1\neps = 0.01\nalpha = 0.5\n").unwrap();
    let o = run(&[
        "--config", cfg.to_str().unwrap(), "reflect",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["alpha_p"].as_f64().unwrap(), 0.5);
    // an explicit flag overrides the file
    let o = run(&[
        "--config", cfg.to_str().unwrap(), "reflect", "--alpha", "0.0",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["alpha_p"].as_f64().unwrap(), 0.0);
    assert_eq!(v["R"].as_f64().unwrap(), 1.0);
}

#[test]
fn zeros_reports_pair_and_residual() {
    let o = run(&["zeros", "--k", "0.1", "--eps", "0.01"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n_zeros"], 2);
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
    assert!(v["eta0"]["re"].as_f64().unwrap() > 0.0);
}

#[test]
fn domain_curve_csv() {
    let o = run(&["domain-curve", "--points", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "tau,gamma_L,epsilon_L");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 50);
    for row in rows {
        let f: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert!(f[0] > 0.83 && f[0] < 1.0);
        assert!(f[2] > 0.0);
    }
}

#[test]
fn dispersion_grid_csv() {
    let o = run(&[
        "dispersion-grid",
        "--k-range",
        "0.05:0.2:4",
        "--eps-range",
        "0.001:0.01:2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,epsilon,gamma_re,gamma_im,eta0_re,eta0_im,status"
    );
    assert_eq!(lines.count(), 8);
}
