use std::f64::consts::{E, PI};
use std::process::{Command, Output};

use serde_json::Value;

fn qrh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrh")).args(args).output().expect("qrh runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn value(o: &Output) -> f64 {
    stdout(o).trim().parse().unwrap()
}

#[test]
fn lambda_at_one_is_e_over_root_two_pi() {
    let o = qrh(&["eval", "lambda", "--w", "1", "--eta", "0", "--omega", "1"]);
    assert_eq!(code(&o), 0);
    let want = E / (2.0 * PI).sqrt();
    assert!((value(&o) - want).abs() < 1e-14);
    let o = qrh(&["eval", "lambda", "--w", "1", "--eta", "0", "--digits", "6"]);
    assert_eq!(stdout(&o).trim(), "1.08444");
}

#[test]
fn quantum_dilog_vanishes_at_one() {
    let o = qrh(&["eval", "eq", "--q", "0.5", "--x", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn bernoulli_b22_at_zero() {
    let o = qrh(&["eval", "bernoulli", "--N", "2", "--k", "2", "--x", "0", "--a", "1,1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "0.8333333333333333");
    let o = qrh(&["eval", "bernoulli", "--N", "2", "--k", "2", "--x", "0", "--a", "1;1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"]["re"].as_f64().unwrap() - 5.0 / 6.0).abs() < 1e-15);
    assert_eq!(v["status"], "ok");
}

#[test]
fn complex_arguments_and_log_values() {
    let a = qrh(&["eval", "f", "--w", "1.5+0.5i", "--eta", "0.2-0.1i", "--tau", "0.3+0.9i", "--log"]);
    let b =
        qrh(&["eval", "f", "--w", "1.5,0.5", "--eta", "0.2,-0.1", "--omega1", "1", "--omega2", "0.3+0.9i", "--log"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).trim().ends_with('i'));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&qrh(&["eval", "nosuch", "--x", "1"])), 64);
    assert_eq!(code(&qrh(&["eval", "lambda", "--w", "1"])), 64);
    assert_eq!(code(&qrh(&["eval", "lambda", "--w", "1", "--eta", "0", "--bogus", "2"])), 64);
    assert_eq!(code(&qrh(&["frobnicate"])), 64);
    assert_eq!(code(&qrh(&["eval", "lambda", "--w", "1+2", "--eta", "0"])), 65);
    assert_eq!(code(&qrh(&["eval", "lambda", "--w", "one", "--eta", "0"])), 65);
    assert_eq!(code(&qrh(&["eval", "eq", "--q", "1.5", "--x", "1"])), 65);
    assert_eq!(code(&qrh(&["eval", "lambda", "--w", "1", "--eta", "0", "--digits", "18"])), 64);
    assert_eq!(code(&qrh(&["--help"])), 0);
    assert_eq!(code(&qrh(&["--version"])), 0);
}

#[test]
fn poles_and_zeros_are_signalled() {
    let o = qrh(&["eval", "gamma1", "--x", "-2", "--a", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).starts_with("pole at"));
    // t_{-2} = z / (2 pi i (-2 + theta + (1 + tau)/2)) is a pole of the + sheet
    let t = num(1.0, 0.0) / (num(0.0, 2.0 * PI) * num(-2.0 + 0.1 + 0.5, 0.5));
    let ts = format!("{},{}", t.0, t.1);
    let o = qrh(&["eval", "psi_a1", "--z", "1", "--t", &ts, "--tau", "i", "--theta", "0.1", "--format", "json"]);
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "pole");
}

/// Complex division helper kept local so the oracle does not go through the CLI.
fn num(re: f64, im: f64) -> Num {
    Num(re, im)
}

#[derive(Clone, Copy)]
struct Num(f64, f64);

impl std::ops::Mul for Num {
    type Output = Num;
    fn mul(self, o: Num) -> Num {
        Num(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
}

impl std::ops::Div for Num {
    type Output = Num;
    fn div(self, o: Num) -> Num {
        let d = o.0 * o.0 + o.1 * o.1;
        Num((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }
}

#[test]
fn psi_a1_sides_and_adjoint() {
    let plus =
        qrh(&["eval", "psi_a1", "--z", "1", "--t", "0.3-0.2i", "--tau", "0.2+0.9i", "--theta", "0.1", "--side", "+"]);
    let minus =
        qrh(&["eval", "psi_a1", "--z", "1", "--t", "0.3-0.2i", "--tau", "0.2+0.9i", "--theta", "0.1", "--side", "-"]);
    assert_eq!(code(&plus), 0);
    assert_eq!(code(&minus), 0);
    assert_ne!(stdout(&plus), stdout(&minus));
    let adj =
        qrh(&["eval", "psi_a1", "--z", "1", "--t", "0.3-0.2i", "--tau", "0.2+0.9i", "--theta", "0.1", "--adjoint"]);
    assert_eq!(code(&adj), 0);
    // t on i l_+ is cut out of the + sheet
    let cut = qrh(&["eval", "psi_a1", "--z", "1", "--t", "0.5i", "--tau", "i", "--theta", "0"]);
    assert_eq!(code(&cut), 65);
}

#[test]
fn psi_general_reads_bps_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a1.json");
    let text = qrh_core::bps::doubled_a1(qrh_core::Complex64::new(1.0, 0.0)).unwrap().to_json();
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let common = ["--t", "0.3-0.2i", "--tau", "0.2+0.9i", "--theta", "0.1"];
    // the ray just clockwise of -i z puts t on the + sheet
    let mut args = vec!["eval", "psi_general", "--bps", p, "--ray", "0.2-1i", "--beta", "0,1"];
    args.extend(common);
    let general = qrh(&args);
    let mut args = vec!["eval", "psi_a1", "--z", "1", "--side", "+"];
    args.extend(common);
    let a1 = qrh(&args);
    assert_eq!(code(&general), 0, "{}", String::from_utf8_lossy(&general.stderr));
    let (g, a): (Vec<f64>, Vec<f64>) = (parts(&stdout(&general)), parts(&stdout(&a1)));
    assert!((g[0] - a[0]).abs() < 1e-12 && (g[1] - a[1]).abs() < 1e-12);
    assert_eq!(
        code(&qrh(&[
            "eval",
            "psi_general",
            "--bps",
            "/nonexistent.json",
            "--ray",
            "1",
            "--t",
            "1",
            "--tau",
            "i",
            "--theta",
            "0"
        ])),
        66
    );
    std::fs::write(&path, "{").unwrap();
    assert_eq!(
        code(&qrh(&["eval", "psi_general", "--bps", p, "--ray", "1", "--t", "1", "--tau", "i", "--theta", "0"])),
        65
    );
}

fn parts(s: &str) -> Vec<f64> {
    let (re, im) = split_text(s);
    vec![re, im]
}

fn split_text(s: &str) -> (f64, f64) {
    // text output is `a`, `a+bi` or `a-bi`
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else { return (s.parse().unwrap(), 0.0) };
    let k = body.rfind(['+', '-']).filter(|&k| k > 0 && !body[..k].ends_with(['e', 'E'])).unwrap();
    (body[..k].parse().unwrap(), body[k..].parse().unwrap())
}

#[test]
fn tau_reports_the_limit_pair() {
    let o = qrh(&["eval", "tau", "--z", "1", "--t", "0.3-0.2i", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let d = |k: &str| (v["value"][k].as_f64().unwrap() - v["psi_limit"][k].as_f64().unwrap()).abs();
    assert!(d("re") < 1e-12 && d("im") < 1e-12);
}

#[test]
fn verify_examples() {
    let o = qrh(&["verify", "reflection", "--samples", "200", "--seed", "42"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["max_rel_residual"].as_f64().unwrap() < 1e-9);
    for key in ["suite", "seed", "samples", "max_abs_residual", "max_rel_residual", "excluded_near_pole", "pass"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let o = qrh(&["verify", "jump-a1", "--samples", "100", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&qrh(&["verify", "reflection", "--samples", "20", "--tol", "0"])), 1);
    assert_eq!(code(&qrh(&["verify", "no-such-suite"])), 64);
}

#[test]
fn verify_all_aggregates_and_fails_when_a_suite_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("all.json");
    let o = qrh(&["verify", "all", "--samples", "3", "--out", out.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), qrh_core::verify::SUITES.len());
    let all_pass = suites.iter().all(|s| s["pass"] == true);
    assert_eq!(v["pass"], all_pass);
    assert_eq!(code(&o), if all_pass { 0 } else { 1 });
    // the rescaled tau -> 1 identity does not hold, so the aggregate fails
    assert!(!all_pass);
}

#[test]
fn config_file_sets_tolerances_and_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"tolerances": {"reflection": 0.0}, "format": "text", "seed": 3}"#).unwrap();
    let o = qrh(&["verify", "reflection", "--samples", "5", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("FAIL reflection"));
    // flags override the file
    let o = qrh(&["verify", "reflection", "--samples", "5", "--tol", "1e-9", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    std::fs::write(&cfg, r#"{"orders": {"gamma2": 4}}"#).unwrap();
    let low =
        qrh(&["eval", "gamma2", "--x", "0.7+0.2i", "--w1", "1", "--w2", "0.6+0.8i", "--config", cfg.to_str().unwrap()]);
    let full = qrh(&["eval", "gamma2", "--x", "0.7+0.2i", "--w1", "1", "--w2", "0.6+0.8i"]);
    assert_eq!(code(&low), 0);
    assert_ne!(stdout(&low), stdout(&full));
    std::fs::write(&cfg, r#"{"unknown": 1}"#).unwrap();
    assert_eq!(code(&qrh(&["eval", "eq", "--q", "0.5", "--x", "0.5", "--config", cfg.to_str().unwrap()])), 65);
    assert_eq!(code(&qrh(&["eval", "eq", "--q", "0.5", "--x", "0.5", "--config", "/nonexistent/cfg.json"])), 66);
}

const GRID: &[&str] = &[
    "grid",
    "psi_a1",
    "--annulus",
    "0.05,0.2,0,3.141592653589793",
    "--size",
    "4,5",
    "--z",
    "1",
    "--tau",
    "i",
    "--theta",
    "0.1",
];

#[test]
fn grid_is_deterministic_and_marks_the_excluded_ray() {
    let a = qrh(GRID);
    let b = qrh(GRID);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t_re,t_im,value_re,value_im,status"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 20);
    // row-major: radius varies fastest; the middle phase is i l_+
    for (k, r) in rows.iter().enumerate() {
        let want = if k / 4 == 2 { "excluded-ray" } else { "ok" };
        assert_eq!(r[4], want, "row {k}");
    }
}

#[test]
fn grid_marks_poles() {
    // one radius and phase exactly at t_{-2} = 1/(2 pi i (-1.4 + 0.5 i))
    let t = num(1.0, 0.0) / (num(0.0, 2.0 * PI) * num(-1.4, 0.5));
    let (r, p) = ((t.0 * t.0 + t.1 * t.1).sqrt(), t.1.atan2(t.0));
    let annulus = format!("{r},{},{p},{}", 2.0 * r, p + 0.5);
    let o =
        qrh(&["grid", "psi_a1", "--annulus", &annulus, "--size", "2,2", "--z", "1", "--tau", "i", "--theta", "0.1"]);
    assert_eq!(code(&o), 0);
    let statuses: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.rsplit(',').next().unwrap().to_string()).collect();
    assert_eq!(statuses, ["pole", "ok", "ok", "ok"]);
}

#[test]
fn grid_tau_at_theta_zero_and_output_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tau.csv");
    let args =
        ["grid", "tau", "--rect", "0.1,0.3,-0.2,0.2", "--size", "3,2", "--z", "1", "--out", out.to_str().unwrap()];
    assert_eq!(code(&qrh(&args)), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",ok")));
    let bad =
        ["grid", "tau", "--rect", "0.1,0.3,-0.2,0.2", "--size", "3,2", "--z", "1", "--out", "/nonexistent/dir/x.csv"];
    assert_eq!(code(&qrh(&bad)), 73);
    assert_eq!(code(&qrh(&["grid", "lambda", "--rect", "0,1,0,1", "--size", "2,2", "--w", "1", "--eta", "0"])), 64);
    assert_eq!(code(&qrh(&["grid", "tau", "--size", "2,2", "--z", "1"])), 64);
    assert_eq!(code(&qrh(&["grid", "tau", "--rect", "0,1,0", "--size", "2,2", "--z", "1"])), 64);
}

#[test]
fn report_is_deterministic() {
    let a = qrh(&["report", "--samples", "2"]);
    let b = qrh(&["report", "--samples", "2"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["total"], qrh_core::verify::SUITES.len());
    assert!(v["suites"][0]["description"].is_string());
    assert_eq!(code(&qrh(&["report", "--samples", "2", "--out", "/nonexistent/dir/r.json"])), 73);
}
