//! End-to-end acceptance run: one PASS/FAIL line per criterion with the
//! pinned tolerance, the observed residual and the wall time.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qrh_core::special::{zeta_prime_em, zeta_prime_minus_one};
use qrh_core::verify::{find_suite, SuiteOptions, VerificationReport};

const SEED: u64 = 20240611;

struct Check {
    label: String,
    pass: bool,
    detail: String,
}

struct Criterion {
    title: &'static str,
    budget: Duration,
    /// `(suite, tolerance, sample count)`; `None` keeps the suite default.
    suites: &'static [(&'static str, f64, Option<usize>)],
}

fn run_suite(name: &str, tol: f64, samples: Option<usize>) -> Check {
    let suite = find_suite(name).expect("registered suite");
    let opts = SuiteOptions { samples, seed: SEED, tol: Some(tol) };
    match suite.run(&opts) {
        Ok(VerificationReport { max_rel_residual, excluded_near_pole, samples, pass, .. }) => Check {
            label: name.to_string(),
            pass,
            detail: format!(
                "{name}: max residual {max_rel_residual:.2e} (tol {tol:.0e}, {samples} samples, {excluded_near_pole} excluded)"
            ),
        },
        Err(e) => Check { label: name.to_string(), pass: false, detail: format!("{name}: error {e}") },
    }
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        title: "reflection identity of Lambda, both half-planes",
        budget: Duration::from_secs(1),
        suites: &[("reflection", 1e-9, Some(200))],
    },
    Criterion {
        title: "difference relation of F",
        budget: Duration::from_secs(2),
        suites: &[("f-difference", 1e-8, Some(200))],
    },
    Criterion {
        title: "E_q difference relation and series identity, |q| <= 0.9",
        budget: Duration::from_secs(1),
        suites: &[("eq-difference", 1e-12, None), ("eq-series", 1e-12, None)],
    },
    Criterion {
        title: "asymptotic orders of Lambda and F, K = 1, 2, 3",
        budget: Duration::from_secs(5),
        suites: &[("asymptotic-order", 0.2, None)],
    },
    Criterion {
        title: "second Stirling expansion vs recurrence log Gamma_2, |x| >= 20",
        budget: Duration::from_secs(5),
        suites: &[("gamma2-expansion", 1e-9, Some(50))],
    },
    Criterion {
        title: "N = 1 second Stirling coefficients vs classical",
        budget: Duration::from_secs(1),
        suites: &[("second-stirling", 1e-12, None)],
    },
    Criterion {
        title: "doubled A1 jump identity, both half-planes",
        budget: Duration::from_secs(2),
        suites: &[("jump-a1", 1e-9, Some(100))],
    },
    Criterion {
        title: "adjoint form Ad(psi) vs Psi on y_alpha_dual",
        budget: Duration::from_secs(2),
        suites: &[("adjoint-a1", 1e-8, Some(50))],
    },
    Criterion {
        title: "t -> 0 residual and growth at infinity",
        budget: Duration::from_secs(2),
        suites: &[("limit-zero", 1e-6, None), ("limit-growth", 5.0, None)],
    },
    Criterion {
        title: "general solution: doubled A1 case and two-ray jump",
        budget: Duration::from_secs(5),
        suites: &[("general-a1", 1e-12, None), ("general-jump", 1e-9, None), ("general-conjugation", 1e-9, None)],
    },
    Criterion {
        title: "tau -> 0: Hamiltonian limit and its theta-derivative",
        budget: Duration::from_secs(10),
        suites: &[("hamiltonian-limit", 1e-5, None), ("hamiltonian-derivative", 1e-6, None)],
    },
    Criterion {
        title: "tau -> 1: F^-1 = w^(-1/12) Upsilon, Upsilon difference, extrapolated limit",
        budget: Duration::from_secs(10),
        suites: &[
            ("tau-limit-scaled", 1e-9, Some(50)),
            ("upsilon-difference", 1e-9, None),
            ("tau-limit-extrapolated", 1e-5, None),
        ],
    },
    Criterion {
        title: "pole and zero locations, |n| <= 3",
        budget: Duration::from_secs(2),
        suites: &[("poles", 1e-8, None)],
    },
    Criterion {
        title: "constants zeta'(-1) and rho",
        budget: Duration::from_secs(1),
        suites: &[("constants", 1e-8, None)],
    },
];

const ADDITIONAL: &[(&str, f64)] =
    &[("tau-limit", 1e-9), ("powers-a1", 1e-12), ("adjoint-general", 1e-8), ("sq-dt", 1e-10)];

fn main() -> ExitCode {
    let mut failed = Vec::new();
    let total = Instant::now();
    for (i, c) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let mut checks: Vec<Check> = c.suites.iter().map(|&(n, t, s)| run_suite(n, t, s)).collect();
        if c.title.starts_with("constants") {
            let d = (zeta_prime_minus_one() - zeta_prime_em(-1.0, 80, 24)).abs();
            checks.push(Check {
                label: "zeta'(-1) vs Euler-Maclaurin".into(),
                pass: d < 1e-9,
                detail: format!("zeta'(-1) vs Euler-Maclaurin oracle: {d:.2e} (tol 1e-9)"),
            });
        }
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let pass = in_time && checks.iter().all(|k| k.pass);
        println!(
            "{} [{:2}] {}  ({:.0?}, budget {:?})",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            c.title,
            elapsed,
            c.budget
        );
        for k in &checks {
            println!("         {} {}", if k.pass { "ok  " } else { "FAIL" }, k.detail);
        }
        if !pass {
            let why: Vec<String> = checks.iter().filter(|k| !k.pass).map(|k| k.label.clone()).collect();
            failed.push(format!(
                "[{}] {} ({})",
                i + 1,
                c.title,
                if in_time { why.join(", ") } else { "over budget".into() }
            ));
        }
    }
    println!("additional checks:");
    for &(name, tol) in ADDITIONAL {
        let k = run_suite(name, tol, None);
        println!("  {} {}", if k.pass { "PASS" } else { "FAIL" }, k.detail);
        if !k.pass {
            failed.push(name.to_string());
        }
    }
    println!("total {:.2?}", total.elapsed());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing: {}", failed.join("; "));
        ExitCode::FAILURE
    }
}
