//! The function registry behind `qrh eval` and `qrh grid`.

use std::fs;
use std::path::Path;

use qrh_core::bernoulli::{multi_bernoulli, MultiBernoulliQuery};
use qrh_core::bps::{Charge, Ray, RefinedBPSStructure, RAY_TOL};
use qrh_core::rhsolver::{
    hamiltonian_derivative_closed, hamiltonian_limit, log_adjoint_general, log_adjoint_psi_a1, log_solve_a1,
    log_solve_general, tau_function_limit, w_of, EvaluationPoint, RHInstance, Side,
};
use qrh_core::special::{
    barnes_zeta, log_delta, log_f_with, log_gamma1, log_gamma2_with, log_lambda, log_upsilon, quantum_dilog,
    DoubleGammaArgs, Gamma2Config, ModifiedGammaArgs, QDilogArgs,
};
use qrh_core::{Complex64, Error};

use crate::args::ArgMap;
use crate::error::CliError;

pub const FUNCTIONS: &[&str] = &[
    "bernoulli",
    "zeta",
    "gamma1",
    "gamma2",
    "lambda",
    "f",
    "eq",
    "delta",
    "upsilon",
    "psi_a1",
    "psi_general",
    "hamiltonian",
    "tau",
];

/// Functions of `t` that `grid` can sample.
pub const GRID_FUNCTIONS: &[&str] = &["psi_a1", "psi_general", "hamiltonian", "tau"];

pub const SWITCHES: &[&str] = &["log", "adjoint", "derivative"];

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, Default)]
pub struct Orders {
    pub gamma2: Option<usize>,
    pub f: Option<usize>,
}

fn gamma2_cfg(max_terms: Option<usize>) -> Gamma2Config {
    let mut cfg = Gamma2Config::default();
    if let Some(m) = max_terms {
        cfg.max_terms = m;
    }
    cfg
}

/// A computed value, or a reason it could not be computed.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pole(Complex64),
    Zero(Complex64),
    ExcludedRay,
    Domain(String),
    Error(String),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pole(_) => "pole",
            Status::Zero(_) => "zero",
            Status::ExcludedRay => "excluded-ray",
            Status::Domain(_) => "domain",
            Status::Error(_) => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    /// The value, or its logarithm when `log` is set.
    pub value: Complex64,
    pub log: bool,
    /// Secondary named values (the `tau` limit reports `psi_limit` too).
    pub extra: Vec<(&'static str, Complex64)>,
}

/// Everything a function needs, parsed once so that `grid` can vary `t`.
pub enum Prepared {
    Bernoulli {
        k: usize,
        x: Complex64,
        a: Vec<Complex64>,
    },
    Zeta {
        s: Complex64,
        x: Complex64,
        a: Vec<Complex64>,
    },
    Gamma1 {
        x: Complex64,
        a: Complex64,
    },
    Gamma2 {
        x: Complex64,
        w1: Complex64,
        w2: Complex64,
        cfg: Gamma2Config,
    },
    Lambda(ModifiedGammaArgs),
    F {
        args: DoubleGammaArgs,
        cfg: Gamma2Config,
    },
    Eq(QDilogArgs),
    Delta {
        w: Complex64,
        eta: Complex64,
    },
    Upsilon {
        w: Complex64,
        theta: Complex64,
    },
    PsiA1 {
        z: Complex64,
        t: Option<Complex64>,
        tau: Complex64,
        theta: Complex64,
        side: Side,
        n: i64,
        adjoint: bool,
    },
    PsiGeneral {
        inst: Box<RHInstance>,
        ray: Ray,
        t: Option<Complex64>,
        tau: Complex64,
        theta: Vec<Complex64>,
        beta: Charge,
        adjoint: bool,
    },
    Hamiltonian {
        z: Complex64,
        t: Option<Complex64>,
        theta: Complex64,
        side: Side,
        derivative: bool,
    },
    Tau {
        z: Complex64,
        t: Option<Complex64>,
        theta: Complex64,
        side: Side,
    },
}

fn keys(function: &str) -> &'static [&'static str] {
    match function {
        "bernoulli" => &["N", "k", "x", "a", "log"],
        "zeta" => &["s", "x", "a", "log"],
        "gamma1" => &["x", "a", "log"],
        "gamma2" => &["x", "w1", "w2", "log"],
        "lambda" => &["w", "eta", "omega", "log"],
        "f" => &["w", "eta", "omega1", "omega2", "tau", "log"],
        "eq" => &["q", "x", "log"],
        "delta" => &["w", "eta", "log"],
        "upsilon" => &["w", "theta", "log"],
        "psi_a1" => &["z", "t", "tau", "theta", "side", "n", "adjoint", "log"],
        "psi_general" => &["bps", "ray", "t", "tau", "theta", "beta", "adjoint", "log"],
        "hamiltonian" => &["z", "t", "theta", "side", "derivative"],
        "tau" => &["z", "t", "theta", "side", "log"],
        _ => &[],
    }
}

pub fn check_function(name: &str) -> Result<(), CliError> {
    if FUNCTIONS.contains(&name) {
        Ok(())
    } else {
        Err(CliError::usage(format!("unknown function '{name}' (known: {})", FUNCTIONS.join(", "))))
    }
}

fn usize_arg(m: &ArgMap, key: &str) -> Result<usize, CliError> {
    let v = m.int(key)?;
    usize::try_from(v).map_err(|_| CliError::malformed(format!("--{key} must be non-negative, got {v}")))
}

fn load_bps(path: &str) -> Result<RefinedBPSStructure, CliError> {
    let text =
        fs::read_to_string(Path::new(path)).map_err(|e| CliError::no_input(format!("cannot read {path}: {e}")))?;
    Ok(RefinedBPSStructure::from_json(&text)?)
}

/// Parses the arguments of `function`. With `need_t = false` the `--t`
/// argument is left for the caller to supply.
pub fn prepare(function: &str, m: &ArgMap, orders: Orders, need_t: bool) -> Result<Prepared, CliError> {
    check_function(function)?;
    m.check_keys(function, keys(function))?;
    let t = |m: &ArgMap| -> Result<Option<Complex64>, CliError> {
        if need_t {
            m.complex("t").map(Some)
        } else if m.has("t") {
            Err(CliError::usage("grid supplies t; drop --t"))
        } else {
            Ok(None)
        }
    };
    Ok(match function {
        "bernoulli" => {
            let n = if m.has("N") { Some(usize_arg(m, "N")?) } else { None };
            let a = m.complex_list("a", n)?;
            Prepared::Bernoulli { k: usize_arg(m, "k")?, x: m.complex("x")?, a }
        }
        "zeta" => Prepared::Zeta { s: m.complex("s")?, x: m.complex("x")?, a: m.complex_list("a", None)? },
        "gamma1" => Prepared::Gamma1 { x: m.complex("x")?, a: m.complex("a")? },
        "gamma2" => Prepared::Gamma2 {
            x: m.complex("x")?,
            w1: m.complex("w1")?,
            w2: m.complex("w2")?,
            cfg: gamma2_cfg(orders.gamma2),
        },
        "lambda" => {
            Prepared::Lambda(ModifiedGammaArgs::new(m.complex("w")?, m.complex("eta")?, m.complex_or("omega", ONE)?))
        }
        "f" => {
            let omega2 = match (m.has("omega2"), m.has("tau")) {
                (true, false) => m.complex("omega2")?,
                (false, true) => m.complex("tau")?,
                _ => return Err(CliError::usage("f takes exactly one of --omega2 and --tau")),
            };
            Prepared::F {
                args: DoubleGammaArgs {
                    w: m.complex("w")?,
                    eta: m.complex("eta")?,
                    omega1: m.complex_or("omega1", ONE)?,
                    omega2,
                },
                cfg: gamma2_cfg(orders.f),
            }
        }
        "eq" => Prepared::Eq(QDilogArgs { q: m.complex("q")?, x: m.complex("x")? }),
        "delta" => Prepared::Delta { w: m.complex("w")?, eta: m.complex("eta")? },
        "upsilon" => Prepared::Upsilon { w: m.complex("w")?, theta: m.complex("theta")? },
        "psi_a1" => Prepared::PsiA1 {
            z: m.complex("z")?,
            t: t(m)?,
            tau: m.complex("tau")?,
            theta: m.complex("theta")?,
            side: m.side()?,
            n: m.int_or("n", 1)?,
            adjoint: m.flag("adjoint"),
        },
        "psi_general" => {
            let inst = RHInstance::new(load_bps(m.raw("bps")?)?)?;
            let rank = inst.structure.rank();
            let beta = if m.has("beta") { Charge(m.int_list("beta")?) } else { Charge(vec![0; rank]) };
            if beta.0.len() != rank {
                return Err(CliError::usage(format!("--beta needs {rank} entries")));
            }
            let adjoint = m.flag("adjoint");
            if adjoint && m.has("beta") {
                return Err(CliError::usage("--adjoint does not take --beta"));
            }
            Prepared::PsiGeneral {
                ray: Ray::direction(m.complex("ray")?)?,
                t: t(m)?,
                tau: m.complex("tau")?,
                theta: m.complex_list("theta", None)?,
                beta,
                adjoint,
                inst: Box::new(inst),
            }
        }
        "hamiltonian" => Prepared::Hamiltonian {
            z: m.complex("z")?,
            t: t(m)?,
            theta: m.complex("theta")?,
            side: m.side()?,
            derivative: m.flag("derivative"),
        },
        "tau" => Prepared::Tau {
            z: m.complex("z")?,
            t: t(m)?,
            theta: m.complex_or("theta", Complex64::new(0.0, 0.0))?,
            side: m.side()?,
        },
        _ => unreachable!("checked above"),
    })
}

fn status_of(e: Error) -> Status {
    match e {
        Error::Pole { location } => Status::Pole(location),
        Error::Zero { location } => Status::Zero(location),
        Error::Domain(msg) => Status::Domain(msg),
        other => Status::Error(other.to_string()),
    }
}

/// True when `t` lies on the ray `i l_+-` cut out of the doubled A1 sheet.
fn on_excluded_ray(z: Complex64, t: Complex64, side: Side) -> bool {
    let w = w_of(z, t) * side.sign();
    w.re < 0.0 && w.im.abs() <= RAY_TOL * w.norm()
}

impl Prepared {
    /// Evaluates at the stored `t`, or at `t_override` when given.
    pub fn evaluate(&self, t_override: Option<Complex64>, log: bool) -> Result<Evaluation, Status> {
        let pick = |t: &Option<Complex64>| t_override.or(*t).expect("t supplied");
        let logv = |r: qrh_core::Result<Complex64>| r.map_err(status_of);
        let plain = |v: Complex64| Evaluation { value: if log { v.ln() } else { v }, log, extra: vec![] };
        let from_log = |l: Complex64| Evaluation { value: if log { l } else { l.exp() }, log, extra: vec![] };
        match self {
            Prepared::Bernoulli { k, x, a } => {
                logv(multi_bernoulli(&MultiBernoulliQuery::new(*k, *x, a.clone()))).map(plain)
            }
            Prepared::Zeta { s, x, a } => logv(barnes_zeta(*s, *x, a)).map(plain),
            Prepared::Gamma1 { x, a } => logv(log_gamma1(*x, *a)).map(from_log),
            Prepared::Gamma2 { x, w1, w2, cfg } => logv(log_gamma2_with(*x, *w1, *w2, cfg)).map(from_log),
            Prepared::Lambda(args) => logv(log_lambda(args)).map(from_log),
            Prepared::F { args, cfg } => logv(log_f_with(args, cfg)).map(from_log),
            Prepared::Eq(args) => logv(quantum_dilog(args)).map(plain),
            Prepared::Delta { w, eta } => logv(log_delta(*w, *eta)).map(from_log),
            Prepared::Upsilon { w, theta } => logv(log_upsilon(*w, *theta)).map(from_log),
            Prepared::PsiA1 { z, t, tau, theta, side, n, adjoint } => {
                let t = pick(t);
                if on_excluded_ray(*z, t, *side) {
                    return Err(Status::ExcludedRay);
                }
                let p = EvaluationPoint::new(t, *side, *tau, *theta);
                let l = if *adjoint { log_adjoint_psi_a1(*z, &p) } else { log_solve_a1(*z, &p, *n) };
                logv(l).map(from_log)
            }
            Prepared::PsiGeneral { inst, ray, t, tau, theta, beta, adjoint } => {
                let t = pick(t);
                if !((t / ray.phase).re > 0.0) {
                    return Err(Status::ExcludedRay);
                }
                let l = if *adjoint {
                    log_adjoint_general(inst, ray, t, *tau, theta)
                } else {
                    log_solve_general(inst, ray, t, *tau, theta, beta)
                };
                logv(l).map(from_log)
            }
            Prepared::Hamiltonian { z, t, theta, side, derivative } => {
                let t = pick(t);
                if on_excluded_ray(*z, t, *side) {
                    return Err(Status::ExcludedRay);
                }
                let v = if *derivative {
                    hamiltonian_derivative_closed(*z, t, *theta, *side)
                } else {
                    hamiltonian_limit(*z, t, *theta, *side)
                };
                logv(v).map(|v| Evaluation { value: v, log: false, extra: vec![] })
            }
            Prepared::Tau { z, t, theta, side } => {
                let t = pick(t);
                if on_excluded_ray(*z, t, *side) {
                    return Err(Status::ExcludedRay);
                }
                let l = tau_function_limit(*z, t, *theta, *side).map_err(status_of)?;
                let f = |v: Complex64| if log { v.ln() } else { v };
                Ok(Evaluation { value: f(l.upsilon), log, extra: vec![("psi_limit", f(l.psi_limit)), ("w", l.w)] })
            }
        }
    }
}
