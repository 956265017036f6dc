mod args;
mod config;
mod error;
mod eval;
mod grid;
mod literal;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qrh_core::verify::{find_suite, suite_names, SuiteOptions, VerificationReport, SUITES};
use serde_json::json;

use crate::args::ArgMap;
use crate::config::{check_digits, CliConfig, DEFAULT_SEED};
use crate::error::{CliError, EXIT_FAIL, EXIT_SIGNAL, EXIT_USAGE};
use crate::eval::{prepare, Orders, Status, GRID_FUNCTIONS, SWITCHES};
use crate::literal::{parse_real, parse_reals};
use crate::output::{complex, emit, json_complex, Format};

#[derive(Parser, Debug)]
#[command(
    name = "qrh",
    version,
    about = "Evaluate and cross-check Barnes gamma functions and quantum Riemann-Hilbert solutions"
)]
struct Cli {
    /// Seed for the verification samplers.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance override for `verify`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Significant digits in printed values (1 to 17); shortest round-trip form by default.
    #[arg(long, global = true)]
    digits: Option<u8>,
    /// JSON file with tolerances, orders, seed, format and digits.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a function, e.g. `qrh eval lambda --w 1 --eta 0`.
    Eval {
        function: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Run a verification suite, or `all`.
    Verify {
        suite: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a function of t over `--rect a,b,c,d` or `--annulus r0,r1,p0,p1` with `--size n1,n2`.
    Grid {
        function: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Run every suite and summarize.
    Report {
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Settings {
    seed: u64,
    tol: Option<f64>,
    format: Option<Format>,
    digits: Option<u8>,
    config: CliConfig,
}

impl Settings {
    fn resolve(cli: &Cli, extra: &[(String, String)]) -> Result<Self, CliError> {
        let mut seed = cli.seed;
        let mut tol = cli.tol;
        let mut format = cli.format;
        let mut digits = cli.digits;
        let mut config_path = cli.config.clone();
        for (k, v) in extra {
            match k.as_str() {
                "seed" => seed = Some(v.parse().map_err(|_| CliError::usage(format!("--seed: bad value '{v}'")))?),
                "tol" => tol = Some(parse_real(v)?),
                "format" => {
                    format = Some(
                        clap::ValueEnum::from_str(v, true)
                            .map_err(|_| CliError::usage(format!("--format: bad value '{v}'")))?,
                    )
                }
                "digits" => {
                    digits = Some(v.parse().map_err(|_| CliError::usage(format!("--digits: bad value '{v}'")))?)
                }
                "config" => config_path = Some(PathBuf::from(v)),
                _ => unreachable!(),
            }
        }
        let config = match &config_path {
            Some(p) => CliConfig::load(p)?,
            None => CliConfig::default(),
        };
        let digits = digits.or(config.digits);
        if let Some(d) = digits {
            check_digits(d)?;
        }
        if let Some(t) = tol {
            if !(t >= 0.0) {
                return Err(CliError::usage("--tol must be non-negative"));
            }
        }
        Ok(Settings {
            seed: seed.or(config.seed).unwrap_or(DEFAULT_SEED),
            tol,
            format: format.or(config.format),
            digits,
            config,
        })
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn orders(&self) -> Orders {
        Orders { gamma2: self.config.orders.get("gamma2").copied(), f: self.config.orders.get("f").copied() }
    }

    fn suite_options(&self, suite: &str, samples: Option<usize>) -> SuiteOptions {
        SuiteOptions { samples, seed: self.seed, tol: self.tol.or_else(|| self.config.tolerances.get(suite).copied()) }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qrh: {e}");
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Eval { function, args } => cmd_eval(cli, function, args),
        Command::Verify { suite, samples, out } => {
            let s = Settings::resolve(cli, &[])?;
            cmd_verify(&s, suite, *samples, out.as_deref())
        }
        Command::Grid { function, args } => cmd_grid(cli, function, args),
        Command::Report { samples, out } => {
            let s = Settings::resolve(cli, &[])?;
            cmd_report(&s, *samples, out.as_deref())
        }
    }
}

fn cmd_eval(cli: &Cli, function: &str, tokens: &[String]) -> Result<u8, CliError> {
    eval::check_function(function)?;
    let m = ArgMap::parse(tokens, SWITCHES)?;
    let s = Settings::resolve(cli, &m.globals)?;
    let f = prepare(function, &m, s.orders(), true)?;
    let log = m.flag("log");
    let d = s.digits;
    let format = s.format_or(Format::Text);
    let (text, code) = match f.evaluate(None, log) {
        Ok(e) => {
            let text = match format {
                Format::Text => {
                    let mut t = complex(e.value, d);
                    for (k, v) in &e.extra {
                        t.push_str(&format!("\n{k} {}", complex(*v, d)));
                    }
                    t + "\n"
                }
                Format::Json => {
                    let mut v = json!({ "function": function, "status": "ok", "log": e.log, "value": json_complex(e.value, d) });
                    for (k, x) in &e.extra {
                        v[*k] = json_complex(*x, d);
                    }
                    v.to_string() + "\n"
                }
                Format::Csv => format!(
                    "function,value_re,value_im,status\n{function},{},{},ok\n",
                    output::real(e.value.re, d),
                    output::real(e.value.im, d)
                ),
            };
            (text, 0)
        }
        Err(sig @ (Status::Pole(_) | Status::Zero(_))) => {
            let (Status::Pole(at) | Status::Zero(at)) = sig else { unreachable!() };
            let kind = sig.label();
            let text = match format {
                Format::Text => format!("{kind} at {}\n", complex(at, d)),
                Format::Json => {
                    json!({ "function": function, "status": kind, "location": json_complex(at, d) }).to_string() + "\n"
                }
                Format::Csv => format!("function,value_re,value_im,status\n{function},,,{kind}\n"),
            };
            (text, EXIT_SIGNAL)
        }
        Err(Status::ExcludedRay) => return Err(CliError::malformed("t lies on the excluded ray of this sheet")),
        Err(Status::Domain(msg)) | Err(Status::Error(msg)) => return Err(CliError::malformed(msg)),
    };
    emit(&text, None)?;
    Ok(code)
}

fn verify_one(s: &Settings, name: &str, samples: Option<usize>) -> Result<VerificationReport, CliError> {
    let suite = find_suite(name)
        .ok_or_else(|| CliError::usage(format!("unknown suite '{name}' (known: all, {})", suite_names().join(", "))))?;
    suite.run(&s.suite_options(name, samples)).map_err(CliError::from)
}

fn report_text(r: &VerificationReport) -> String {
    format!(
        "{} {} samples={} excluded={} max_abs={:e} max_rel={:e}\n",
        if r.pass { "PASS" } else { "FAIL" },
        r.suite,
        r.samples,
        r.excluded_near_pole,
        r.max_abs_residual,
        r.max_rel_residual
    )
}

const REPORT_CSV_HEADER: &str = "suite,seed,samples,max_abs_residual,max_rel_residual,excluded_near_pole,pass\n";

fn report_csv(r: &VerificationReport) -> String {
    format!(
        "{},{},{},{:e},{:e},{},{}\n",
        r.suite, r.seed, r.samples, r.max_abs_residual, r.max_rel_residual, r.excluded_near_pole, r.pass
    )
}

fn cmd_verify(s: &Settings, suite: &str, samples: Option<usize>, out: Option<&Path>) -> Result<u8, CliError> {
    let names: Vec<&str> = if suite == "all" { suite_names() } else { vec![suite] };
    for n in &names {
        if find_suite(n).is_none() {
            verify_one(s, n, samples)?;
        }
    }
    let reports = names.iter().map(|n| verify_one(s, n, samples)).collect::<Result<Vec<_>, _>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let text = match s.format_or(Format::Json) {
        Format::Json if suite == "all" => {
            serde_json::to_string_pretty(&json!({ "seed": s.seed, "suites": reports, "pass": pass }))
                .expect("serializable")
                + "\n"
        }
        Format::Json => serde_json::to_string_pretty(&reports[0]).expect("serializable") + "\n",
        Format::Text => reports.iter().map(report_text).collect(),
        Format::Csv => REPORT_CSV_HEADER.to_string() + &reports.iter().map(report_csv).collect::<String>(),
    };
    emit(&text, out)?;
    Ok(if pass { 0 } else { EXIT_FAIL })
}

fn cmd_report(s: &Settings, samples: Option<usize>, out: Option<&Path>) -> Result<u8, CliError> {
    let rows = SUITES
        .iter()
        .map(|suite| {
            let opts = s.suite_options(suite.name, samples);
            let tol = opts.tol.unwrap_or(suite.tol);
            suite.run(&opts).map(|r| (suite, tol, r))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let passed = rows.iter().filter(|(_, _, r)| r.pass).count();
    let text = match s.format_or(Format::Json) {
        Format::Json => {
            let suites: Vec<_> = rows
                .iter()
                .map(|(suite, tol, r)| {
                    let mut v = serde_json::to_value(r).expect("serializable");
                    v["description"] = json!(suite.description);
                    v["tolerance"] = json!(tol);
                    v
                })
                .collect();
            serde_json::to_string_pretty(
                &json!({ "seed": s.seed, "passed": passed, "total": rows.len(), "suites": suites }),
            )
            .expect("serializable")
                + "\n"
        }
        Format::Text => {
            let mut t = String::new();
            for (suite, tol, r) in &rows {
                t.push_str(&format!(
                    "{:4} {:24} {:>9.2e} / {:<8.0e} {}\n",
                    if r.pass { "PASS" } else { "FAIL" },
                    suite.name,
                    r.max_rel_residual,
                    tol,
                    suite.description
                ));
            }
            t + &format!("{passed}/{} suites pass (seed {})\n", rows.len(), s.seed)
        }
        Format::Csv => REPORT_CSV_HEADER.to_string() + &rows.iter().map(|(_, _, r)| report_csv(r)).collect::<String>(),
    };
    emit(&text, out)?;
    Ok(0)
}

fn cmd_grid(cli: &Cli, function: &str, tokens: &[String]) -> Result<u8, CliError> {
    eval::check_function(function)?;
    if !GRID_FUNCTIONS.contains(&function) {
        return Err(CliError::usage(format!("grid samples functions of t: {}", GRID_FUNCTIONS.join(", "))));
    }
    let mut m = ArgMap::parse(tokens, SWITCHES)?;
    let s = Settings::resolve(cli, &m.globals)?;
    if s.format_or(Format::Csv) != Format::Csv {
        return Err(CliError::usage("grid output is CSV"));
    }
    let value = |m: &mut ArgMap, key: &str| -> Result<Option<String>, CliError> {
        match m.take(key) {
            Some(Some(v)) => Ok(Some(v)),
            Some(None) => Err(CliError::usage(format!("--{key} needs a value"))),
            None => Ok(None),
        }
    };
    let shape = match (value(&mut m, "rect")?, value(&mut m, "annulus")?) {
        (Some(r), None) => grid::Shape::rect(&parse_reals(&r, 4)?)?,
        (None, Some(a)) => grid::Shape::annulus(&parse_reals(&a, 4)?)?,
        _ => return Err(CliError::usage("grid needs exactly one of --rect and --annulus")),
    };
    let size = value(&mut m, "size")?.ok_or_else(|| CliError::usage("missing --size n1,n2"))?;
    let dims: Vec<usize> = size
        .split(',')
        .map(|p| p.trim().parse::<usize>().ok().filter(|&n| n > 0))
        .collect::<Option<Vec<_>>>()
        .filter(|v| v.len() == 2)
        .ok_or_else(|| CliError::usage(format!("--size needs two positive integers, got '{size}'")))?;
    let out = value(&mut m, "out")?.map(PathBuf::from);
    let f = prepare(function, &m, s.orders(), false)?;
    let text = grid::csv(&f, &shape, dims[0], dims[1], m.flag("log"), s.digits);
    emit(&text, out.as_deref())?;
    Ok(0)
}
