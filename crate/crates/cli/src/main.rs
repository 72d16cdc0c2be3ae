//! `tstring`: tables, theta terms and verifications for t-string functions
//! of the rank-one affine algebra.
//!
//! Exit codes: 0 success / verification pass, 1 verification failure,
//! 2 invalid input.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use num::rational::BigRational;

use tstring_core::analytic::EvalConfig;
use tstring_core::kostant::{table_for, tstring_a};
use tstring_core::lattice::{theta_term_list, theta_terms_to_json};
use tstring_core::verify::{formal_identity, integral_identity, limit_experiment};
use tstring_core::{rat, Error, Series3, StringProblem};

#[derive(Parser)]
#[command(name = "tstring", version, about = "t-string functions: Weyl-sum and indefinite-lattice routes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampling-based diagnostics. Accepted for a stable flag
    /// surface; the current subcommands are fully deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Instance {
    /// Level of the highest weight.
    #[arg(long)]
    m: i64,
    /// Finite label of the highest weight, in [0, m].
    #[arg(long)]
    k: i64,
    /// Finite label of the string base weight, in [0, m]; same parity as k.
    #[arg(long)]
    l: i64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the string coefficients K(t) along the delta-string.
    Strings {
        #[command(flatten)]
        instance: Instance,
        /// Number of delta-steps.
        #[arg(long, default_value_t = 10)]
        dmax: i64,
    },
    /// Emit the theta orbit terms up to a cutoff on N/2.
    Theta {
        #[command(flatten)]
        instance: Instance,
        /// Rational cutoff "p/r" on N/2; defaults to s + 1/8 + dmax.
        #[arg(long = "half-n-max")]
        half_n_max: Option<String>,
        #[arg(long, default_value_t = 10)]
        dmax: i64,
    },
    /// Exact comparison of the Weyl-sum route against the lattice route.
    VerifyFormal {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value_t = 10)]
        dmax: i64,
    },
    /// Numeric comparison of the string series against the radial average.
    VerifyIntegral {
        #[command(flatten)]
        instance: Instance,
        /// Circle radius, strictly inside (0, 1).
        #[arg(long, default_value_t = 0.6)]
        t: f64,
        /// Upper-half-plane point, e.g. "0.75i" or "0.1+1.2i".
        #[arg(long, default_value = "0.75i")]
        tau: String,
        /// Rational cutoff "p/r" on N/2 for the theta enumeration.
        #[arg(long = "half-n-max", default_value = "30")]
        half_n_max: String,
        /// Eta-product cutoff.
        #[arg(long, default_value_t = 60)]
        nmax: u32,
        /// Quadrature node cap for the doubling driver.
        #[arg(long = "quad-points", default_value_t = 1024)]
        quad_points: u32,
        /// Pass/fail tolerance on the absolute error.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// q-order of the series side.
        #[arg(long, default_value_t = 20)]
        qmax: i64,
    },
    /// Radial averages against the t -> 1 limit value theta_L * eta^-3.
    Limits {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value = "1i")]
        tau: String,
        #[arg(long = "half-n-max", default_value = "30")]
        half_n_max: String,
        #[arg(long, default_value_t = 60)]
        nmax: u32,
    },
}

fn parse_tau(s: &str) -> Result<Complex64, Error> {
    let bad = || Error::InvalidConfig(format!("cannot parse tau from `{}`", s));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if !compact.ends_with('i') {
        return Err(bad()); // purely real tau is outside the upper half plane anyway
    }
    let body = &compact[..compact.len() - 1];
    let parse_im = |im: &str| match im {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => im.parse::<f64>().ok(),
    };
    // whole body imaginary ("0.75i", "-i"), else split a signed tail off a
    // real part ("0.1+1.2i"); the tail split skips signs inside exponents
    let tau = if let Some(im) = parse_im(body) {
        Complex64::new(0.0, im)
    } else {
        let mut found = None;
        for (idx, c) in body.char_indices().rev() {
            if idx == 0 || (c != '+' && c != '-') {
                continue;
            }
            if matches!(body.as_bytes()[idx - 1], b'e' | b'E') {
                continue;
            }
            if let (Ok(re), Some(im)) = (body[..idx].parse::<f64>(), parse_im(&body[idx..])) {
                found = Some(Complex64::new(re, im));
                break;
            }
        }
        found.ok_or_else(bad)?
    };
    if !tau.im.is_finite() || !tau.re.is_finite() || tau.im <= 0.0 {
        return Err(Error::InvalidConfig(format!("Im(tau) = {} must be positive", tau.im)));
    }
    Ok(tau)
}

const MAX_CUTOFF: i64 = 1_000_000;
const MAX_DMAX: i64 = 10_000;

fn check_cutoff(cutoff: &BigRational) -> Result<(), Error> {
    if *cutoff > rat::int(MAX_CUTOFF) {
        return Err(Error::InvalidConfig(format!(
            "cutoff {} exceeds the supported bound {}",
            cutoff, MAX_CUTOFF
        )));
    }
    Ok(())
}

fn check_dmax(dmax: i64) -> Result<(), Error> {
    if !(0..=MAX_DMAX).contains(&dmax) {
        return Err(Error::InvalidConfig(format!(
            "dmax = {} must lie in [0, {}]",
            dmax, MAX_DMAX
        )));
    }
    Ok(())
}

fn series_to_rows(series: &Series3, dmax: i64) -> Vec<String> {
    (0..=dmax)
        .map(|kk| format!("{:<4} {}", kk, series.coeff_z0(&rat::int(kk))))
        .collect()
}

fn complex_json(z: Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.cmd {
        Cmd::Strings { instance, dmax } => {
            check_dmax(*dmax)?;
            let p = StringProblem::new(instance.m, instance.k, instance.l)?;
            let tbl = table_for(&p, *dmax)?;
            let series = tstring_a(&p, *dmax, &tbl)?;
            if cli.format == Format::Json {
                let out = serde_json::json!({
                    "m": instance.m,
                    "k": instance.k,
                    "l": instance.l,
                    "normalized": {"k": p.k(), "l": p.l()},
                    "s": rat::render(p.anomaly()),
                    "series": series.to_json(),
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("instance {}", p);
                println!("s = {}", p.anomaly());
                println!("k'   K(t) at lambda - k' delta");
                for row in series_to_rows(&series, *dmax) {
                    println!("{}", row);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Theta { instance, half_n_max, dmax } => {
            check_dmax(*dmax)?;
            let p = StringProblem::new(instance.m, instance.k, instance.l)?;
            let cutoff = match half_n_max {
                Some(s) => rat::parse(s)?,
                None => p.anomaly() + rat::frac(1, 8) + rat::int(*dmax),
            };
            check_cutoff(&cutoff)?;
            let terms = theta_term_list(&p, &cutoff)?;
            if cli.format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&theta_terms_to_json(&terms)).unwrap());
            } else {
                println!("instance {}, N/2 <= {}", p, cutoff);
                println!("halfN        x          y          sign  tshift  zshift");
                for t in &terms {
                    let (h, x, y) = (t.half_n.to_string(), t.x.to_string(), t.y.to_string());
                    println!("{h:<12} {x:<10} {y:<10} {:<5} {:<7} {}", t.sign, t.tshift, t.zshift);
                }
                println!("{} terms", terms.len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerifyFormal { instance, dmax } => {
            check_dmax(*dmax)?;
            let p = StringProblem::new(instance.m, instance.k, instance.l)?;
            let check = formal_identity(&p, *dmax)?;
            if cli.format == Format::Json {
                let diff = check.first_diff.as_ref().map(|d| {
                    serde_json::json!({
                        "q": rat::render(&d.q),
                        "z": rat::render(&d.z),
                        "t": d.t,
                        "lhs": d.lhs.to_string(),
                        "rhs": d.rhs.to_string(),
                    })
                });
                let out = serde_json::json!({
                    "pass": check.pass(),
                    "dmax": dmax,
                    "s": rat::render(&check.anomaly),
                    "first_diff": diff,
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("instance {}, dmax = {}", p, dmax);
                match &check.first_diff {
                    None => println!("PASS: exact equality of q^s a and ct(P_t (q^(-1/8) xi_t) theta)"),
                    Some(d) => println!("FAIL: first differing entry at {}", d),
                }
            }
            Ok(if check.pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::VerifyIntegral {
            instance,
            t,
            tau,
            half_n_max,
            nmax,
            quad_points,
            tol,
            qmax,
        } => {
            let p = StringProblem::new(instance.m, instance.k, instance.l)?;
            let tau = parse_tau(tau)?;
            if *t >= 1.0 {
                return Err(Error::InvalidConfig(format!("t = {} must be < 1 for the average", t)));
            }
            check_dmax(*qmax)?;
            let cutoff = rat::parse(half_n_max)?;
            check_cutoff(&cutoff)?;
            let cfg = EvalConfig {
                tau,
                t: *t,
                half_n_max: cutoff,
                nmax: *nmax,
                quad_points: *quad_points,
                qmax: *qmax,
            };
            let check = integral_identity(&p, &cfg)?;
            let pass = check.abs_err <= *tol;
            if cli.format == Format::Json {
                let out = serde_json::json!({
                    "lhs": complex_json(check.series_value),
                    "rhs": complex_json(check.average_value),
                    "abs_err": check.abs_err,
                    "pass": pass,
                    "config": {
                        "m": instance.m, "k": instance.k, "l": instance.l,
                        "t": t, "tau": complex_json(tau),
                        "half_n_max": rat::render(&cfg.half_n_max),
                        "nmax": nmax, "quad_points": quad_points,
                        "qmax": qmax, "tol": tol, "seed": cli.seed,
                    },
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("instance {}, tau = {} + {}i, t = {}", p, tau.re, tau.im, t);
                println!("series  = {:+.12e} {:+.12e}i", check.series_value.re, check.series_value.im);
                println!("average = {:+.12e} {:+.12e}i", check.average_value.re, check.average_value.im);
                println!("abs_err = {:.3e} (tail estimate {:.3e})", check.abs_err, check.tail_estimate);
                println!("{}", if pass { "PASS" } else { "FAIL" });
            }
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Limits { instance, tau, half_n_max, nmax } => {
            let p = StringProblem::new(instance.m, instance.k, instance.l)?;
            let tau = parse_tau(tau)?;
            let cutoff: BigRational = rat::parse(half_n_max)?;
            check_cutoff(&cutoff)?;
            let steps = [(0.9, 256u32), (0.99, 2048u32), (0.999, 16384u32)];
            let (target, rows) = limit_experiment(&p, tau, &cutoff, *nmax, &steps)?;
            if cli.format == Format::Json {
                let out = serde_json::json!({
                    "target": complex_json(target),
                    "rows": rows.iter().map(|r| serde_json::json!({
                        "t": r.t, "quad_points": r.nodes, "abs_err": r.abs_err,
                    })).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("instance {}, tau = {} + {}i", p, tau.re, tau.im);
                println!("target theta_L * eta^-3 = {:+.12e} {:+.12e}i", target.re, target.im);
                println!("t        quad_points  abs_err");
                for r in &rows {
                    println!("{:<8} {:<12} {:.6e}", r.t, r.nodes, r.abs_err);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
