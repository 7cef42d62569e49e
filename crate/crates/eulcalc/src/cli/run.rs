//! Subcommand definitions and dispatch.
//!
//! Exit codes: 0 when every identity check passes, 1 when a check fails,
//! 2 on usage, parse, or validation errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::alexander::parse_polynomial;
use crate::exact::{dedekind_sum, Rational};
use crate::hfmodel::{eul_of_model, euler_red_identity_check, minimal_truncation_level, SpincId};
use crate::lens::{LensSpace, Orientation};
use crate::surgery::{IdentityCheck, InvariantReport, SurgeryProblem};
use crate::Error;

use super::problem::{parse_problem_file, HfModelSpec};
use super::report::{render_report, render_suites, Format};
use super::suites::{run_suite, Suite, SuiteReport};

#[derive(Parser)]
#[command(
    name = "eulcalc",
    version,
    about = "Exact calculator for Dedekind sums, lens-space correction terms, \
             renormalized Euler characteristics, and Casson-Walker invariants"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dedekind sum s(q, p); the second argument is the modulus
    Dedekind {
        #[arg(allow_negative_numbers = true)]
        q: i64,
        p: i64,
    },
    /// Lens space invariants: correction terms, Euler characteristics,
    /// Casson-Walker value, and the torsion cross-check
    Lens {
        p: i64,
        #[arg(allow_negative_numbers = true)]
        q: i64,
        /// +1 for L(p,q), -1 for L(-p,q)
        #[arg(long, default_value = "+1", allow_hyphen_values = true)]
        orientation: String,
        /// Also list the per-structure d and Eul values
        #[arg(long)]
        per_spinc: bool,
    },
    /// Evaluate the surgery formulas for a p/q filling
    Surgery {
        /// Problem file with a `surgery` section (instead of flags)
        #[arg(long, conflicts_with_all = ["p", "q", "d", "tors", "alex", "base_eul", "base_lambda"])]
        file: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true, required_unless_present = "file")]
        p: Option<i64>,
        #[arg(long, allow_negative_numbers = true, required_unless_present = "file")]
        q: Option<i64>,
        /// Divisibility of the longitude
        #[arg(long, default_value_t = 1)]
        d: i64,
        /// Order of the torsion of H_1 of the complement
        #[arg(long, default_value_t = 1)]
        tors: i64,
        /// Symmetrized Alexander polynomial, e.g. "t - 1 + t^-1"
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        alex: String,
        /// Base Euler sum of the trivial filling
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        base_eul: Rational,
        /// Base scaled Casson-Walker invariant of the trivial filling
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        base_lambda: Rational,
    },
    /// HF+ model operations
    Hfmodel {
        #[command(subcommand)]
        command: HfmodelCommand,
    },
    /// Run identity verification sweeps
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Sweep bound for (p, q) grids
        #[arg(long, default_value_t = 50)]
        pmax: i64,
        /// Problem file with a `sweep` section (instead of flags)
        #[arg(long, conflicts_with_all = ["suite", "pmax"])]
        file: Option<PathBuf>,
        /// Print every case, not only failures
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Subcommand)]
enum HfmodelCommand {
    /// Validate a model file and check the truncation arithmetic
    Check {
        /// Problem file with an `hfmodel` section
        file: PathBuf,
        /// Override the multiplier p of the base rho' term
        #[arg(long, allow_negative_numbers = true)]
        p: Option<i64>,
        /// Truncation level (repeatable); defaults to {N0, N0+7, N0+100}
        #[arg(long = "n")]
        n: Vec<i64>,
    },
}

/// Parse argv and run the requested subcommand, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Dedekind { q, p } => {
            let s = dedekind_sum(q, p).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Text => println!("{s}"),
                Format::Json => {
                    let mut report = InvariantReport::new(&format!("dedekind s({q},{p})"));
                    report.push_input("q", q);
                    report.push_input("p", p);
                    report.push_value("s", s, &[]);
                    println!("{}", render_report(&report, Format::Json));
                }
            }
            Ok(0)
        }
        Command::Lens {
            p,
            q,
            orientation,
            per_spinc,
        } => {
            let orientation = parse_orientation(&orientation)?;
            let lens = LensSpace::new(p, q, orientation).map_err(|e| e.to_string())?;
            let report = lens_report(&lens, per_spinc).map_err(|e| e.to_string())?;
            println!("{}", render_report(&report, cli.format));
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Surgery {
            file,
            p,
            q,
            d,
            tors,
            alex,
            base_eul,
            base_lambda,
        } => {
            let problem = match file {
                Some(path) => parse_problem_file(&path)
                    .map_err(|e| e.to_string())?
                    .surgery
                    .ok_or("problem file has no `surgery` section")?,
                None => {
                    let alex = parse_polynomial(&alex).map_err(|e| e.to_string())?;
                    SurgeryProblem::new(
                        p.expect("required by clap"),
                        q.expect("required by clap"),
                        d,
                        tors,
                        alex,
                        base_eul,
                        base_lambda,
                    )
                    .map_err(|e| e.to_string())?
                }
            };
            let report = problem.report();
            println!("{}", render_report(&report, cli.format));
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Hfmodel {
            command: HfmodelCommand::Check { file, p, n },
        } => {
            let spec = parse_problem_file(&file)
                .map_err(|e| e.to_string())?
                .hfmodel
                .ok_or("problem file has no `hfmodel` section")?;
            let (report, code) = hfmodel_check_report(&file, &spec, p, &n)?;
            println!("{}", render_report(&report, cli.format));
            Ok(code)
        }
        Command::Verify {
            suite,
            pmax,
            file,
            verbose,
        } => {
            let reports = match file {
                Some(path) => {
                    let sweep = parse_problem_file(&path)
                        .map_err(|e| e.to_string())?
                        .sweep
                        .ok_or("problem file has no `sweep` section")?;
                    let mut suites: Vec<Suite> = sweep
                        .suites
                        .iter()
                        .filter_map(|name| Suite::from_name(name))
                        .collect();
                    if suites.is_empty() {
                        suites.push(Suite::All);
                    }
                    let mut all: Vec<SuiteReport> = Vec::new();
                    for s in suites {
                        all.extend(run_verify(s, sweep.pmax)?);
                    }
                    all
                }
                None => run_verify(suite, pmax)?,
            };
            println!("{}", render_suites(&reports, cli.format, verbose));
            Ok(if reports.iter().all(|r| r.passed()) {
                0
            } else {
                1
            })
        }
    }
}

fn run_verify(suite: Suite, pmax: i64) -> Result<Vec<SuiteReport>, String> {
    if pmax < 2 {
        return Err(format!("pmax must be at least 2, got {pmax}"));
    }
    run_suite(suite, pmax).map_err(|e| e.to_string())
}

fn parse_orientation(value: &str) -> Result<Orientation, String> {
    match value.trim() {
        "+1" | "1" => Ok(Orientation::Positive),
        "-1" => Ok(Orientation::Negative),
        other => Err(format!("orientation must be +1 or -1, got `{other}`")),
    }
}

fn lens_report(lens: &LensSpace, per_spinc: bool) -> crate::Result<InvariantReport> {
    let mut report = InvariantReport::new(&format!("lens space {lens}"));
    report.push_input("p", lens.p());
    report.push_input("q", lens.q());
    report.push_input("orientation", lens.orientation().sign());

    let d = lens.d_invariants();
    let eul = lens.eul();
    let lambda = lens.lambda();

    // sum identity: d-invariants of L(-p,q) add up to p s(q,p)
    let s = dedekind_sum(lens.q(), lens.p())?;
    let expected_sum = Rational::from_integer(lens.p() * lens.orientation().sign()) * -s;
    let d_total: Rational = d.values().sum();
    report.push_check(IdentityCheck::from_residual(
        "d-sum",
        d_total - expected_sum,
    ));

    let mut eul_sorted: Vec<Rational> = eul.values().cloned().collect();
    eul_sorted.sort();
    let torsion = lens.torsion_hat_multiset();
    let mismatches = eul_sorted
        .iter()
        .zip(torsion.iter())
        .filter(|(a, b)| a != b)
        .count();
    report.push_check(IdentityCheck::from_residual(
        "torsion-multiset",
        Rational::from_integer(mismatches as i64),
    ));

    report.push_value("lambda", lambda, &["d-sum", "torsion-multiset"]);
    if per_spinc {
        report.push_sequence("d", d.into_values().collect());
        report.push_sequence("eul", eul.into_values().collect());
    }
    Ok(report)
}

fn hfmodel_check_report(
    path: &Path,
    spec: &HfModelSpec,
    p_override: Option<i64>,
    n_override: &[i64],
) -> Result<(InvariantReport, i32), String> {
    let model = &spec.model;
    let p = p_override.unwrap_or(spec.p);
    let n0 = minimal_truncation_level(model);
    let n_list: Vec<i64> = if !n_override.is_empty() {
        n_override.to_vec()
    } else {
        spec.n_list
            .clone()
            .unwrap_or_else(|| vec![n0, n0 + 7, n0 + 100])
    };

    let mut report = InvariantReport::new(&format!("hfmodel check {}", path.display()));
    report.push_input("towers", model.towers().len());
    report.push_input("reduced", model.reduced().len());
    report.push_input("p", p);
    report.push_input("n0", n0);
    report.push_input(
        "n_list",
        n_list
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );

    for tower in model.towers() {
        let value = eul_of_model(model, &tower.spinc_id).expect("tower label present");
        report.push_value(
            &format!("eul[{}]", tower.spinc_id),
            value,
            &["truncation-constant"],
        );
    }

    let base: BTreeMap<SpincId, Rational> = spec.rho_prime_base.clone();
    let code = match euler_red_identity_check(model, p, &base, &n_list) {
        Ok(k) => {
            report.push_value("k", k, &["truncation-constant"]);
            report.push_check(IdentityCheck::from_residual(
                "truncation-constant",
                Rational::zero(),
            ));
            0
        }
        Err(Error::TruncationNotConstant { .. }) => {
            report.push_check(IdentityCheck::from_residual(
                "truncation-constant",
                Rational::one(),
            ));
            1
        }
        Err(e) => return Err(e.to_string()),
    };
    Ok((report, code))
}
