//! `qvir`: batch front end for the q-Virasoro verification engine.
//!
//! Every command prints one JSON document (or an aligned table with
//! `--pretty`). Exit status is 0 on success, 1 when a verification fails
//! and 2 on invalid arguments or refused bounds.

mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qvir_arith::identity::{sum_identity_lhs, sum_identity_rhs};
use qvir_arith::Scalar;
use qvir_core::acceptance;
use qvir_core::checks::{
    verify_appendix_deltas_with, verify_defining_relation, verify_screening_commutator, verify_split,
    DeltaPair, IdentityReport, Operators, Sign,
};
use qvir_core::config::Bounds;
use qvir_core::fock::Sector;
use qvir_core::partition::Partition;
use qvir_core::singvec::{verify_eigenvalue, verify_macdonald};
use qvir_core::symfunc::{macdonald_p, p_to_m};
use qvir_core::verma::{gram_json, gram_matrix, kac_det, modular_kac_samples, verify_kac, KacMode};
use qvir_core::Error;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "qvir", version, about = "Exact computations for the q-deformed Virasoro algebra")]
struct Cli {
    /// Render aligned tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Bounds file in key = value format (default: $QVIR_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kac determinant at a level, or its images at random points modulo a prime.
    KacDet {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        probabilistic: bool,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Compare the Kac determinant with the product over (r,s).
    VerifyKac {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        probabilistic: bool,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Gram matrix of the Verma module at a level.
    Gram {
        #[arg(long)]
        level: u32,
    },
    /// Macdonald polynomial P_λ in the power-sum and monomial bases.
    Macdonald {
        #[arg(long)]
        partition: Partition,
    },
    /// Singular vector of F_{r,s} and its Macdonald polynomial.
    Singular {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        /// Extra number of variables for the eigenvalue check.
        #[arg(long = "N")]
        n_vars: Option<u32>,
    },
    /// Macdonald operator as ψ·T plus zero-mode terms.
    VerifySplit {
        #[arg(long = "N")]
        n_vars: u32,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
        sector: Sector,
        #[arg(long = "L")]
        max_level: u32,
    },
    /// Defining relation [T_n, T_m] on a Fock sector.
    VerifyDefrel {
        #[arg(long, allow_hyphen_values = true)]
        n: i32,
        #[arg(long, allow_hyphen_values = true)]
        m: i32,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
        sector: Sector,
        #[arg(long = "L")]
        max_level: u32,
    },
    /// [T_n, S_±] as a total difference.
    VerifyScreening {
        #[arg(long, allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long, allow_hyphen_values = true)]
        n: i32,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
        sector: Sector,
        #[arg(long = "L")]
        max_level: u32,
    },
    /// Delta-function commutator of a B and an S operator.
    VerifyAppendix {
        #[arg(long)]
        pair: DeltaPair,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
        sector: Sector,
        #[arg(long = "L")]
        max_level: u32,
        /// Modes of B range over -K..=K.
        #[arg(long, default_value_t = 2)]
        modes: u32,
        /// Value of q^ε in the B operators; only p satisfies the relations.
        #[arg(long, default_value = "q/t")]
        q_epsilon: Scalar,
    },
    /// Σ_i Π_{j≠i} (1 - t w_j/w_i)/(1 - w_j/w_i) = (1 - t^r)/(1 - t).
    #[command(name = "verify-identity-c106")]
    VerifyIdentity {
        #[arg(long)]
        r: u32,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Only these criteria (comma-separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
    /// Print the effective bounds in config-file format.
    Bounds,
}

/// What a command produced: a document and whether it verified.
struct Output {
    doc: Value,
    passed: bool,
    failure: Option<String>,
}

impl Output {
    fn ok(doc: Value) -> Self {
        Output { doc, passed: true, failure: None }
    }

    fn verdict(doc: Value, passed: bool, failure: impl FnOnce() -> String) -> Self {
        let failure = (!passed).then(failure);
        Output { doc, passed, failure }
    }
}

fn identity(report: IdentityReport) -> Output {
    let failure = report
        .failures()
        .next()
        .map(|c| format!("modes {:?} state {}: residual {}", c.modes, c.state, c.residual));
    Output {
        passed: report.passed(),
        doc: report.to_json(),
        failure,
    }
}

fn kac_mode(probabilistic: bool, points: usize, seed: u64) -> KacMode {
    if probabilistic {
        KacMode::Probabilistic { points, seed }
    } else {
        KacMode::Exact
    }
}

fn check_level(b: &Bounds, level: u32, probabilistic: bool) -> Result<(), Error> {
    if probabilistic {
        Bounds::check("level", level as i64, b.kac_probabilistic)
    } else {
        Bounds::check("level", level as i64, b.kac_exact)
    }
}

fn execute(cli: &Cli, bounds: &Bounds) -> Result<Output, Error> {
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::KacDet { level, probabilistic, points } => {
            check_level(bounds, *level, *probabilistic)?;
            if *probabilistic {
                let samples = modular_kac_samples(*level, *points, seed)?;
                Output::ok(json!({
                    "level": level,
                    "mode": "probabilistic",
                    "seed": seed,
                    "samples": samples.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
                }))
            } else {
                Output::ok(json!({
                    "level": level,
                    "mode": "exact",
                    "determinant": kac_det(*level).to_string(),
                }))
            }
        }
        Command::VerifyKac { level, probabilistic, points } => {
            check_level(bounds, *level, *probabilistic)?;
            let r = verify_kac(*level, kac_mode(*probabilistic, *points, seed))?;
            Output::verdict(r.to_json(), r.lambda_part_match, || {
                format!("λ-dependent part differs at level {level}")
            })
        }
        Command::Gram { level } => {
            check_level(bounds, *level, false)?;
            Output::ok(gram_json(*level, &gram_matrix(*level)))
        }
        Command::Macdonald { partition } => {
            Bounds::check("|λ|", partition.weight() as i64, bounds.macdonald)?;
            let p = macdonald_p(partition);
            Output::ok(json!({
                "partition": partition.parts(),
                "p": p.to_json(),
                "m": p_to_m(&p)?.to_json(),
            }))
        }
        Command::Singular { r, s, n_vars } => {
            Bounds::check("rs", (*r as i64) * (*s as i64), bounds.singular)?;
            let res = verify_macdonald(*r, *s, Some(seed))?;
            let mut passed = res.passed();
            let mut doc = res.to_json();
            if let Some(n) = n_vars {
                Bounds::check("N", *n as i64, bounds.variables)?;
                if *n < r * s {
                    return Err(Error::Invalid(format!("N must be at least rs = {}", r * s)));
                }
                let (expected, ok) = verify_eigenvalue(*r, *s, &res.vector, *n)?;
                passed &= ok;
                doc["requested_eigenvalue"] = json!({
                    "N": n,
                    "expected": expected.to_string(),
                    "status": if ok { "pass" } else { "fail" },
                });
            }
            Output::verdict(doc, passed, || format!("singular vector of F_({r},{s}) does not match"))
        }
        Command::VerifySplit { n_vars, sector, max_level } => {
            Bounds::check("N", *n_vars as i64, bounds.variables)?;
            Bounds::check("L", *max_level as i64, bounds.truncation)?;
            identity(verify_split(*n_vars, *sector, *max_level))
        }
        Command::VerifyDefrel { n, m, sector, max_level } => {
            Bounds::check("|n|", n.abs() as i64, bounds.mode)?;
            Bounds::check("|m|", m.abs() as i64, bounds.mode)?;
            Bounds::check("L", *max_level as i64, bounds.truncation)?;
            identity(verify_defining_relation(*n, *m, *sector, *max_level))
        }
        Command::VerifyScreening { sign, n, sector, max_level } => {
            Bounds::check("|n|", n.abs() as i64, bounds.mode)?;
            Bounds::check("L", *max_level as i64, bounds.truncation)?;
            identity(verify_screening_commutator(*sign, *n, *sector, *max_level))
        }
        Command::VerifyAppendix { pair, sector, max_level, modes, q_epsilon } => {
            Bounds::check("modes", *modes as i64, bounds.mode)?;
            Bounds::check("L", *max_level as i64, bounds.truncation)?;
            if q_epsilon.is_zero() {
                return Err(Error::Invalid("q^ε must be nonzero".into()));
            }
            let k = *modes as i32;
            let ops = Operators::standard().with_b_parameter(q_epsilon);
            identity(verify_appendix_deltas_with(&ops, *pair, -k..=k, *sector, *max_level))
        }
        Command::VerifyIdentity { r } => {
            Bounds::check("r", *r as i64, bounds.sum_identity)?;
            if *r == 0 {
                return Err(Error::Invalid("r must be at least 1".into()));
            }
            let lhs = sum_identity_lhs(*r as usize)?;
            let rhs = sum_identity_rhs(*r as usize);
            let ok = lhs == rhs;
            Output::verdict(
                json!({
                    "r": r,
                    "lhs": lhs.to_string(),
                    "rhs": rhs.to_string(),
                    "status": if ok { "pass" } else { "fail" },
                }),
                ok,
                || format!("lhs - rhs = {}", lhs.sub(&rhs)),
            )
        }
        Command::Selftest { only } => {
            let results: Vec<_> = acceptance::criteria()
                .iter()
                .filter(|c| only.is_empty() || only.contains(&c.id))
                .map(acceptance::run)
                .collect();
            let passed = results.iter().all(|r| r.passed());
            let failed: Vec<String> = results
                .iter()
                .filter(|r| !r.passed())
                .map(|r| format!("criterion {}: {}", r.id, r.detail))
                .collect();
            Output::verdict(
                json!({
                    "criteria": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                    "status": if passed { "pass" } else { "fail" },
                }),
                passed,
                || failed.join("\n"),
            )
        }
        Command::Bounds => Output::ok(Value::String(render::bounds_text(bounds))),
    })
}

/// Removes run-dependent timing fields so equal runs print equal bytes.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| k != "elapsed_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("thread pool is configured once");
    }
    let bounds = match Bounds::resolve(cli.config.as_deref()) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = match execute(&cli, &bounds) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut doc = out.doc;
    if !cli.timing {
        strip_timing(&mut doc);
    }
    let text = match (&doc, cli.pretty) {
        (Value::String(s), _) => s.clone(),
        (_, true) => render::pretty(&doc),
        (_, false) => format!("{doc}\n"),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if let Some(f) = out.failure {
        eprintln!("verification failed: {f}");
    }
    if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
