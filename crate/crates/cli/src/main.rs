//! `sunit`: verification suites, coefficient tables and the counting-bound pipeline.
//!
//! Every command except `table` prints one JSON run report on stdout. Exit
//! status is 0 when all checks pass, 1 when a check fails and 2 for usage or
//! parameter-validation errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sunit_pade::optimizer::{self, OptimizerError, SearchSpec, TheoremConstants};
use sunit_pade::pipeline::{self, Choice, EvertseParams, PipelineError, Precision};
use sunit_pade::verify::{self, Check, VerifyOptions};
use sunit_pade::{Execution, RationalPolynomial};

#[derive(Parser)]
#[command(
    name = "sunit",
    version,
    about = "Exact Padé checks and S-unit counting bounds"
)]
struct Cli {
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run exact and sampled verification suites for n <= max-n.
    Verify {
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..))]
        max_n: u32,
        /// Comma-separated suites (default: all).
        #[arg(long, value_delimiter = ',')]
        checks: Vec<Check>,
        /// Samples per degree for the sampled bounds.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Print exact coefficients of every polynomial attached to n.
    Table {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Counting-bound pipeline.
    Bound {
        #[command(subcommand)]
        command: BoundCommand,
    },
}

#[derive(Subcommand)]
enum BoundCommand {
    /// Evaluate the bound for one parameter tuple.
    Eval {
        #[arg(long = "B")]
        b: String,
        #[arg(long)]
        r0: u64,
        #[arg(long)]
        k: u64,
        #[arg(long = "ln2C")]
        ln2c: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 1)]
        s: u64,
    },
    /// Recompute a published parameter choice and digit-match its constants.
    Reproduce {
        #[arg(long)]
        choice: Choice,
    },
    /// Grid search driven by a TOML config.
    Optimize {
        config: PathBuf,
        /// Also report the Pareto front of coefficient tuples.
        #[arg(long)]
        pareto: bool,
    },
    /// Compare both choices against the competing bound and the closed form.
    CompareEvertse {
        #[arg(long, default_value_t = 50)]
        m_max: u64,
        #[arg(long, default_value_t = 50)]
        s_max: u64,
        #[arg(long, default_value = "3.1")]
        theorem_coeff: String,
        #[arg(long, default_value = "3.4")]
        theorem_base_m: String,
        #[arg(long, default_value_t = 45)]
        theorem_base_s: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    parameters: Value,
    results: Value,
    checks_passed: u64,
    checks_failed: u64,
    wall_time_ms: u64,
}

enum Failure {
    Usage(String),
}

struct Outcome {
    parameters: Value,
    results: Value,
    passed: u64,
    failed: u64,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn pipeline_failure(e: PipelineError) -> Failure {
    usage(e)
}

fn run_verify(
    max_n: u32,
    checks: Vec<Check>,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Outcome, Failure> {
    let checks = if checks.is_empty() {
        Check::ALL.to_vec()
    } else {
        checks
    };
    let opts = VerifyOptions {
        samples,
        seed,
        exec,
        ..VerifyOptions::new(max_n)
    };
    let reports = verify::run(&checks, &opts);
    let passed = reports.iter().map(|r| r.passed as u64).sum();
    let failed = reports.iter().map(|r| r.failed as u64).sum();
    for r in reports.iter().filter(|r| !r.all_pass()) {
        for c in r.cases.iter().filter(|c| !c.pass) {
            eprintln!(
                "{} failed at n = {}: {}",
                r.check,
                c.n,
                c.detail.as_deref().unwrap_or("")
            );
        }
    }
    Ok(Outcome {
        parameters: json!({
            "max_n": max_n,
            "checks": checks.iter().map(|c| c.name()).collect::<Vec<_>>(),
            "samples": samples,
            "seed": seed,
        }),
        results: to_value(&reports),
        passed,
        failed,
    })
}

fn coeff_strings(p: &RationalPolynomial) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

fn run_table(n: u32, format: Format) -> Result<String, Failure> {
    let pair = sunit_pade::build(n).map_err(usage)?;
    let rows = [
        ("P0", &pair.p0),
        ("P1", &pair.p1),
        ("A", &pair.a),
        ("B", &pair.b),
        ("V", &pair.v),
        ("W", &pair.w),
    ];
    Ok(match format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("n".into(), json!(n));
            for (name, p) in rows {
                obj.insert(name.into(), json!(coeff_strings(p)));
            }
            serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable")
        }
        Format::Csv => {
            let width = rows
                .iter()
                .map(|(_, p)| p.coeffs().len())
                .max()
                .unwrap_or(0);
            let mut out = String::from("polynomial");
            for k in 0..width {
                out.push_str(&format!(",c{k}"));
            }
            out.push('\n');
            for (name, p) in rows {
                let mut cells = coeff_strings(p);
                cells.resize(width, String::new());
                out.push_str(name);
                for c in cells {
                    out.push(',');
                    out.push_str(&c);
                }
                out.push('\n');
            }
            out.trim_end().to_owned()
        }
    })
}

fn run_bound(
    cmd: BoundCommand,
    prec: Precision,
    exec: Execution,
) -> Result<(String, Outcome), Failure> {
    match cmd {
        BoundCommand::Eval {
            b,
            r0,
            k,
            ln2c,
            n,
            m,
            s,
        } => {
            let params = EvertseParams {
                b: prec.parse(&b).map_err(pipeline_failure)?,
                r0,
                k,
                ln2c: prec.parse(&ln2c).map_err(pipeline_failure)?,
                n_step4: n,
                m,
                s,
            };
            let parameters = json!({"B": b, "r0": r0, "k": k, "ln2C": ln2c, "n": n, "m": m, "s": s,
                                    "precision_digits": prec.digits()});
            let outcome = match pipeline::assemble_bound(&params, prec) {
                Ok(bd) => Outcome {
                    parameters,
                    results: to_value(&bd),
                    passed: 1,
                    failed: 0,
                },
                Err(PipelineError::DominanceUnverified) => Outcome {
                    parameters,
                    results: json!({"error": PipelineError::DominanceUnverified.to_string()}),
                    passed: 0,
                    failed: 1,
                },
                Err(e) => return Err(pipeline_failure(e)),
            };
            Ok(("bound eval".into(), outcome))
        }
        BoundCommand::Reproduce { choice } => {
            let rep = pipeline::reproduce(choice, prec).map_err(pipeline_failure)?;
            let passed = rep.checks.iter().filter(|c| c.pass).count() as u64;
            let failed =
                rep.checks.len() as u64 - passed + u64::from(!rep.breakdown.fpart_dominates);
            for c in rep.checks.iter().filter(|c| !c.pass) {
                eprintln!(
                    "{} mismatch: printed {}, computed {}",
                    c.name, c.printed, c.computed
                );
            }
            Ok((
                "bound reproduce".into(),
                Outcome {
                    parameters: json!({"choice": choice.to_string(), "precision_digits": prec.digits()}),
                    results: to_value(&rep),
                    passed,
                    failed,
                },
            ))
        }
        BoundCommand::Optimize { config, pareto } => {
            let spec = SearchSpec::from_file(&config, prec).map_err(usage)?;
            let parameters = json!({"config": config.display().to_string(), "spec": to_value(&spec.echo()),
                                    "precision_digits": prec.digits()});
            let outcome = match optimizer::grid_search_with(&spec, prec, exec) {
                Ok(ranked) => {
                    let mut results = json!({"ranked": to_value(&ranked)});
                    if pareto {
                        let front =
                            optimizer::pareto_front_with(&spec, prec, exec).map_err(usage)?;
                        results["pareto_front"] = to_value(&front);
                    }
                    Outcome {
                        parameters,
                        results,
                        passed: 1,
                        failed: 0,
                    }
                }
                Err(e @ OptimizerError::EmptyFeasibleSet) => Outcome {
                    parameters,
                    results: json!({"error": e.to_string()}),
                    passed: 0,
                    failed: 1,
                },
                Err(e) => return Err(usage(e)),
            };
            Ok(("bound optimize".into(), outcome))
        }
        BoundCommand::CompareEvertse {
            m_max,
            s_max,
            theorem_coeff,
            theorem_base_m,
            theorem_base_s,
        } => {
            let constants =
                TheoremConstants::parse(&theorem_coeff, &theorem_base_m, theorem_base_s, prec)
                    .map_err(usage)?;
            let ev = optimizer::compare_evertse_report(m_max, s_max, prec, exec).map_err(usage)?;
            let th = optimizer::theorem_form_report(m_max, s_max, &constants, prec, exec)
                .map_err(usage)?;
            let mut passed = ev.passed_cells + th.passed_cells;
            let mut failed = (ev.cells - ev.passed_cells) + (th.cells - th.passed_cells);
            match &th.certificate {
                Some(c) if c.holds => passed += 1,
                Some(c) => {
                    failed += 1;
                    eprintln!("certificate fails: {}", c.detail);
                }
                None => {}
            }
            Ok((
                "bound compare-evertse".into(),
                Outcome {
                    parameters: json!({"m_max": m_max, "s_max": s_max, "theorem_constants": to_value(&constants),
                                        "precision_digits": prec.digits()}),
                    results: json!({"evertse": to_value(&ev), "theorem_form": to_value(&th)}),
                    passed,
                    failed,
                },
            ))
        }
    }
}

fn emit(command: &str, outcome: Outcome, start: Instant) -> ExitCode {
    let report = RunReport {
        command: command.to_owned(),
        parameters: outcome.parameters,
        results: outcome.results,
        checks_passed: outcome.passed,
        checks_failed: outcome.failed,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("serializable")
    );
    if report.checks_failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let result = match cli.command {
        Command::Verify {
            max_n,
            checks,
            samples,
            seed,
        } => run_verify(max_n, checks, samples, seed, exec).map(|o| ("verify".to_owned(), o)),
        Command::Table { n, format } => {
            return match run_table(n, format) {
                Ok(text) => {
                    println!("{text}");
                    ExitCode::SUCCESS
                }
                Err(Failure::Usage(msg)) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(2)
                }
            };
        }
        Command::Bound { command } => Precision::from_env()
            .map_err(usage)
            .and_then(|prec| run_bound(command, prec, exec)),
    };
    match result {
        Ok((command, outcome)) => emit(&command, outcome, start),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
