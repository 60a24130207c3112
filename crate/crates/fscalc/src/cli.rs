//! Command-line frontend: space-literal parsing, command dispatch, JSON
//! output, SVG emission, and batch mode.
//!
//! Exit codes are a contract: `0` accept/certified, `1` reject (with a
//! one-line reason), `2` usage error. `--json` switches the machine-readable
//! report on; `--batch FILE.json` runs a JSON array of argument vectors
//! through the same dispatcher. The default `ε` is `1/64`, overridable by
//! the `FSCALC_EPS` environment variable and per run by `--eps`.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bootstrap::{bootstrap, regularity_theorem, BootstrapConfig};
use crate::embed::{embeds, join};
use crate::green::{
    apply_operator, apply_regularizer, apply_system, lookup, Applied, Problem, SystemOutcome,
};
use crate::ns::{ns_existence, NsQuery};
use crate::product::{
    map_b_sharp, map_b_standard, optimal_target, p_star, product_bounded, product_defined,
};
use crate::rat::Rat;
use crate::sector::{dk_check, identify_classical, sobolev_index};
use crate::space::{DomainCtx, SpaceParam};
use crate::svg::render_trace;
use crate::trace::{replay, BootstrapTrace, Verdict};
use crate::Error;

#[derive(Debug, Parser)]
#[command(
    name = "fscalc",
    version,
    about = "Exact-arithmetic calculus for Besov/Triebel-Lizorkin space parameters",
    after_help = "Space literals: <scale>:<s>,<p>,<q> with rationals a/b and inf, e.g. F:5/2,3,2 or B:3/2,inf,inf.\nExit codes: 0 accept/certified, 1 reject, 2 usage error."
)]
struct Cli {
    /// Emit a machine-readable JSON report instead of the human summary.
    #[arg(long, global = true)]
    json: bool,
    /// Run a JSON file holding an array of argument vectors.
    #[arg(long, value_name = "FILE.json")]
    batch: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemArg {
    Dirichlet,
    Neumann,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Problem {
        match p {
            ProblemArg::Dirichlet => Problem::Dirichlet,
            ProblemArg::Neumann => Problem::Neumann,
        }
    }
}

#[derive(Debug, Args)]
struct CtxArgs {
    /// Dimension of the domain (n >= 2).
    #[arg(long)]
    n: u32,
    /// Number of boundary components.
    #[arg(long, default_value_t = 1, value_name = "N")]
    components: u32,
    /// The domain is not connected.
    #[arg(long)]
    not_connected: bool,
}

impl CtxArgs {
    fn build(&self) -> Result<DomainCtx, CliFailure> {
        DomainCtx::new(self.n, self.components, !self.not_connected).map_err(usage)
    }
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Test membership in the class-k sector D_k.
    Dk {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long)]
        space: String,
    },
    /// Decide an embedding A ↪ B.
    Embed {
        #[command(flatten)]
        ctx: CtxArgs,
        a: String,
        b: String,
    },
    /// Least upper bound of two spaces in the embedding lattice.
    Join {
        #[command(flatten)]
        ctx: CtxArgs,
        a: String,
        b: String,
    },
    /// Definedness of the pointwise product, and boundedness into --target.
    Product {
        #[command(flatten)]
        ctx: CtxArgs,
        a: String,
        b: String,
        #[arg(long)]
        target: Option<String>,
    },
    /// Optimal receiving exponent p* of a product pair.
    Pstar {
        #[command(flatten)]
        ctx: CtxArgs,
        a: String,
        b: String,
    },
    /// Map a space through the nonlinearity B(v) = v·∂₁v.
    Bmap {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long)]
        space: String,
        /// Use the sharp route (smoothness s-1 at exponent p*).
        #[arg(long)]
        sharp: bool,
        #[arg(long)]
        eps: Option<String>,
    },
    /// Apply a catalog operator (--op Delta|gamma0|gamma1|R_D|K_D|R_N|K_N|R|A_D|A_N).
    OpApply {
        #[arg(long)]
        op: String,
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long)]
        space: String,
    },
    /// Certify a regularity bootstrap from --start to --target.
    Bootstrap {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long)]
        start: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        eps: Option<String>,
        /// Round limit of the non-termination guard.
        #[arg(long, value_name = "K")]
        max_steps: Option<usize>,
        /// Write the trace diagram to PATH.
        #[arg(long, value_name = "PATH")]
        emit_svg: Option<PathBuf>,
        /// Also report the canonical data spaces for the target.
        #[arg(long)]
        data_spaces: bool,
    },
    /// Stationary Navier-Stokes solvability test.
    NsExist {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long)]
        space: String,
        /// The divergence datum is identically zero.
        #[arg(long)]
        g_zero: bool,
        /// Zero flux through every boundary component.
        #[arg(long)]
        flux_zero: bool,
    },
    /// Render a trace JSON file to SVG.
    Render {
        trace: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

/// Outcome of one dispatched command.
struct CommandResult {
    exit: i32,
    human: String,
    json: Value,
}

enum CliFailure {
    /// Exit 2: bad invocation, unparsable inputs, IO trouble.
    Usage(String),
}

fn usage(err: impl std::fmt::Display) -> CliFailure {
    CliFailure::Usage(err.to_string())
}

fn parse_space(text: &str) -> Result<SpaceParam, CliFailure> {
    text.parse().map_err(usage)
}

fn parse_eps(flag: &Option<String>) -> Result<Rat, CliFailure> {
    let text = match flag {
        Some(text) => text.clone(),
        None => match std::env::var("FSCALC_EPS") {
            Ok(text) => text,
            Err(_) => return Ok(Rat::new(1, 64).expect("static")),
        },
    };
    let eps: Rat = text.parse().map_err(usage)?;
    if !eps.is_positive() || eps >= Rat::one() {
        return Err(usage(Error::EpsOutOfRange));
    }
    Ok(eps)
}

/// Rejection with a one-line reason.
fn reject(reason: String, json: Value) -> CommandResult {
    CommandResult {
        exit: 1,
        human: reason,
        json,
    }
}

fn accept(human: String, json: Value) -> CommandResult {
    CommandResult {
        exit: 0,
        human,
        json,
    }
}

/// Errors raised by the mathematics itself (not by argument parsing) are
/// rejections: the query was well-formed and the answer is "no, because".
fn math_reject(err: Error) -> CommandResult {
    let code = match &err {
        Error::SectorViolation { .. } => "sector-violation",
        Error::ScaleMismatch => "scale-mismatch",
        Error::ProductUndefined => "product-undefined",
        Error::BoundarySpace | Error::BoundaryIndex => "boundary-space",
        Error::ExpectsBoundaryInput(_) => "expects-boundary-input",
        Error::RegularizingImage => "regularizing-image",
        _ => "error",
    };
    reject(
        format!("reject: {err}"),
        json!({"accepted": false, "code": code, "reason": err.to_string()}),
    )
}

fn dispatch(cmd: &Cmd, as_json: bool) -> Result<CommandResult, CliFailure> {
    let _ = as_json;
    match cmd {
        Cmd::Dk { k, ctx, space } => {
            let ctx = ctx.build()?;
            let x = parse_space(space)?;
            let check = match dk_check(&x, *k, &ctx) {
                Ok(check) => check,
                Err(err) => return Ok(math_reject(err)),
            };
            let idx = sobolev_index(&x, &ctx).map_err(usage)?;
            let classical = identify_classical(&x);
            let payload = json!({
                "command": "dk",
                "space": x,
                "k": k,
                "n": ctx.n(),
                "holds": check.holds,
                "threshold": check.threshold,
                "on_boundary": check.on_boundary,
                "sobolev_index": idx,
                "classical_name": classical,
            });
            let name = classical.map(|c| format!(" [{c}]")).unwrap_or_default();
            if check.holds {
                Ok(accept(
                    format!("{x}{name} lies in D_{k}: s > {}", check.threshold),
                    payload,
                ))
            } else {
                let boundary = if check.on_boundary {
                    " (boundary of sector)"
                } else {
                    ""
                };
                Ok(reject(
                    format!(
                        "reject: {x}{name} is not in D_{k}: need s > {}{boundary}",
                        check.threshold
                    ),
                    payload,
                ))
            }
        }
        Cmd::Embed { ctx, a, b } => {
            let ctx = ctx.build()?;
            let a = parse_space(a)?;
            let b = parse_space(b)?;
            let verdict = match embeds(&a, &b, &ctx) {
                Ok(v) => v,
                Err(err) => return Ok(math_reject(err)),
            };
            let payload = json!({
                "command": "embed",
                "a": a,
                "b": b,
                "n": ctx.n(),
                "verdict": verdict,
            });
            if verdict.holds {
                let rule = verdict
                    .rule
                    .map(|r| format!("{}", json!(r)).trim_matches('"').to_string())
                    .unwrap_or_default();
                Ok(accept(format!("{a} ↪ {b} (rule: {rule})"), payload))
            } else {
                Ok(reject(
                    format!("reject: {a} does not embed into {b}"),
                    payload,
                ))
            }
        }
        Cmd::Join { ctx, a, b } => {
            let ctx = ctx.build()?;
            let a = parse_space(a)?;
            let b = parse_space(b)?;
            let joined = match join(&a, &b, &ctx) {
                Ok(j) => j,
                Err(err) => return Ok(math_reject(err)),
            };
            let payload = json!({
                "command": "join",
                "a": a,
                "b": b,
                "n": ctx.n(),
                "join": joined.space,
                "clamped": joined.clamped,
            });
            Ok(accept(
                format!("join({a}, {b}) = {}", joined.space),
                payload,
            ))
        }
        Cmd::Product { ctx, a, b, target } => {
            let ctx = ctx.build()?;
            let a = parse_space(a)?;
            let b = parse_space(b)?;
            match target {
                None => {
                    let defined = match product_defined(&a, &b, &ctx) {
                        Ok(d) => d,
                        Err(err) => return Ok(math_reject(err)),
                    };
                    let optimal = if defined {
                        Some(optimal_target(&a, &b, &ctx).map_err(usage)?)
                    } else {
                        None
                    };
                    let payload = json!({
                        "command": "product",
                        "a": a,
                        "b": b,
                        "n": ctx.n(),
                        "defined": defined,
                        "optimal_target": optimal,
                    });
                    if defined {
                        let opt = optimal.expect("defined product has an optimal target");
                        Ok(accept(
                            format!("{a} × {b} is defined; optimal receiving space {opt}"),
                            payload,
                        ))
                    } else {
                        Ok(reject(format!("reject: {a} × {b} is not defined"), payload))
                    }
                }
                Some(target) => {
                    let target = parse_space(target)?;
                    let verdict = match product_bounded(&a, &b, &target, &ctx) {
                        Ok(v) => v,
                        Err(err) => return Ok(math_reject(err)),
                    };
                    let payload = json!({
                        "command": "product",
                        "a": a,
                        "b": b,
                        "target": target,
                        "n": ctx.n(),
                        "verdict": verdict,
                    });
                    if verdict.bounded {
                        Ok(accept(format!("{a} × {b} → {target} is bounded"), payload))
                    } else {
                        let tags: Vec<String> = verdict
                            .failed_conditions
                            .iter()
                            .map(|c| format!("{}", json!(c)).trim_matches('"').to_string())
                            .collect();
                        let why = if verdict.defined {
                            format!("failed conditions: {}", tags.join(", "))
                        } else {
                            "the product is not defined".to_string()
                        };
                        Ok(reject(
                            format!("reject: {a} × {b} → {target} is not bounded ({why})"),
                            payload,
                        ))
                    }
                }
            }
        }
        Cmd::Pstar { ctx, a, b } => {
            let ctx = ctx.build()?;
            let a = parse_space(a)?;
            let b = parse_space(b)?;
            let p = match p_star(&a, &b, &ctx) {
                Ok(p) => p,
                Err(err) => return Ok(math_reject(err)),
            };
            let optimal = optimal_target(&a, &b, &ctx).map_err(usage)?;
            let np = ctx.n_rat() * p.recip();
            let payload = json!({
                "command": "pstar",
                "a": a,
                "b": b,
                "n": ctx.n(),
                "p_star": p,
                "n_over_p_star": np,
                "optimal_target": optimal,
            });
            Ok(accept(
                format!("p* = {p} (n/p* = {np}); optimal receiving space {optimal}"),
                payload,
            ))
        }
        Cmd::Bmap {
            ctx,
            space,
            sharp,
            eps,
        } => {
            let ctx = ctx.build()?;
            let x = parse_space(space)?;
            let eps = parse_eps(eps)?;
            let mapped = if *sharp {
                map_b_sharp(&x, &ctx)
            } else {
                map_b_standard(&x, &ctx, &eps)
            };
            let route = if *sharp { "sharp" } else { "standard" };
            match mapped {
                Ok(image) => {
                    let payload = json!({
                        "command": "bmap",
                        "space": x,
                        "n": ctx.n(),
                        "route": route,
                        "eps": eps,
                        "image": image,
                    });
                    Ok(accept(format!("B({x}) ∈ {image} ({route} route)"), payload))
                }
                Err(err) => Ok(math_reject(err)),
            }
        }
        Cmd::OpApply { op, ctx, space } => {
            let ctx = ctx.build()?;
            let x = parse_space(space)?;
            op_apply(op, &x, &ctx)
        }
        Cmd::Bootstrap {
            problem,
            ctx,
            start,
            target,
            eps,
            max_steps,
            emit_svg,
            data_spaces,
        } => {
            let ctx = ctx.build()?;
            let start = parse_space(start)?;
            let target = parse_space(target)?;
            let eps = parse_eps(eps)?;
            let problem: Problem = (*problem).into();
            let mut config = BootstrapConfig::with_eps(eps.clone());
            if let Some(max) = max_steps {
                config.max_rounds = *max;
            }
            let report = if *data_spaces {
                Some(regularity_theorem(problem, &start, &target, &ctx, &eps).map_err(usage)?)
            } else {
                None
            };
            let trace = match &report {
                Some(report) => report.trace.clone(),
                None => bootstrap(problem, &start, &target, &ctx, &config).map_err(usage)?,
            };
            if let Some(path) = emit_svg {
                let svg = render_trace(&trace).map_err(usage)?;
                fs::write(path, svg).map_err(usage)?;
            }
            let mut payload = serde_json::to_value(&trace).expect("trace serializes");
            if let Some(report) = &report {
                payload["data_interior"] =
                    serde_json::to_value(&report.data_interior).expect("space serializes");
                payload["data_boundary"] =
                    serde_json::to_value(&report.data_boundary).expect("space serializes");
            }
            let mut human = format!(
                "bootstrap {problem} n={} eps={eps}: {start} → {target}\n",
                ctx.n()
            );
            for step in &trace.steps {
                let rule = format!("{}", json!(step.rule))
                    .trim_matches('"')
                    .to_string();
                let case = step
                    .figure_case
                    .map(|c| format!(" [{}]", format!("{}", json!(c)).trim_matches('"')))
                    .unwrap_or_default();
                let violation = step
                    .violation
                    .as_ref()
                    .map(|v| format!("\n      obstruction: {v}"))
                    .unwrap_or_default();
                let inputs: Vec<String> = step.input.iter().map(|s| s.to_string()).collect();
                human.push_str(&format!(
                    "  {:>3} {rule}: {} → {}{case}{violation}\n",
                    step.index,
                    inputs.join(" ∨ "),
                    step.output
                ));
            }
            if let Some(report) = &report {
                human.push_str(&format!(
                    "  data spaces: f ∈ {}, φ ∈ {}\n",
                    report.data_interior, report.data_boundary
                ));
            }
            match &trace.verdict {
                Verdict::Certified => {
                    human.push_str(&format!(
                        "verdict: certified ({} gain rounds)",
                        trace.gain_rounds()
                    ));
                    Ok(accept(human, payload))
                }
                Verdict::Rejected(reason) => {
                    human.push_str(&format!(
                        "verdict: rejected ({}): {}",
                        format!("{}", json!(reason.code)).trim_matches('"'),
                        reason.detail
                    ));
                    Ok(reject(human, payload))
                }
                Verdict::Aborted(abort) => {
                    human.push_str(&format!("verdict: aborted by guard: {}", abort.guard));
                    Ok(reject(human, payload))
                }
            }
        }
        Cmd::NsExist {
            ctx,
            space,
            g_zero,
            flux_zero,
        } => {
            let ctx = ctx.build()?;
            let x = parse_space(space)?;
            let query = NsQuery {
                ctx,
                param: x.clone(),
                g_zero: *g_zero,
                flux_zero_per_component: *flux_zero,
            };
            let verdict = match ns_existence(&query) {
                Ok(v) => v,
                Err(err) => return Ok(math_reject(err)),
            };
            let payload = json!({
                "command": "ns-exist",
                "query": query,
                "verdict": verdict,
            });
            if verdict.accepted {
                let d = &verdict.data_spaces;
                Ok(accept(
                    format!(
                        "solvable for arbitrary data via condition ({}): u ∈ {}ⁿ, 𝔭 ∈ {}, f ∈ {}ⁿ, g ∈ {}, φ ∈ {}ⁿ",
                        verdict.condition.expect("accepted verdict has a condition"),
                        d.velocity, d.pressure, d.force, d.divergence, d.boundary_values
                    ),
                    payload,
                ))
            } else {
                let reasons: Vec<String> = verdict
                    .reasons
                    .iter()
                    .map(|r| format!("{}", json!(r)).trim_matches('"').to_string())
                    .collect();
                Ok(reject(format!("reject: {}", reasons.join(", ")), payload))
            }
        }
        Cmd::Render { trace, out } => {
            let text = fs::read_to_string(trace).map_err(usage)?;
            let trace = BootstrapTrace::from_json(&text).map_err(usage)?;
            if let Err(err) = replay(&trace) {
                return Ok(reject(
                    format!("reject: trace does not replay: {err}"),
                    json!({"accepted": false, "reason": err.to_string()}),
                ));
            }
            let svg = render_trace(&trace).map_err(usage)?;
            match out {
                Some(path) => {
                    fs::write(path, &svg).map_err(usage)?;
                    Ok(accept(
                        format!("wrote {}", path.display()),
                        json!({"written": path.display().to_string()}),
                    ))
                }
                None => Ok(accept(svg.clone(), json!({"svg": svg}))),
            }
        }
    }
}

fn op_apply(op: &str, x: &SpaceParam, ctx: &DomainCtx) -> Result<CommandResult, CliFailure> {
    match op {
        "A_D" | "A_N" => {
            let problem = if op == "A_D" {
                Problem::Dirichlet
            } else {
                Problem::Neumann
            };
            let outcome = match apply_system(problem, x, ctx) {
                Ok(outcome) => outcome,
                Err(err) => return Ok(math_reject(err)),
            };
            let payload = json!({
                "command": "op-apply",
                "op": op,
                "space": x,
                "n": ctx.n(),
                "outcome": outcome,
            });
            match outcome {
                SystemOutcome::Image { interior, boundary } => Ok(accept(
                    format!("{op} {x} = ({interior}, {boundary})"),
                    payload,
                )),
                SystemOutcome::Violation(v) => Ok(reject(format!("reject: {v}"), payload)),
            }
        }
        "R" => {
            let violation = match apply_regularizer(x, ctx) {
                Ok(v) => v,
                Err(err) => return Ok(math_reject(err)),
            };
            let payload = json!({
                "command": "op-apply",
                "op": "R",
                "space": x,
                "n": ctx.n(),
                "violation": violation,
            });
            match violation {
                None => Ok(accept(
                    format!("R is defined on {x}; order -inf, image in every admissible target"),
                    payload,
                )),
                Some(v) => Ok(reject(format!("reject: {v}"), payload)),
            }
        }
        name => {
            let spec = lookup(name).ok_or_else(|| usage(Error::UnknownOperator(name.into())))?;
            let outcome = match apply_operator(spec, x, ctx) {
                Ok(outcome) => outcome,
                Err(err) => return Ok(math_reject(err)),
            };
            let payload = json!({
                "command": "op-apply",
                "op": spec.name,
                "space": x,
                "n": ctx.n(),
                "outcome": outcome,
            });
            match outcome {
                Applied::Image(image) => {
                    Ok(accept(format!("{} {x} = {image}", spec.name), payload))
                }
                Applied::Violation(v) => Ok(reject(format!("reject: {v}"), payload)),
            }
        }
    }
}

fn run_batch(path: &PathBuf) -> Result<(i32, String), CliFailure> {
    let text = fs::read_to_string(path).map_err(usage)?;
    let queries: Vec<Vec<String>> = serde_json::from_str(&text).map_err(usage)?;
    let mut results = Vec::new();
    let mut exit = 0;
    for args in &queries {
        let mut argv = vec!["fscalc".to_string()];
        argv.extend(args.iter().cloned());
        let entry = match Cli::try_parse_from(&argv) {
            Err(err) => {
                exit = exit.max(2);
                json!({"args": args, "exit": 2, "error": err.to_string()})
            }
            Ok(cli) => match &cli.command {
                None => {
                    exit = exit.max(2);
                    json!({"args": args, "exit": 2, "error": "missing subcommand"})
                }
                Some(cmd) => match dispatch(cmd, true) {
                    Ok(result) => {
                        exit = exit.max(result.exit);
                        json!({"args": args, "exit": result.exit, "result": result.json})
                    }
                    Err(CliFailure::Usage(msg)) => {
                        exit = exit.max(2);
                        json!({"args": args, "exit": 2, "error": msg})
                    }
                },
            },
        };
        results.push(entry);
    }
    let out = serde_json::to_string_pretty(&Value::Array(results)).expect("array serializes");
    Ok((exit, out))
}

/// Parse and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return 0;
            }
            eprint!("{err}");
            return 2;
        }
    };

    if let Some(path) = &cli.batch {
        if cli.command.is_some() {
            eprintln!("error: --batch cannot be combined with a subcommand");
            return 2;
        }
        return match run_batch(path) {
            Ok((exit, out)) => {
                println!("{out}");
                exit
            }
            Err(CliFailure::Usage(msg)) => {
                eprintln!("error: {msg}");
                2
            }
        };
    }

    let Some(cmd) = &cli.command else {
        eprintln!("error: a subcommand or --batch is required (see --help)");
        return 2;
    };

    match dispatch(cmd, cli.json) {
        Ok(result) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&result.json).expect("payload serializes")
                );
            } else if result.human.ends_with('\n') {
                print!("{}", result.human);
            } else {
                println!("{}", result.human);
            }
            result.exit
        }
        Err(CliFailure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}
