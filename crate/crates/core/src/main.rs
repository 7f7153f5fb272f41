use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pq_orient::boundary::{orient_boundary, orient_corollary, BoundaryOptions, BoundaryRun, StepRecord};
use pq_orient::bounds::{BoundsRole, DegreeBounds};
use pq_orient::error::Error;
use pq_orient::factor::{factor_boundary_with, factor_gf_with, near_half_factor, Factor};
use pq_orient::feasibility::{
    balanced_orientation, frank_gyarfas_check, orient_pq, SubsetVerdict, DEFAULT_EXHAUSTIVE_CAP,
};
use pq_orient::generate::{generate_instance, Regime, RunConfig};
use pq_orient::graph::{Bipartition, Graph, Orientation};
use pq_orient::io::{emit_factor, emit_orientation, parse_bounds, parse_instance};
use pq_orient::oracle::{cross_validate, Caps, ValidationMode};
use pq_orient::verify::{verify, Claim, VerifyReport};

const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_HYPOTHESES: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "pq-orient", version, about = "Degree-constrained orientations and bipartite factors")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Instance file: graph section, optionally followed by bounds.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Separate bounds file; overrides bounds in the instance file.
    #[arg(long, global = true)]
    bounds: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run the boundary algorithm even when its hypotheses fail.
    #[arg(long, global = true)]
    force: bool,
    /// Record every push step.
    #[arg(long, global = true)]
    trace: bool,
    /// Size cap for exhaustive checks (vertices for the subset test, edges for enumeration).
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Put the second colour class on the X side.
    #[arg(long, global = true)]
    swap_sides: bool,
    /// Structured output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orient every edge.
    Orient {
        #[arg(value_enum)]
        kind: OrientKind,
    },
    /// Exhaustive feasibility checks.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
    },
    /// Factors of bipartite graphs.
    Factor {
        #[arg(value_enum)]
        kind: FactorKind,
    },
    /// Write a seeded random instance.
    Gen {
        #[arg(long)]
        n: usize,
        /// Edge probability.
        #[arg(long, default_value_t = 0.5)]
        prob: f64,
        #[arg(long, value_enum, default_value_t = RegimeArg::Theorem)]
        regime: RegimeArg,
    },
    /// Check a result file against the instance.
    Verify {
        #[arg(long)]
        result: PathBuf,
        /// pq, boundary, gf, factor-boundary or balanced.
        #[arg(long)]
        claim: Claim,
    },
    /// Run every oracle on the instance and compare verdicts.
    CrossValidate {
        #[arg(long, value_enum, default_value_t = ModeArg::Orientation)]
        mode: ModeArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OrientKind {
    Pq,
    Boundary,
    Corollary,
    Balanced,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CheckKind {
    Fg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FactorKind {
    Gf,
    Boundary,
    Halves,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RegimeArg {
    Theorem,
    Corollary,
    Factor,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModeArg {
    Orientation,
    Factor,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.root() {
            Error::Infeasible => EXIT_INFEASIBLE,
            Error::HypothesesNotSatisfied { .. } => EXIT_HYPOTHESES,
            _ => EXIT_ERROR,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_ERROR,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load(common: &Common, role: BoundsRole) -> CliResult<(Graph, Option<DegreeBounds>)> {
    let path = common.graph.as_ref().ok_or_else(|| fail("--graph is required"))?;
    let (g, mut bounds) = parse_instance(&read(path)?, role)?;
    if let Some(bp) = &common.bounds {
        bounds = Some(parse_bounds(&read(bp)?, &g, role)?);
    }
    Ok((g, bounds))
}

fn require(bounds: Option<DegreeBounds>) -> CliResult<DegreeBounds> {
    bounds.ok_or_else(|| fail("no bounds: add a bounds section or pass --bounds"))
}

fn sides(common: &Common, g: &Graph) -> CliResult<Bipartition> {
    let part = g.bipartition()?;
    Ok(if common.swap_sides { part.swapped() } else { part })
}

fn caps(common: &Common) -> Caps {
    match common.cap {
        Some(c) => Caps {
            exhaustive: c,
            enumeration: c,
        },
        None => Caps::default(),
    }
}

fn write_out(common: &Common, text: &str) -> CliResult<()> {
    match &common.out {
        Some(p) => fs::write(p, text).map_err(|e| fail(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn trace_value(trace: &Option<Vec<StepRecord>>) -> Value {
    match trace {
        Some(t) => serde_json::to_value(t).expect("trace serializes"),
        None => Value::Null,
    }
}

fn trace_text(trace: &[StepRecord]) -> String {
    let mut s = String::new();
    for (i, r) in trace.iter().enumerate() {
        let kind = serde_json::to_value(r.kind).expect("kind serializes");
        s.push_str(&format!(
            "step {i} {} x={} partner={} reversed={:?} potential {} -> {}\n",
            kind.as_str().unwrap_or("?"),
            r.x,
            r.partner.map_or("-".to_string(), |p| p.to_string()),
            r.reversed,
            r.potential_before,
            r.potential_after
        ));
    }
    s
}

fn emit_oriented(common: &Common, d: &Orientation<'_>, run: Option<&BoundaryRun<'_>>) -> CliResult<()> {
    let trace = run.map(|r| &r.trace).cloned().flatten();
    if common.json {
        let mut v = json!({
            "verdict": "feasible",
            "degrees": d.out_degrees(),
            "orientation": d.directed_pairs(),
            "violations": [],
        });
        if let Some(r) = run {
            v["steps"] = json!(r.steps);
            v["initial_potential"] = json!(r.initial_potential);
        }
        if common.trace {
            v["trace"] = trace_value(&trace);
        }
        write_out(common, &json_text(&v))
    } else {
        if let Some(t) = &trace {
            eprint!("{}", trace_text(t));
        }
        write_out(common, &emit_orientation(d))
    }
}

fn emit_factored(common: &Common, f: &Factor<'_>, trace: Option<Vec<StepRecord>>) -> CliResult<()> {
    if common.json {
        let mut v = json!({
            "verdict": "feasible",
            "degrees": f.degrees(),
            "factor": f.edges().collect::<Vec<_>>(),
            "violations": [],
        });
        if common.trace {
            v["trace"] = trace_value(&trace);
        }
        write_out(common, &json_text(&v))
    } else {
        if let Some(t) = &trace {
            eprint!("{}", trace_text(t));
        }
        write_out(common, &emit_factor(f))
    }
}

fn opts(common: &Common) -> BoundaryOptions {
    BoundaryOptions {
        force: common.force,
        trace: common.trace,
        check_every_step: false,
    }
}

fn run_orient(common: &Common, kind: OrientKind) -> CliResult<()> {
    let (g, bounds) = load(common, BoundsRole::Orientation)?;
    match kind {
        OrientKind::Balanced => emit_oriented(common, &balanced_orientation(&g), None),
        OrientKind::Pq => {
            let b = require(bounds)?;
            emit_oriented(common, &orient_pq(&g, &b)?, None)
        }
        OrientKind::Boundary => {
            let b = require(bounds)?;
            let run = orient_boundary(&g, &b, opts(common))?;
            emit_oriented(common, &run.orientation, Some(&run))
        }
        OrientKind::Corollary => {
            let b = require(bounds)?;
            let run = orient_corollary(&g, &b, opts(common))?;
            emit_oriented(common, &run.orientation, Some(&run))
        }
    }
}

fn run_check(common: &Common) -> CliResult<()> {
    // The subset condition only needs p <= q, so skip the strictness check.
    let (g, bounds) = load(common, BoundsRole::Factor)?;
    let b = require(bounds)?.with_role(BoundsRole::Orientation);
    let cap = common.cap.unwrap_or(DEFAULT_EXHAUSTIVE_CAP);
    match frank_gyarfas_check(&g, &b, cap)? {
        SubsetVerdict::Feasible => {
            let text = if common.json {
                json_text(&json!({ "verdict": "feasible", "violations": [] }))
            } else {
                "feasible\n".to_string()
            };
            write_out(common, &text)
        }
        SubsetVerdict::Violating(set) => {
            let members = set.to_vec();
            let text = if common.json {
                json_text(&json!({ "verdict": "violating", "violations": members }))
            } else {
                let list: Vec<String> = members.iter().map(|v| v.to_string()).collect();
                format!("violating {}\n", list.join(" "))
            };
            write_out(common, &text)?;
            Err(Failure {
                code: EXIT_INFEASIBLE,
                message: "violating subset found".into(),
            })
        }
    }
}

fn run_factor(common: &Common, kind: FactorKind) -> CliResult<()> {
    let (g, bounds) = load(common, BoundsRole::Factor)?;
    match kind {
        FactorKind::Halves => emit_factored(common, &near_half_factor(&g)?, None),
        FactorKind::Gf => {
            let b = require(bounds)?;
            let part = sides(common, &g)?;
            emit_factored(common, &factor_gf_with(&g, &part, &b)?, None)
        }
        FactorKind::Boundary => {
            let b = require(bounds)?;
            let part = sides(common, &g)?;
            let run = factor_boundary_with(&g, &part, &b, opts(common))?;
            emit_factored(common, &run.factor, run.trace)
        }
    }
}

fn run_gen(common: &Common, n: usize, prob: f64, regime: RegimeArg) -> CliResult<()> {
    let regime = match regime {
        RegimeArg::Theorem => Regime::Theorem,
        RegimeArg::Corollary => Regime::Corollary,
        RegimeArg::Factor => Regime::Factor,
    };
    let inst = generate_instance(&RunConfig::with_seed(common.seed), n, prob, regime)?;
    write_out(common, &inst.to_text())
}

fn report_text(r: &VerifyReport) -> String {
    let mut s = format!("{} {}\n", if r.pass { "pass" } else { "fail" }, r.claim);
    for v in &r.violations {
        s.push_str(&format!("vertex {} degree {} allowed {}\n", v.vertex, v.degree, v.allowed));
    }
    s
}

fn run_verify(common: &Common, result: &Path, claim: Claim) -> CliResult<()> {
    let role = if claim.is_factor_claim() {
        BoundsRole::Factor
    } else {
        BoundsRole::Orientation
    };
    let (g, bounds) = load(common, role)?;
    let report = verify(&g, bounds.as_ref(), &read(result)?, claim)?;
    let text = if common.json {
        json_text(&json!({
            "verdict": if report.pass { "pass" } else { "fail" },
            "claim": report.claim,
            "degrees": report.degrees,
            "violations": report.violations,
        }))
    } else {
        report_text(&report)
    };
    write_out(common, &text)?;
    if report.pass {
        Ok(())
    } else {
        Err(fail(format!("{} violating vertices", report.violations.len())))
    }
}

fn run_cross_validate(common: &Common, mode: ModeArg) -> CliResult<()> {
    let (role, mode) = match mode {
        ModeArg::Orientation => (BoundsRole::Orientation, ValidationMode::Orientation),
        ModeArg::Factor => (BoundsRole::Factor, ValidationMode::Factor),
    };
    let (g, bounds) = load(common, role)?;
    let b = require(bounds)?;
    let part = match mode {
        ValidationMode::Factor => Some(sides(common, &g)?),
        ValidationMode::Orientation => None,
    };
    let report = cross_validate(&g, &b, mode, part.as_ref(), caps(common))?;
    let text = if common.json {
        json_text(&serde_json::to_value(&report).expect("report serializes"))
    } else {
        let show = |v: Option<bool>| match v {
            Some(true) => "feasible",
            Some(false) => "infeasible",
            None => "skipped",
        };
        format!(
            "instance {}\nflow {}\nfrank_gyarfas {}\nenumeration {}\nhypotheses {}\nboundary_enumeration {}\nboundary_algorithm {}\nagreement {}\n",
            report.instance,
            show(report.flow),
            show(report.frank_gyarfas),
            show(report.enumeration),
            if report.hypotheses_hold { "hold" } else { "fail" },
            show(report.boundary_enumeration),
            show(report.boundary_algorithm),
            report.agreement
        )
    };
    write_out(common, &text)?;
    if report.agreement {
        Ok(())
    } else {
        Err(fail("oracles disagree"))
    }
}

/// In JSON mode a certified negative answer still gets a document.
fn with_verdict(common: &Common, outcome: CliResult<()>) -> CliResult<()> {
    if let Err(f) = &outcome {
        let verdict = match f.code {
            EXIT_INFEASIBLE => "infeasible",
            EXIT_HYPOTHESES => "hypotheses_not_satisfied",
            _ => return outcome,
        };
        if common.json {
            let v = json!({ "verdict": verdict, "message": f.message, "violations": [] });
            write_out(common, &json_text(&v))?;
        }
    }
    outcome
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = &cli.common;
    let outcome = match cli.command {
        Command::Orient { kind } => with_verdict(common, run_orient(common, kind)),
        Command::Check { kind: CheckKind::Fg } => run_check(common),
        Command::Factor { kind } => with_verdict(common, run_factor(common, kind)),
        Command::Gen { n, prob, regime } => run_gen(common, n, prob, regime),
        Command::Verify { ref result, claim } => run_verify(common, result, claim),
        Command::CrossValidate { mode } => run_cross_validate(common, mode),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pq-orient: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
