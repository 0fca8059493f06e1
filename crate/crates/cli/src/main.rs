//! Single binary exposing the library over JSON model files.
//!
//! Exit codes: 0 on success, 1 when a validation or property check fails,
//! 2 on usage or IO errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use uakit_core::category::{build_category, RestrictionMode};
use uakit_core::fh::{fh_from_json, fh_to_json, validate_fh, FhModel};
use uakit_core::harness::{
    gen_fh, gen_hms, gen_hms_ikb, property_suite, GenParams, GenStrategy, PropertyReport,
    SuiteOptions, SuiteTarget,
};
use uakit_core::hms::{
    hms_from_json, hms_to_json, validate_alpha, validate_hms, validate_lambda, validate_pi,
    HmsError, HmsModel,
};
use uakit_core::logic::{check_proof, proof_from_json, soundness_suite, SoundnessTarget};
use uakit_core::semantics::{extension, hms_sat};
use uakit_core::syntax::{enumerate_formulas, parse_formula, Formula};
use uakit_core::transforms::{
    check_fh_to_hms_equivalence, check_hms_to_fh_equivalence, fh_star_transform, fh_transform,
    hms_transform, truncated_hms_transform,
};
use uakit_core::{ValidationReport, MAX_ATOMS};

#[derive(Parser)]
#[command(name = "uakit", version, about = "Finite knowledge/awareness models: validation, model checking, transformations, and property verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a model file against the structural assumptions of its kind.
    Validate(ValidateArgs),
    /// Evaluate a formula at a state; prints `true`, `false`, or
    /// `undefined(<atoms>)`.
    Eval(EvalArgs),
    /// Transform between FH models and lattice models.
    Transform(TransformArgs),
    /// Run verification suites against a model file.
    Verify(VerifyArgs),
    /// Generate random models from a seed.
    Random(RandomArgs),
    /// Check a Hilbert-style proof file.
    CheckProof(CheckProofArgs),
}

#[derive(Args)]
struct ValidateArgs {
    model: PathBuf,
    /// Human-readable report instead of one line per violation.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct EvalArgs {
    model: PathBuf,
    /// State (lattice models) or world (FH models) to evaluate at.
    #[arg(long)]
    state: String,
    #[arg(long)]
    formula: String,
    /// Also print the extension event (lattice models).
    #[arg(long)]
    show_event: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformTarget {
    /// FH model to complemented lattice model.
    Hms,
    /// FH model to implicit-knowledge-based lattice model.
    Ikb,
    /// Complemented lattice model to FH model.
    Fh,
    /// Implicit-knowledge-based lattice model to FH model.
    FhStar,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Copy,
    Quotient,
}

impl From<ModeArg> for RestrictionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Copy => RestrictionMode::Copy,
            ModeArg::Quotient => RestrictionMode::Quotient,
        }
    }
}

#[derive(Args)]
struct TransformArgs {
    model: PathBuf,
    #[arg(long, value_enum)]
    to: TransformTarget,
    /// Category construction used on the way into a lattice model.
    #[arg(long, value_enum, default_value = "copy")]
    mode: ModeArg,
    /// Write the state-correspondence trace to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long)]
    pretty: bool,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Suite {
    All,
    Pi,
    Lambda,
    Alpha,
    Operators,
    Equivalence,
    Lpa,
}

#[derive(Args)]
struct VerifyArgs {
    model: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Formula depth for equivalence checks.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Depth of the substitution pool for the axiom suite.
    #[arg(long, default_value_t = 1)]
    pool_depth: usize,
    /// Run independent suites on this many threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    ViaTransform,
    Direct,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKind {
    /// Complemented lattice model.
    Hms,
    /// Implicit-knowledge-based lattice model.
    Ikb,
    /// FH model.
    Fh,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long, default_value_t = 2)]
    atoms: usize,
    #[arg(long, default_value_t = 3)]
    worlds: usize,
    #[arg(long, default_value_t = 1)]
    agents: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, value_enum, default_value = "via-transform")]
    strategy: StrategyArg,
    /// Retries for the direct strategy before falling back.
    #[arg(long, default_value_t = 8)]
    retries: usize,
    #[arg(long, value_enum, default_value = "hms")]
    kind: RandomKind,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct CheckProofArgs {
    proof: PathBuf,
}

enum Model {
    Fh(FhModel),
    Hms(HmsModel),
}

fn atom_cap() -> Result<usize> {
    match std::env::var("UAKIT_MAX_ATOMS") {
        Err(_) => Ok(MAX_ATOMS),
        Ok(v) => {
            let n: usize = v
                .parse()
                .map_err(|_| anyhow!("UAKIT_MAX_ATOMS must be an integer, got `{v}`"))?;
            if n == 0 || n > MAX_ATOMS {
                bail!("UAKIT_MAX_ATOMS must be between 1 and {MAX_ATOMS}, got {n}");
            }
            Ok(n)
        }
    }
}

fn load_model(path: &PathBuf) -> Result<Model> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| anyhow!("{}: missing `kind` field", path.display()))?;
    let cap = atom_cap()?;
    let atom_count = value.get("atoms").and_then(|a| a.as_array()).map_or(0, |a| a.len());
    if atom_count > cap {
        bail!("{}: {atom_count} atoms exceed the cap of {cap}", path.display());
    }
    match kind {
        "fh" => Ok(Model::Fh(fh_from_json(&text)?)),
        "hms" => Ok(Model::Hms(hms_from_json(&text)?)),
        other => bail!("{}: unknown model kind `{other}`", path.display()),
    }
}

fn print_report(rep: &ValidationReport, pretty: bool) {
    if pretty && rep.violations.is_empty() {
        println!("ok");
        return;
    }
    for v in &rep.violations {
        println!("{v}");
    }
    if pretty {
        let errors = rep.errors().count();
        println!("{} violation(s)", errors);
    }
}

fn cmd_validate(args: &ValidateArgs) -> Result<ExitCode> {
    let rep = match load_model(&args.model)? {
        Model::Fh(m) => validate_fh(&m),
        Model::Hms(m) => validate_hms(&m),
    };
    let ok = rep.is_valid();
    print_report(&rep, args.pretty);
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_eval(args: &EvalArgs) -> Result<ExitCode> {
    match load_model(&args.model)? {
        Model::Fh(m) => {
            let f = parse_formula(&args.formula, &m.vocab)?;
            if !f.in_sublanguage(m.atoms) {
                let missing: Vec<&str> = f
                    .atoms()
                    .minus(m.atoms)
                    .iter()
                    .map(|a| m.vocab.name(a))
                    .collect();
                println!("undefined({})", missing.join(","));
                return Ok(ExitCode::SUCCESS);
            }
            let v = uakit_core::fh::fh_sat(&m, &args.state, &f)?;
            println!("{v}");
            Ok(ExitCode::SUCCESS)
        }
        Model::Hms(m) => {
            let f = parse_formula(&args.formula, &m.frame.vocab)?;
            let state = m.state(&args.state)?;
            match hms_sat(&m, state, &f) {
                Ok(v) => {
                    println!("{v}");
                    if args.show_event {
                        let e = extension(&m, &f)?;
                        let base: Vec<&str> = (0..64)
                            .filter(|b| e.base & (1 << b) != 0)
                            .map(|b| m.frame.space(e.base_space)[b as usize].as_str())
                            .collect();
                        println!(
                            "{}",
                            serde_json::json!({
                                "space": m.frame.vocab.set_label(e.base_space),
                                "base": base,
                            })
                        );
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(HmsError::Undefined { atoms, .. }) => {
                    println!("undefined({atoms})");
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn write_output(value: &serde_json::Value, out: &Option<PathBuf>, pretty: bool) -> Result<()> {
    let text = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    match out {
        Some(path) => {
            fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_transform(args: &TransformArgs) -> Result<ExitCode> {
    let model = load_model(&args.model)?;
    let mode: RestrictionMode = args.mode.into();
    let (value, trace) = match (&model, args.to) {
        (Model::Fh(m), TransformTarget::Hms) => {
            let (out, trace) = hms_transform(m, mode)?;
            (hms_to_json(&out), trace)
        }
        (Model::Fh(m), TransformTarget::Ikb) => {
            let (out, trace) = truncated_hms_transform(m, mode)?;
            (hms_to_json(&out), trace)
        }
        (Model::Hms(m), TransformTarget::Fh) => {
            let (out, trace) = fh_transform(m)?;
            (fh_to_json(&out), trace)
        }
        (Model::Hms(m), TransformTarget::FhStar) => {
            let (out, trace) = fh_star_transform(m)?;
            (fh_to_json(&out), trace)
        }
        (Model::Fh(_), _) => bail!("an FH model transforms with --to hms or --to ikb"),
        (Model::Hms(_), _) => bail!("a lattice model transforms with --to fh or --to fh-star"),
    };
    write_output(&value, &args.out, args.pretty)?;
    if let Some(path) = &args.trace {
        fs::write(path, serde_json::to_string_pretty(&trace.to_json())? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

struct SuiteOutcome {
    name: &'static str,
    passed: bool,
    detail: serde_json::Value,
}

fn report_to_json(rep: &ValidationReport) -> serde_json::Value {
    serde_json::json!(rep
        .violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>())
}

fn property_report_to_json(rep: &PropertyReport) -> serde_json::Value {
    serde_json::json!(rep
        .entries
        .iter()
        .map(|e| {
            serde_json::json!({
                "property": e.name,
                "instances": e.instances,
                "failures": e.failures,
            })
        })
        .collect::<Vec<_>>())
}

fn lpa_pool(model: &Model, depth: usize) -> Vec<Formula> {
    let (atoms, agents) = match model {
        Model::Fh(m) => (m.atoms, m.agents),
        Model::Hms(m) => (m.frame.full_set(), m.agents),
    };
    // Two atoms is plenty: the pool grows super-exponentially in depth.
    let mut limited = uakit_core::AtomSet::EMPTY;
    for (i, a) in atoms.iter().enumerate() {
        if i >= 2 {
            break;
        }
        limited.insert(a);
    }
    enumerate_formulas(limited, agents, depth).collect()
}

fn run_suites(model: &Model, args: &VerifyArgs) -> Result<Vec<SuiteOutcome>> {
    let wanted = |s: Suite| args.suite == Suite::All || args.suite == s;
    type Job<'a> = Box<dyn FnOnce() -> Result<SuiteOutcome> + Send + 'a>;
    let mut jobs: Vec<Job> = Vec::new();
    match model {
        Model::Hms(m) => {
            if wanted(Suite::Pi) && m.pi.is_some() {
                jobs.push(Box::new(move || {
                    let rep = validate_pi(m)?;
                    Ok(SuiteOutcome { name: "pi", passed: rep.is_valid(), detail: report_to_json(&rep) })
                }));
            }
            if wanted(Suite::Lambda) && m.lambda.is_some() {
                jobs.push(Box::new(move || {
                    let rep = validate_lambda(m)?;
                    Ok(SuiteOutcome {
                        name: "lambda",
                        passed: rep.is_valid(),
                        detail: report_to_json(&rep),
                    })
                }));
            }
            if wanted(Suite::Alpha) && m.alpha.is_some() {
                jobs.push(Box::new(move || {
                    let rep = validate_alpha(m)?;
                    Ok(SuiteOutcome {
                        name: "alpha",
                        passed: rep.is_valid(),
                        detail: report_to_json(&rep),
                    })
                }));
            }
            if wanted(Suite::Operators) {
                jobs.push(Box::new(move || {
                    let rep =
                        property_suite(&SuiteTarget::Hms(m), &SuiteOptions::default())?;
                    Ok(SuiteOutcome {
                        name: "operators",
                        passed: rep.passed(),
                        detail: property_report_to_json(&rep),
                    })
                }));
            }
            if wanted(Suite::Equivalence) {
                let depth = args.depth;
                jobs.push(Box::new(move || {
                    // Round-trip through the FH side and compare.
                    let outcome = match m.kind()? {
                        uakit_core::hms::HmsKind::Complemented
                        | uakit_core::hms::HmsKind::ComplementedIkb => {
                            let (k, trace) = fh_transform(m)?;
                            check_hms_to_fh_equivalence(m, &k, &trace, depth)?
                        }
                        uakit_core::hms::HmsKind::ImplicitKnowledgeBased => {
                            let (k, trace) = fh_star_transform(m)?;
                            check_hms_to_fh_equivalence(m, &k, &trace, depth)?
                        }
                        uakit_core::hms::HmsKind::Plain => None,
                    };
                    Ok(SuiteOutcome {
                        name: "equivalence",
                        passed: outcome.is_none(),
                        detail: serde_json::json!(outcome
                            .map(|w| format!("disagreement at `{}`", w.world))),
                    })
                }));
            }
            if wanted(Suite::Lpa) {
                let pool = lpa_pool(model, args.pool_depth);
                jobs.push(Box::new(move || {
                    let rep = soundness_suite(&SoundnessTarget::Hms(m), &pool, m.agents)?;
                    Ok(SuiteOutcome {
                        name: "lpa",
                        passed: rep.passed(),
                        detail: serde_json::json!(rep
                            .entries
                            .iter()
                            .map(|e| serde_json::json!({
                                "schema": e.name,
                                "instances": e.instances,
                                "failures": e.failures,
                            }))
                            .collect::<Vec<_>>()),
                    })
                }));
            }
        }
        Model::Fh(m) => {
            if wanted(Suite::Pi) || wanted(Suite::Lambda) || wanted(Suite::Alpha) {
                if args.suite != Suite::All {
                    bail!("suites pi/lambda/alpha apply to lattice models");
                }
            }
            if wanted(Suite::Operators) || wanted(Suite::Equivalence) {
                let depth = args.depth;
                jobs.push(Box::new(move || {
                    let mut failures = Vec::new();
                    for mode in [RestrictionMode::Copy, RestrictionMode::Quotient] {
                        let cat = build_category(m, mode)?;
                        let rep = property_suite(
                            &SuiteTarget::Category(&cat),
                            &SuiteOptions { depth, ..Default::default() },
                        )?;
                        for e in &rep.entries {
                            for f in &e.failures {
                                failures.push(format!("{mode:?}: {}: {f}", e.name));
                            }
                        }
                    }
                    Ok(SuiteOutcome {
                        name: "equivalence",
                        passed: failures.is_empty(),
                        detail: serde_json::json!(failures),
                    })
                }));
                let depth = args.depth;
                jobs.push(Box::new(move || {
                    let mut failures = Vec::new();
                    for mode in [RestrictionMode::Copy, RestrictionMode::Quotient] {
                        let (hms, trace) = hms_transform(m, mode)?;
                        if let Some(w) = check_fh_to_hms_equivalence(m, &hms, &trace, depth)? {
                            failures.push(format!("{mode:?}: disagreement at `{}`", w.world));
                        }
                    }
                    Ok(SuiteOutcome {
                        name: "transform-equivalence",
                        passed: failures.is_empty(),
                        detail: serde_json::json!(failures),
                    })
                }));
            }
            if wanted(Suite::Lpa) {
                let pool = lpa_pool(model, args.pool_depth);
                jobs.push(Box::new(move || {
                    let cat = build_category(m, RestrictionMode::Copy)?;
                    let rep =
                        soundness_suite(&SoundnessTarget::Category(&cat), &pool, m.agents)?;
                    Ok(SuiteOutcome {
                        name: "lpa",
                        passed: rep.passed(),
                        detail: serde_json::json!(rep
                            .entries
                            .iter()
                            .map(|e| serde_json::json!({
                                "schema": e.name,
                                "instances": e.instances,
                                "failures": e.failures,
                            }))
                            .collect::<Vec<_>>()),
                    })
                }));
            }
        }
    }
    if jobs.is_empty() {
        bail!("suite not applicable to this model kind");
    }
    if args.jobs <= 1 || jobs.len() == 1 {
        jobs.into_iter().map(|j| j()).collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = jobs.into_iter().map(|j| scope.spawn(j)).collect();
            handles
                .into_iter()
                .map(|h| h.join().map_err(|_| anyhow!("suite thread panicked"))?)
                .collect()
        })
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let model = load_model(&args.model)?;
    let outcomes = run_suites(&model, args)?;
    let all_passed = outcomes.iter().all(|o| o.passed);
    if args.json {
        let value = serde_json::json!(outcomes
            .iter()
            .map(|o| serde_json::json!({
                "suite": o.name,
                "passed": o.passed,
                "detail": o.detail,
            }))
            .collect::<Vec<_>>());
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        for o in &outcomes {
            println!("{}: {}", o.name, if o.passed { "pass" } else { "FAIL" });
            if !o.passed {
                println!("  {}", o.detail);
            }
        }
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_random(args: &RandomArgs) -> Result<ExitCode> {
    let params = GenParams { atoms: args.atoms, worlds: args.worlds, agents: args.agents };
    let strategy = match args.strategy {
        StrategyArg::ViaTransform => GenStrategy::ViaTransform,
        StrategyArg::Direct => GenStrategy::Direct { retries: args.retries },
    };
    let gen_one = |seed: u64| -> Result<serde_json::Value> {
        Ok(match args.kind {
            RandomKind::Fh => fh_to_json(&gen_fh(params, seed)?),
            RandomKind::Hms => hms_to_json(&gen_hms(params, seed, strategy)?.0),
            RandomKind::Ikb => hms_to_json(&gen_hms_ikb(params, seed, strategy)?.0),
        })
    };
    let seeds: Vec<u64> = (0..args.count).map(|i| args.seed.wrapping_add(i)).collect();
    let values: Vec<serde_json::Value> = if args.jobs <= 1 {
        seeds.iter().map(|&s| gen_one(s)).collect::<Result<_>>()?
    } else {
        std::thread::scope(|scope| {
            let chunks: Vec<_> = seeds
                .chunks(seeds.len().div_ceil(args.jobs))
                .map(|chunk| scope.spawn(move || chunk.iter().map(|&s| gen_one(s)).collect::<Result<Vec<_>>>()))
                .collect();
            let mut out = Vec::new();
            for c in chunks {
                out.extend(c.join().map_err(|_| anyhow!("generator thread panicked"))??);
            }
            Ok::<_, anyhow::Error>(out)
        })?
    };
    for v in values {
        if args.pretty {
            println!("{}", serde_json::to_string_pretty(&v)?);
        } else {
            println!("{v}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check_proof(args: &CheckProofArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.proof)
        .with_context(|| format!("reading {}", args.proof.display()))?;
    let proof = proof_from_json(&text)?;
    let outcome = check_proof(&proof);
    for (i, diag) in outcome.diagnostics.iter().enumerate() {
        match diag {
            None => println!("line {}: ok", i + 1),
            Some(msg) => println!("{msg}"),
        }
    }
    Ok(if outcome.ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate(args) => cmd_validate(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Transform(args) => cmd_transform(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Random(args) => cmd_random(args),
        Command::CheckProof(args) => cmd_check_proof(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
