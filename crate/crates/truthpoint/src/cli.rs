//! Command-line surface: pool inspection, consequence queries, jump and
//! fixed-point computation, axiom checking, categoricity sweeps, proof
//! search, the bundled scenario suites, and report merging.
//!
//! Exit codes are a stable contract: `0` when the requested computation
//! succeeds and every checked property holds, `1` when a checked property
//! fails (a theory is not modelled, a sweep finds discrepancies, a sentence
//! is not derivable, a suite verdict is missed), `2` on usage, I/O, or pool
//! errors. All machine-readable output is JSON via `--json PATH` (use `-`
//! for standard output); reports are byte-identical across runs for
//! identical inputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::axioms::{
    categoricity_sweep, ensure_theory_closure, SweepOptions, TheoryChecker, TheoryKind,
};
use crate::consequence::{ConsequenceEngine, ConsequenceMode};
use crate::fixpoint::{
    classify, enumerate_fixpoints, iterate, EnumerateOptions, FixpointClassification,
    IterateOutcome,
};
use crate::jumps::{JumpConfig, JumpEngine, JumpKind, WitnessPolicy};
use crate::pools::{load_bundled, POOL_NAMES};
use crate::prover::{replay_proof, saturate, ProverOptions};
use crate::report::{merge, Report};
use crate::schemes::sk_sat;
use crate::set::TruthSet;
use crate::syntax::{instantiate, load_pool, Formula, SentencePool};

/// Parse the process arguments, run the requested command, and return the
/// process exit code.
pub fn run() -> u8 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Violation) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

/// Whether every property the command checks came out as expected.
enum Outcome {
    Pass,
    Violation,
}

#[derive(Parser)]
#[command(
    name = "truthpoint",
    version,
    about = "Workbench for fixed-point semantics of self-referential truth over finite sentence pools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a sentence pool.
    Pool {
        #[command(subcommand)]
        action: PoolAction,
    },
    /// Decide whether pooled premises entail a pooled conclusion.
    Entail(EntailArgs),
    /// Apply one step of a jump operator to a statement set.
    Jump(JumpArgs),
    /// Iterate a jump from a starting set until it reaches a fixed point.
    Fixpoint(FixpointArgs),
    /// Enumerate and classify all fixed points of a jump.
    Enumerate(EnumerateArgs),
    /// Classify a statement set (consistency, soundness, closure properties).
    Classify(ClassifyArgs),
    /// Check a statement set against an axiom system.
    Axioms(AxiomsArgs),
    /// Compare fixed points against models of a theory over all candidates.
    Categoricity(CategoricityArgs),
    /// Search for a sequent-calculus derivation of a pooled sentence.
    Prove(ProveArgs),
    /// Run a named scenario suite and compare against expected verdicts.
    Suite(SuiteArgs),
    /// Work with JSON report files.
    Report {
        #[command(subcommand)]
        action: ReportAction,
    },
}

#[derive(Subcommand)]
enum PoolAction {
    /// Load a pool, verify its closure bookkeeping, and summarize it.
    Check(PoolArgs),
    /// Print the pool's canonical statement listing.
    Print(PoolArgs),
}

#[derive(Subcommand)]
enum ReportAction {
    /// Merge report files over the same pool into one canonical report.
    Merge(MergeArgs),
}

#[derive(Args)]
struct PoolArgs {
    #[command(flatten)]
    pool: PoolOpt,
    #[command(flatten)]
    json: JsonOpt,
}

#[derive(Args)]
struct PoolOpt {
    /// Pool to load: `@name` for a bundled pool, otherwise a declaration
    /// file path.
    #[arg(long, value_name = "POOL")]
    pool: String,
}

#[derive(Args)]
struct JsonOpt {
    /// Write the canonical JSON report to this path (`-` for stdout).
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct EntailArgs {
    #[command(flatten)]
    pool: PoolOpt,
    /// Premise statements: comma-separated names or codes, or a file of them.
    #[arg(long, value_name = "SET", default_value = "empty")]
    set: String,
    /// Conclusion statement (name or code).
    #[arg(long, value_name = "NAME")]
    sentence: String,
    /// Consequence relation to use.
    #[arg(long, value_name = "MODE", default_value = "finitary", value_parser = parse_mode)]
    mode: ConsequenceMode,
    #[command(flatten)]
    json: JsonOpt,
}

#[derive(Args)]
struct JumpArgs {
    #[command(flatten)]
    pool: PoolOpt,
    #[command(flatten)]
    jump: JumpOpt,
    /// Input statement set: comma-separated names or codes, or a file.
    #[arg(long, value_name = "SET")]
    set: String,
    #[command(flatten)]
    json: JsonOpt,
}

#[derive(Args)]
struct JumpOpt {
    /// Jump operator (sk, sv, vb, vc, mc, ssk, theta, theta-star, theta-c,
    /// theta-mc, theta-star-c, theta-star-mc).
    #[arg(long, visible_alias = "jump", value_name = "KIND", value_parser = parse_kind)]
    kind: JumpKind,
    /// Consequence relation behind the implication jumps.
    #[arg(long, value_name = "MODE", default_value = "finitary", value_parser = parse_mode)]
    mode: ConsequenceMode,
    /// How witness support yields membership: `single` (one supported
    /// witness implies the statement) or `set` (supported witnesses jointly
    /// entail it).
    #[arg(long, value_name = "POLICY", value_parser = parse_witness)]
    witness: Option<WitnessPolicy>,
}

impl JumpOpt {
    fn config(&self) -> JumpConfig {
        let mut c = JumpConfig::new(self.kind).with_mode(self.mode);
        if let Some(p) = self.witness {
            c = c.with_policy(p);
        }
        c
    }
}

#[derive(Args)]
struct FixpointArgs {
    #[command(flatten)]
    pool: PoolOpt,
    #[command(flatten)]
    jump: JumpOpt,
    /// Starting set (defaults to empty, which yields the minimal fixed point).
    #[arg(long, value_name = "SET", default_value = "empty")]
    set: String,
    #[command(flatten)]
    json: JsonOpt,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    pool: PoolOpt,
    #[command(flatten)]
    jump: JumpOpt,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, value_name = "K")]
    jobs: Option<usize>,
    #[command(flatten)]
    json: JsonOpt,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    pool: PoolOpt,
    #[command(flatten)]
    jump: JumpOpt,
    /// Statement set to classify.
    #[arg(long, value_name = "SET")]
    set: String,
    #[command(flatten)]
    json: JsonOpt,
}

#[derive(Args)]
struct AxiomsArgs {
    #[command(flatten)]
    pool: PoolOpt,
    /// Axiom system (it, it-minus, it-star, it-star-c, it-star-mc, pk,
    /// pk-plus).
    #[arg(long, value_name = "THEORY", value_parser = parse_theory)]
    theory: TheoryKind,
    /// Statement set to check as the truth predicate's extension.
    #[arg(long, value_name = "SET")]
    set: String,
    /// Consequence relation behind the witness-implication axioms.
    #[arg(long, value_name = "MODE", default_value = "finitary", value_parser = parse_mode)]
    mode: ConsequenceMode,
    #[command(flatten)]
    json: JsonOpt,
}

#[derive(Args)]
struct CategoricityArgs {
    #[command(flatten)]
    pool: PoolOpt,
    /// Axiom system for the model side.
    #[arg(long, value_name = "THEORY", value_parser = parse_theory)]
    theory: TheoryKind,
    #[command(flatten)]
    jump: JumpOpt,
    /// Walk the whole consistent candidate space (the default).
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    /// Check N sampled candidates instead of the whole space.
    #[arg(long, value_name = "N")]
    sample: Option<u64>,
    /// Random seed for sampling.
    #[arg(long, value_name = "M", default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, value_name = "K")]
    jobs: Option<usize>,
    #[command(flatten)]
    json: JsonOpt,
}

#[derive(Args)]
struct ProveArgs {
    #[command(flatten)]
    pool: PoolOpt,
    /// Sentence to derive (name or code).
    #[arg(long, value_name = "NAME")]
    sentence: String,
    /// Write the proof tree as JSON to this path.
    #[arg(long, value_name = "PATH")]
    tree: Option<PathBuf>,
    /// Maximum sequent width during saturation.
    #[arg(long, value_name = "W", default_value_t = 3)]
    width: usize,
    /// Disable the ascription-introduction rules (the mutation control).
    #[arg(long)]
    disable_tr_intro: bool,
    #[command(flatten)]
    json: JsonOpt,
}

#[derive(Args)]
struct SuiteArgs {
    /// Suite name: theta-failures, vb-separation, or mc-separation.
    #[arg(value_name = "NAME")]
    name: String,
    #[command(flatten)]
    json: JsonOpt,
}

#[derive(Args)]
struct MergeArgs {
    /// Report files to merge.
    #[arg(value_name = "FILE")]
    files: Vec<PathBuf>,
    #[command(flatten)]
    json: JsonOpt,
}

fn parse_kind(s: &str) -> Result<JumpKind, String> {
    s.parse()
}

fn parse_theory(s: &str) -> Result<TheoryKind, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<ConsequenceMode, String> {
    s.parse()
}

fn parse_witness(s: &str) -> Result<WitnessPolicy, String> {
    s.parse()
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Pool { action } => match action {
            PoolAction::Check(a) => cmd_pool_check(a),
            PoolAction::Print(a) => cmd_pool_print(a),
        },
        Command::Entail(a) => cmd_entail(a),
        Command::Jump(a) => cmd_jump(a),
        Command::Fixpoint(a) => cmd_fixpoint(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Axioms(a) => cmd_axioms(a),
        Command::Categoricity(a) => cmd_categoricity(a),
        Command::Prove(a) => cmd_prove(a),
        Command::Suite(a) => cmd_suite(a),
        Command::Report { action } => match action {
            ReportAction::Merge(a) => cmd_report_merge(a),
        },
    }
}

// ---------------------------------------------------------------------------
// shared plumbing

/// Load a pool from an `@name` bundled reference or a file path.
fn resolve_pool(spec: &str) -> Result<SentencePool> {
    if let Some(name) = spec.strip_prefix('@') {
        load_bundled(name).map_err(|e| {
            anyhow!("loading bundled pool `{name}`: {e} (bundled: {})", POOL_NAMES.join(", "))
        })
    } else {
        let text =
            fs::read_to_string(spec).with_context(|| format!("reading pool file `{spec}`"))?;
        load_pool(&text).with_context(|| format!("loading pool file `{spec}`"))
    }
}

/// Resolve one statement token (a declared name or a numeric code).
fn statement_index(pool: &SentencePool, token: &str) -> Result<usize> {
    let code = if let Ok(n) = token.parse::<u32>() {
        n
    } else {
        pool.code_of_name(token)
            .ok_or_else(|| anyhow!("unknown sentence name `{token}`"))?
    };
    pool.stmt_of_code(code)
        .ok_or_else(|| anyhow!("code {code} does not code a pooled statement"))
}

/// Parse a statement set: the keyword `empty`, a comma/whitespace-separated
/// list of names or codes, or a path to a file of such tokens (with `#`
/// comments).
fn parse_set(pool: &SentencePool, spec: &str) -> Result<TruthSet> {
    let mut s = pool.empty_set();
    if spec == "empty" {
        return Ok(s);
    }
    let text = if Path::new(spec).is_file() {
        fs::read_to_string(spec).with_context(|| format!("reading set file `{spec}`"))?
    } else {
        spec.to_string()
    };
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split([',', ' ', '\t', '\r']).filter(|t| !t.is_empty()) {
            if tok == "empty" {
                continue;
            }
            s.insert(statement_index(pool, tok)?);
        }
    }
    Ok(s)
}

/// Render a set as `{name(code), #code, …}` in ascending code order.
fn fmt_set(pool: &SentencePool, s: &TruthSet) -> String {
    let items: Vec<String> = pool
        .set_to_codes(s)
        .into_iter()
        .map(|c| match pool.name_of_code(c) {
            Some(n) => format!("{n}({c})"),
            None => format!("#{c}"),
        })
        .collect();
    format!("{{{}}}", items.join(", "))
}

fn fmt_classification(c: &FixpointClassification) -> String {
    let flag = |b: bool| if b { "yes" } else { "no" };
    format!(
        "fixed point {}, consistent {}, classically sound {}, truth-descent {}, \
         negated-ascription descent {}, ascription closure {}, omega closure {}",
        flag(c.is_fixpoint),
        flag(c.consistent),
        flag(c.classically_sound),
        flag(c.tr_down_closed),
        flag(c.neg_tr_down_closed),
        flag(c.kripke_set),
        flag(c.omega_closed)
    )
}

/// Write a one-entry report for the command if `--json` was given.
fn emit(pool_hash: Option<&str>, kind: &str, payload: serde_json::Value, json: &JsonOpt) -> Result<()> {
    let Some(path) = &json.json else { return Ok(()) };
    let mut report = match pool_hash {
        Some(h) => Report::for_pool(h),
        None => Report::empty(),
    };
    report.push(kind, &payload)?;
    write_json(path, &report.canonical_text())
}

fn write_json(path: &Path, text: &str) -> Result<()> {
    if path == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text).with_context(|| format!("writing `{}`", path.display()))
    }
}

fn default_jobs(requested: Option<usize>) -> usize {
    requested
        .filter(|&j| j > 0)
        .unwrap_or_else(|| thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

// ---------------------------------------------------------------------------
// commands

fn cmd_pool_check(a: PoolArgs) -> Result<Outcome> {
    let pool = resolve_pool(&a.pool.pool)?;
    let involutive = pool.partner_is_involution();
    println!(
        "pool {}: {} statements, {} witnesses, domain 0..{}, hash {}",
        a.pool.pool,
        pool.n_statements(),
        pool.witnesses.len(),
        pool.domain_size,
        pool.pool_hash()
    );
    println!("negation partnering involutive: {}", if involutive { "yes" } else { "no" });
    let payload = json!({
        "pool": a.pool.pool,
        "poolHash": pool.pool_hash(),
        "statements": pool.n_statements(),
        "witnesses": pool.witnesses.len(),
        "domainSize": pool.domain_size,
        "partnersInvolutive": involutive,
    });
    emit(Some(&pool.pool_hash()), "pool-check", payload, &a.json)?;
    Ok(if involutive { Outcome::Pass } else { Outcome::Violation })
}

fn cmd_pool_print(a: PoolArgs) -> Result<Outcome> {
    let pool = resolve_pool(&a.pool.pool)?;
    let listing = pool.canonical_print();
    print!("{listing}");
    let payload = json!({
        "pool": a.pool.pool,
        "poolHash": pool.pool_hash(),
        "listing": listing,
    });
    emit(Some(&pool.pool_hash()), "pool-print", payload, &a.json)?;
    Ok(Outcome::Pass)
}

fn cmd_entail(a: EntailArgs) -> Result<Outcome> {
    let pool = resolve_pool(&a.pool.pool)?;
    let premises = parse_set(&pool, &a.set)?;
    let conclusion = statement_index(&pool, &a.sentence)?;
    let engine = ConsequenceEngine::new(&pool, a.mode);
    let premise_formulas: Vec<&Formula> =
        premises.iter().map(|i| &pool.statements[i]).collect();
    let holds = engine.entails(&premise_formulas, &pool.statements[conclusion]);
    println!(
        "{} entails {} under {} consequence: {}",
        fmt_set(&pool, &premises),
        fmt_set(&pool, &singleton(&pool, conclusion)),
        a.mode.name(),
        if holds { "yes" } else { "no" }
    );
    let payload = json!({
        "mode": a.mode.name(),
        "premises": pool.set_to_codes(&premises),
        "conclusion": pool.code_of(conclusion),
        "entails": holds,
    });
    emit(Some(&pool.pool_hash()), "entail", payload, &a.json)?;
    Ok(if holds { Outcome::Pass } else { Outcome::Violation })
}

fn singleton(pool: &SentencePool, idx: usize) -> TruthSet {
    let mut s = pool.empty_set();
    s.insert(idx);
    s
}

fn cmd_jump(a: JumpArgs) -> Result<Outcome> {
    let pool = resolve_pool(&a.pool.pool)?;
    let input = parse_set(&pool, &a.set)?;
    let engine = JumpEngine::new(&pool, a.jump.config());
    let output = engine.apply(&input)?;
    println!(
        "{}({}) = {}",
        a.jump.kind.name(),
        fmt_set(&pool, &input),
        fmt_set(&pool, &output)
    );
    let payload = json!({
        "kind": a.jump.kind.name(),
        "mode": a.jump.mode.name(),
        "input": pool.set_to_codes(&input),
        "output": pool.set_to_codes(&output),
    });
    emit(Some(&pool.pool_hash()), "jump", payload, &a.json)?;
    Ok(Outcome::Pass)
}

fn cmd_fixpoint(a: FixpointArgs) -> Result<Outcome> {
    let pool = resolve_pool(&a.pool.pool)?;
    let start = parse_set(&pool, &a.set)?;
    let engine = JumpEngine::new(&pool, a.jump.config());
    let payload = match iterate(&engine, &start)? {
        IterateOutcome::Converged { fixpoint, steps } => {
            let cls = classify(&engine, &fixpoint);
            println!(
                "{} converged from {} in {} steps to {}",
                a.jump.kind.name(),
                fmt_set(&pool, &start),
                steps,
                fmt_set(&pool, &fixpoint)
            );
            println!("{}", fmt_classification(&cls));
            json!({
                "kind": a.jump.kind.name(),
                "mode": a.jump.mode.name(),
                "start": pool.set_to_codes(&start),
                "converged": true,
                "steps": steps,
                "fixpoint": pool.set_to_codes(&fixpoint),
                "classification": serde_json::to_value(cls)?,
            })
        }
        IterateOutcome::NonIncreasing { at_step, set, image } => {
            println!(
                "{} is not increasing from {}: at step {} it maps {} to {}",
                a.jump.kind.name(),
                fmt_set(&pool, &start),
                at_step,
                fmt_set(&pool, &set),
                fmt_set(&pool, &image)
            );
            json!({
                "kind": a.jump.kind.name(),
                "mode": a.jump.mode.name(),
                "start": pool.set_to_codes(&start),
                "converged": false,
                "atStep": at_step,
                "set": pool.set_to_codes(&set),
                "image": pool.set_to_codes(&image),
            })
        }
    };
    emit(Some(&pool.pool_hash()), "fixpoint", payload, &a.json)?;
    Ok(Outcome::Pass)
}

fn cmd_enumerate(a: EnumerateArgs) -> Result<Outcome> {
    let pool = resolve_pool(&a.pool.pool)?;
    let config = a.jump.config();
    let opts = EnumerateOptions { jobs: default_jobs(a.jobs), ..EnumerateOptions::default() };
    let fixpoints = enumerate_fixpoints(&pool, config, opts)?;
    let engine = JumpEngine::new(&pool, config);
    println!("{} has {} fixed points:", a.jump.kind.name(), fixpoints.len());
    let mut listed = Vec::new();
    for fp in &fixpoints {
        let cls = classify(&engine, fp);
        println!("  {}", fmt_set(&pool, fp));
        println!("    {}", fmt_classification(&cls));
        listed.push(json!({
            "set": pool.set_to_codes(fp),
            "classification": serde_json::to_value(cls)?,
        }));
    }
    let payload = json!({
        "kind": a.jump.kind.name(),
        "mode": a.jump.mode.name(),
        "count": fixpoints.len(),
        "fixpoints": listed,
    });
    emit(Some(&pool.pool_hash()), "enumerate", payload, &a.json)?;
    Ok(Outcome::Pass)
}

fn cmd_classify(a: ClassifyArgs) -> Result<Outcome> {
    let pool = resolve_pool(&a.pool.pool)?;
    let set = parse_set(&pool, &a.set)?;
    let engine = JumpEngine::new(&pool, a.jump.config());
    let cls = classify(&engine, &set);
    println!("{} under {}:", fmt_set(&pool, &set), a.jump.kind.name());
    println!("{}", fmt_classification(&cls));
    let payload = json!({
        "kind": a.jump.kind.name(),
        "set": pool.set_to_codes(&set),
        "classification": serde_json::to_value(cls)?,
    });
    emit(Some(&pool.pool_hash()), "classify", payload, &a.json)?;
    Ok(Outcome::Pass)
}

fn cmd_axioms(a: AxiomsArgs) -> Result<Outcome> {
    let mut pool = resolve_pool(&a.pool.pool)?;
    let pi = ensure_theory_closure(&mut pool, a.theory)?;
    let set = parse_set(&pool, &a.set)?;
    let checker = TheoryChecker::new(&pool, a.theory, a.mode, pi.as_ref())?;
    let verdict = checker.check_theory(&set);
    for v in &verdict.axioms {
        println!(
            "{:8} {}{}",
            v.id.name(),
            if v.holds { "holds" } else { "fails" },
            if v.vacuous { " (vacuously)" } else { "" }
        );
        if !v.holds && !v.witness_codes.is_empty() {
            println!("         witness codes {:?}", v.witness_codes);
        }
    }
    println!(
        "{} models {}: {}",
        fmt_set(&pool, &set),
        a.theory.name(),
        if verdict.holds { "yes" } else { "no" }
    );
    let payload = json!({
        "theory": a.theory.name(),
        "mode": a.mode.name(),
        "set": pool.set_to_codes(&set),
        "verdict": serde_json::to_value(&verdict)?,
    });
    emit(Some(&pool.pool_hash()), "axioms", payload, &a.json)?;
    Ok(if verdict.holds { Outcome::Pass } else { Outcome::Violation })
}

fn cmd_categoricity(a: CategoricityArgs) -> Result<Outcome> {
    let mut pool = resolve_pool(&a.pool.pool)?;
    let pi = ensure_theory_closure(&mut pool, a.theory)?;
    let opts = SweepOptions {
        exhaustive: a.sample.is_none(),
        samples: a.sample.unwrap_or(0),
        seed: a.seed,
        jobs: default_jobs(a.jobs),
        ..SweepOptions::default()
    };
    let config = a.jump.config();
    let report = categoricity_sweep(&pool, a.theory, config, pi.as_ref(), opts)?;
    println!(
        "checked {} candidate sets: {} vs {} has {} discrepancies",
        report.checked,
        a.theory.name(),
        a.jump.kind.name(),
        report.discrepancies.len()
    );
    for d in report.discrepancies.iter().take(5) {
        println!(
            "  set {:?}: fixed-point side {}, model side {}{}",
            d.set,
            d.fixpoint_side,
            d.model_side,
            match &d.failing_axiom {
                Some(ax) => format!(" (failing {ax})"),
                None => String::new(),
            }
        );
    }
    if report.discrepancies.len() > 5 {
        println!("  … and {} more", report.discrepancies.len() - 5);
    }
    let clean = report.discrepancies.is_empty();
    let payload = serde_json::to_value(&report)?;
    emit(Some(&pool.pool_hash()), "categoricity", payload, &a.json)?;
    Ok(if clean { Outcome::Pass } else { Outcome::Violation })
}

fn cmd_prove(a: ProveArgs) -> Result<Outcome> {
    let pool = resolve_pool(&a.pool.pool)?;
    let idx = statement_index(&pool, &a.sentence)?;
    let options = ProverOptions { width: a.width, tr_intro: !a.disable_tr_intro };
    let sat = saturate(&pool, options);
    let formula = &pool.statements[idx];
    let derivable = sat.derivable(formula)?;
    let clipped = sat.width_clipped();
    match (derivable, clipped) {
        (true, _) => println!("{} is derivable", a.sentence),
        (false, false) => println!("{} is not derivable", a.sentence),
        (false, true) => println!(
            "{} is not derivable at width {} (the width bound clipped the search)",
            a.sentence, a.width
        ),
    }
    if derivable {
        if let Some(tree) = sat.proof_tree(formula)? {
            replay_proof(&pool, &tree).map_err(|e| anyhow!("emitted proof failed replay: {e}"))?;
            if let Some(path) = &a.tree {
                let mut text = serde_json::to_string_pretty(&tree)?;
                text.push('\n');
                write_json(path, &text)?;
                if path != Path::new("-") {
                    println!("proof tree written to {}", path.display());
                }
            }
        }
    }
    let payload = json!({
        "sentence": a.sentence,
        "code": pool.code_of(idx),
        "width": a.width,
        "trIntro": !a.disable_tr_intro,
        "derivable": derivable,
        "widthClipped": clipped,
    });
    emit(Some(&pool.pool_hash()), "prove", payload, &a.json)?;
    Ok(if derivable { Outcome::Pass } else { Outcome::Violation })
}

fn cmd_suite(a: SuiteArgs) -> Result<Outcome> {
    let outcome = run_suite(&a.name)?;
    for sc in &outcome.scenarios {
        println!("scenario {}: {}", sc.scenario, if sc.pass { "PASS" } else { "FAIL" });
        for c in &sc.checks {
            if !c.pass {
                println!("  failed: {}", c.check);
            }
        }
    }
    println!(
        "suite {}: {} ({} scenarios)",
        outcome.suite,
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.scenarios.len()
    );
    let pass = outcome.pass;
    let hash = outcome.pool_hash.clone();
    emit(Some(&hash), "suite", serde_json::to_value(&outcome)?, &a.json)?;
    Ok(if pass { Outcome::Pass } else { Outcome::Violation })
}

fn cmd_report_merge(a: MergeArgs) -> Result<Outcome> {
    let mut reports = Vec::new();
    for path in &a.files {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading report `{}`", path.display()))?;
        let report: Report = serde_json::from_str(&text)
            .with_context(|| format!("parsing report `{}`", path.display()))?;
        reports.push(report);
    }
    let merged = merge(&reports)?;
    println!(
        "merged {} reports into {} entries{}",
        a.files.len(),
        merged.entries.len(),
        match &merged.pool_hash {
            Some(h) => format!(" over pool {h}"),
            None => String::new(),
        }
    );
    match &a.json.json {
        Some(path) => write_json(path, &merged.canonical_text())?,
        None => print!("{}", merged.canonical_text()),
    }
    Ok(Outcome::Pass)
}

// ---------------------------------------------------------------------------
// scenario suites

/// A named scenario bundle: the pool it loads and what it demonstrates.
#[derive(Clone, Copy, Debug)]
pub struct SuiteSpec {
    pub name: &'static str,
    pub pool: &'static str,
    pub description: &'static str,
}

/// The bundled suites.
pub const SUITES: [SuiteSpec; 3] = [
    SuiteSpec {
        name: "theta-failures",
        pool: "quartet",
        description: "four seeds whose implication fixed points break truth-descent, \
                      negated-ascription descent, and disjunctive/existential support",
    },
    SuiteSpec {
        name: "vb-separation",
        pool: "vb-sep",
        description: "a classically sound fixed point of the starred implication jump, built \
                      on a disjunction of negated truth-tellers, that VB cannot fix",
    },
    SuiteSpec {
        name: "mc-separation",
        pool: "mc-sep",
        description: "a liar-biconditional fixed point of the maximal-consistent implication \
                      jump that MC, VB, and VC all reject",
    },
];

/// One named check inside a scenario.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckOutcome {
    pub check: String,
    pub pass: bool,
}

/// One scenario's checks.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScenarioOutcome {
    pub scenario: String,
    pub checks: Vec<CheckOutcome>,
    pub pass: bool,
}

/// A whole suite run.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteOutcome {
    pub suite: String,
    pub pool: String,
    pub pool_hash: String,
    pub description: String,
    pub scenarios: Vec<ScenarioOutcome>,
    pub pass: bool,
}

struct Scenario {
    name: &'static str,
    checks: Vec<CheckOutcome>,
}

impl Scenario {
    fn new(name: &'static str) -> Scenario {
        Scenario { name, checks: Vec::new() }
    }

    fn check(&mut self, label: &str, pass: bool) {
        self.checks.push(CheckOutcome { check: label.to_string(), pass });
    }

    fn finish(self) -> ScenarioOutcome {
        let pass = self.checks.iter().all(|c| c.pass);
        ScenarioOutcome { scenario: self.name.to_string(), checks: self.checks, pass }
    }
}

/// Run a bundled suite by name.
pub fn run_suite(name: &str) -> Result<SuiteOutcome> {
    let spec = SUITES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| {
            let names: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
            anyhow!("unknown suite `{name}` (available: {})", names.join(", "))
        })?;
    let pool = load_bundled(spec.pool)?;
    let scenarios = match spec.name {
        "theta-failures" => suite_theta_failures(&pool)?,
        "vb-separation" => suite_vb_separation(&pool)?,
        "mc-separation" => suite_mc_separation(&pool)?,
        _ => unreachable!(),
    };
    let pass = scenarios.iter().all(|s| s.pass);
    Ok(SuiteOutcome {
        suite: spec.name.to_string(),
        pool: spec.pool.to_string(),
        pool_hash: pool.pool_hash(),
        description: spec.description.to_string(),
        scenarios,
        pass,
    })
}

/// Iterate the engine's jump from a one-statement seed to its fixed point.
fn ascend(engine: &JumpEngine, pool: &SentencePool, seed: usize) -> Result<TruthSet> {
    match iterate(engine, &singleton(pool, seed))? {
        IterateOutcome::Converged { fixpoint, .. } => Ok(fixpoint),
        IterateOutcome::NonIncreasing { .. } => {
            bail!("iteration from a single-statement seed failed to increase")
        }
    }
}

/// No witness that the set satisfies in the Strong Kleene sense implies the
/// statement — membership via the implication clause has no grounded source.
fn no_sk_witness_implies(
    pool: &SentencePool,
    engine: &ConsequenceEngine,
    s: &TruthSet,
    target: &Formula,
) -> bool {
    pool.witnesses
        .iter()
        .all(|w| !(sk_sat(pool, s, w) && engine.provable_implication(w, target)))
}

/// Four one-statement seeds whose implication fixed points each violate one
/// closure property: truth-descent, negated-ascription descent, and grounded
/// support for a disjunction and an existential.
fn suite_theta_failures(pool: &SentencePool) -> Result<Vec<ScenarioOutcome>> {
    let theta = JumpEngine::new(pool, JumpConfig::new(JumpKind::Theta));
    let cons = ConsequenceEngine::new(pool, ConsequenceMode::Finitary);
    let idx = |n: &str| statement_index(pool, n);
    let mut out = Vec::new();

    // Seeding with a truth ascription keeps the ascription without ever
    // grounding the ascribed statement.
    {
        let asc = idx("asc")?;
        let negtau = idx("negtau")?;
        let g = ascend(&theta, pool, asc)?;
        let cls = classify(&theta, &g);
        let mut sc = Scenario::new("ascription-seed");
        sc.check("iteration converges to a consistent fixed point", cls.is_fixpoint && cls.consistent);
        sc.check("the ascription stays in the fixed point", g.contains(asc));
        sc.check("the ascribed statement never enters", !g.contains(negtau));
        sc.check("truth-descent fails", !cls.tr_down_closed);
        out.push(sc.finish());
    }

    // Seeding with the negated ascription keeps it without the ascribed
    // statement's negation ever entering.
    {
        let asc = idx("asc")?;
        let nasc = pool.partner_idx(asc);
        let tau = idx("tau")?;
        let g = ascend(&theta, pool, nasc)?;
        let cls = classify(&theta, &g);
        let mut sc = Scenario::new("negated-ascription-seed");
        sc.check("iteration converges to a consistent fixed point", cls.is_fixpoint && cls.consistent);
        sc.check("the negated ascription stays in the fixed point", g.contains(nasc));
        sc.check("the ascribed statement's negation never enters", !g.contains(tau));
        sc.check("negated-ascription descent fails", !cls.neg_tr_down_closed);
        out.push(sc.finish());
    }

    // A disjunction of truth-tellers fixes itself with neither disjunct and
    // no Strong Kleene-satisfied witness implying it.
    {
        let disj = idx("disj")?;
        let tau0 = idx("tau0")?;
        let tau1 = idx("tau1")?;
        let g = ascend(&theta, pool, disj)?;
        let cls = classify(&theta, &g);
        let mut sc = Scenario::new("disjunction-seed");
        sc.check("iteration converges to a consistent fixed point", cls.is_fixpoint && cls.consistent);
        sc.check("the disjunction stays in the fixed point", g.contains(disj));
        sc.check("neither disjunct enters", !g.contains(tau0) && !g.contains(tau1));
        sc.check(
            "no Strong Kleene-satisfied witness implies the disjunction",
            no_sk_witness_implies(pool, &cons, &g, &pool.statements[disj]),
        );
        out.push(sc.finish());
    }

    // An existential over a truth-teller fixes itself with no instance and
    // no Strong Kleene-satisfied witness implying it.
    {
        let exi = idx("exist")?;
        let g = ascend(&theta, pool, exi)?;
        let cls = classify(&theta, &g);
        let mut sc = Scenario::new("existential-seed");
        sc.check("iteration converges to a consistent fixed point", cls.is_fixpoint && cls.consistent);
        sc.check("the existential stays in the fixed point", g.contains(exi));
        let Formula::Exists(v, body) = &pool.statements[exi] else {
            bail!("the `exist` statement is not an existential");
        };
        let mut any_instance = false;
        let mut none_in = true;
        for d in 0..pool.domain_size {
            let inst = instantiate(body, v, d, pool.domain_size);
            if let Some(j) = pool.lookup(&inst) {
                any_instance = true;
                if g.contains(j) {
                    none_in = false;
                }
            }
        }
        sc.check("no instance of the existential enters", any_instance && none_in);
        sc.check(
            "no Strong Kleene-satisfied witness implies the existential",
            no_sk_witness_implies(pool, &cons, &g, &pool.statements[exi]),
        );
        out.push(sc.finish());
    }

    Ok(out)
}

/// The disjunction of two negated truth-tellers generates a classically
/// sound fixed point of the starred implication jump that VB rejects, and
/// exhaustively no consistent VB fixed point holds the disjunction without
/// one of its disjuncts.
fn suite_vb_separation(pool: &SentencePool) -> Result<Vec<ScenarioOutcome>> {
    let tstar = JumpEngine::new(pool, JumpConfig::new(JumpKind::ThetaStar));
    let vb = JumpEngine::new(pool, JumpConfig::new(JumpKind::VB));
    let sep = statement_index(pool, "sep")?;
    let nt1 = pool.partner_idx(statement_index(pool, "t1")?);
    let nt2 = pool.partner_idx(statement_index(pool, "t2")?);
    let mut out = Vec::new();

    let g = ascend(&tstar, pool, sep)?;
    {
        let cls = classify(&tstar, &g);
        let mut sc = Scenario::new("ascent-construction");
        sc.check("the ascent converges to a starred-jump fixed point", cls.is_fixpoint);
        sc.check("the fixed point is consistent", cls.consistent);
        sc.check("the fixed point is classically sound", cls.classically_sound);
        sc.check(
            "it holds the disjunction but neither disjunct",
            g.contains(sep) && !g.contains(nt1) && !g.contains(nt2),
        );
        out.push(sc.finish());
    }

    {
        let image = vb.apply(&g)?;
        let mut sc = Scenario::new("vb-rejects-it");
        sc.check("VB drops the disjunction", !image.contains(sep));
        sc.check("the set is not a VB fixed point", image != g);
        out.push(sc.finish());
    }

    {
        let fps = enumerate_fixpoints(pool, JumpConfig::new(JumpKind::VB), EnumerateOptions::default())?;
        let mut sc = Scenario::new("no-vb-fixed-point-matches");
        sc.check("VB has fixed points on this pool", !fps.is_empty());
        sc.check(
            "every consistent VB fixed point holding the disjunction holds a disjunct",
            fps.iter().all(|x| !x.contains(sep) || x.contains(nt1) || x.contains(nt2)),
        );
        out.push(sc.finish());
    }

    Ok(out)
}

/// The biconditional of two liars generates a consistent fixed point of the
/// maximal-consistent implication jump that MC rejects; its plain and
/// consistency-restricted analogues are rejected by VB and VC; and
/// exhaustively no VB, VC, or MC fixed point holds the biconditional.
fn suite_mc_separation(pool: &SentencePool) -> Result<Vec<ScenarioOutcome>> {
    let tsmc = JumpEngine::new(pool, JumpConfig::new(JumpKind::ThetaStarMC));
    let tstar = JumpEngine::new(pool, JumpConfig::new(JumpKind::ThetaStar));
    let tstarc = JumpEngine::new(pool, JumpConfig::new(JumpKind::ThetaStarC));
    let mc = JumpEngine::new(pool, JumpConfig::new(JumpKind::MC));
    let vb = JumpEngine::new(pool, JumpConfig::new(JumpKind::VB));
    let vc = JumpEngine::new(pool, JumpConfig::new(JumpKind::VC));
    let iff = statement_index(pool, "iff")?;
    let lam1 = statement_index(pool, "lam1")?;
    let lam2 = statement_index(pool, "lam2")?;
    let mut out = Vec::new();

    let g = ascend(&tsmc, pool, iff)?;
    {
        let cls = classify(&tsmc, &g);
        let mut sc = Scenario::new("ascent-construction");
        sc.check("the ascent converges to a consistent fixed point", cls.is_fixpoint && cls.consistent);
        sc.check("it holds the biconditional", g.contains(iff));
        sc.check("neither liar enters", !g.contains(lam1) && !g.contains(lam2));
        out.push(sc.finish());
    }

    {
        let image = mc.apply(&g)?;
        let mut sc = Scenario::new("mc-rejects-it");
        sc.check("MC drops the biconditional", !image.contains(iff));
        sc.check("the set is not an MC fixed point", image != g);
        out.push(sc.finish());
    }

    {
        let mut sc = Scenario::new("vb-and-vc-reject-the-analogues");
        let g1 = ascend(&tstar, pool, iff)?;
        sc.check("the plain ascent is a fixed point holding the biconditional",
            classify(&tstar, &g1).is_fixpoint && g1.contains(iff));
        let vb_image = vb.apply(&g1)?;
        sc.check("VB rejects it", !vb_image.contains(iff) && vb_image != g1);
        let g2 = ascend(&tstarc, pool, iff)?;
        sc.check("the consistency-restricted ascent is a fixed point holding the biconditional",
            classify(&tstarc, &g2).is_fixpoint && g2.contains(iff));
        let vc_image = vc.apply(&g2)?;
        sc.check("VC rejects it", !vc_image.contains(iff) && vc_image != g2);
        out.push(sc.finish());
    }

    {
        let mut sc = Scenario::new("no-supervaluational-fixed-point-holds-it");
        for kind in [JumpKind::VB, JumpKind::VC, JumpKind::MC] {
            let fps = enumerate_fixpoints(pool, JumpConfig::new(kind), EnumerateOptions::default())?;
            sc.check(
                &format!("{} has fixed points and none holds the biconditional", kind.name()),
                !fps.is_empty() && fps.iter().all(|x| !x.contains(iff)),
            );
        }
        out.push(sc.finish());
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_parsing_accepts_names_codes_and_the_empty_keyword() {
        let pool = load_bundled("core").unwrap();
        assert_eq!(parse_set(&pool, "empty").unwrap(), pool.empty_set());
        let by_name = parse_set(&pool, "tau,truth").unwrap();
        let tau = statement_index(&pool, "tau").unwrap();
        let truth = statement_index(&pool, "truth").unwrap();
        assert!(by_name.contains(tau) && by_name.contains(truth));
        let by_code = parse_set(
            &pool,
            &format!("{} {}", pool.code_of(tau), pool.code_of(truth)),
        )
        .unwrap();
        assert_eq!(by_name, by_code);
        assert!(parse_set(&pool, "no-such-name").is_err());
        assert!(parse_set(&pool, "0").is_err());
    }

    #[test]
    fn set_files_are_read_with_comments() {
        let pool = load_bundled("core").unwrap();
        let dir = std::env::temp_dir().join("truthpoint-cli-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("probe.set");
        fs::write(&path, "# seed\ntau, truth # trailing\nlam\n").unwrap();
        let s = parse_set(&pool, path.to_str().unwrap()).unwrap();
        assert_eq!(s.iter().count(), 3);
        fs::remove_file(path).ok();
    }

    #[test]
    fn bundled_pool_references_resolve() {
        assert!(resolve_pool("@core").is_ok());
        assert!(resolve_pool("@nonsense").is_err());
        assert!(resolve_pool("/no/such/file.pool").is_err());
    }

    #[test]
    fn every_bundled_suite_passes() {
        for spec in SUITES {
            let outcome = run_suite(spec.name).unwrap();
            for sc in &outcome.scenarios {
                for c in &sc.checks {
                    assert!(c.pass, "{} / {} / {}", spec.name, sc.scenario, c.check);
                }
            }
            assert!(outcome.pass);
        }
    }

    #[test]
    fn unknown_suites_error_with_the_available_names() {
        let err = run_suite("nope").unwrap_err().to_string();
        assert!(err.contains("theta-failures"), "{err}");
    }
}
