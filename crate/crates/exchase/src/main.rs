//! Command-line front end: parses rule, instance, and query files, runs the
//! chase engines, ruleset transformations, query rewriting, and boundedness
//! analyses, and prints one report per invocation.
//!
//! Reports are JSON by default (`--human` switches to plain text) and are a
//! pure function of the inputs: the same invocation always prints the same
//! bytes. Exit codes follow the verdict of the final check: 0 for yes or for
//! commands that only compute, 1 for no, 2 for unknown or infeasible, 64
//! and up for usage, parse, and i/o errors.

mod report;

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use exchase::analysis::{
    classify_boundedness, ct_check, depth_bound, k_bounded, k_bounded_fe_oblivious,
    ClassifyOptions,
};
use exchase::atom::Instance;
use exchase::chase::{chase, ChaseOptions, ChaseOutcome, ChaseVariant};
use exchase::parser::{parse_instance, parse_query, parse_ruleset};
use exchase::printer::{render_rule, NullNamer};
use exchase::query::Query;
use exchase::rewrite::{estimate_k_af, estimate_k_fo, run_rewriting, KEstimate, RewriteBudget};
use exchase::rule::Ruleset;
use exchase::transforms::{
    critical_instance_with, df_decompose, fe_decode, fe_encode, freeze, psi_transform,
};
use report::Report;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "exchase",
    version,
    about = "Chase, rewriting, and boundedness toolkit for existential rules"
)]
struct Cli {
    /// Plain-text report instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// JSON report (the default).
    #[arg(long, global = true, conflicts_with = "human")]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    O,
    So,
    Skolem,
}

impl VariantArg {
    fn chase(self) -> ChaseVariant {
        match self {
            VariantArg::O => ChaseVariant::Oblivious,
            VariantArg::So => ChaseVariant::SemiOblivious,
            VariantArg::Skolem => ChaseVariant::Skolem,
        }
    }
}

/// The decision procedures are stated for the oblivious and semi-oblivious
/// chase; the skolem chase coincides with the latter round by round.
#[derive(Clone, Copy, ValueEnum)]
enum DecisionVariantArg {
    O,
    So,
}

impl DecisionVariantArg {
    fn chase(self) -> ChaseVariant {
        match self {
            DecisionVariantArg::O => ChaseVariant::Oblivious,
            DecisionVariantArg::So => ChaseVariant::SemiOblivious,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    /// Split every head into single-atom heads over fresh marker rules.
    Df,
    /// Interpose a frontier marker predicate between body and head.
    Psi,
    /// Tag predicates so every head atom carries an existential position.
    FeEncode,
    /// Undo fe-encode on an instance.
    FeDecode,
    /// Replace the variables of an instance by fresh frozen constants.
    Freeze,
    /// All atoms over the designated constant plus the rule constants.
    Critical,
}

#[derive(Subcommand)]
enum Command {
    /// Run a chase to a fixpoint or a budget and report the run.
    Chase {
        #[arg(long, value_enum, default_value = "o")]
        variant: VariantArg,
        /// Maximum number of rounds.
        #[arg(long, default_value_t = 50)]
        fuel: usize,
        /// Abort once the instance grows past this many atoms.
        #[arg(long, default_value_t = 100_000)]
        max_atoms: usize,
        /// Include fired triggers and the null legend in the report.
        #[arg(long)]
        trace: bool,
        rules: PathBuf,
        instance: PathBuf,
    },
    /// Apply a ruleset or instance transformation and print the result.
    Transform {
        #[arg(long, value_enum)]
        op: OpArg,
        /// Rules file (df, psi, critical, fe-encode) or instance file
        /// (fe-decode, freeze).
        path: PathBuf,
        /// Instance file; fe-encode only.
        instance: Option<PathBuf>,
    },
    /// Rewrite a query into a union of conjunctive queries, or estimate how
    /// many steps the ruleset's canonical seed queries take to saturate.
    Rewrite {
        /// Breadth-first rewriting steps.
        #[arg(long, default_value_t = 8)]
        fuel: usize,
        /// Largest union size kept.
        #[arg(long, default_value_t = 512)]
        max_cqs: usize,
        /// Estimate the saturation step count over the generated-fact seeds.
        #[arg(long, conflicts_with = "kfo")]
        kaf: bool,
        /// Estimate the saturation step count over the rule-body seeds.
        #[arg(long)]
        kfo: bool,
        rules: PathBuf,
        /// Query file; required unless --kaf or --kfo is given.
        query: Option<PathBuf>,
    },
    /// Decide chase termination on the critical instance.
    Ct {
        #[arg(long, value_enum, default_value = "o")]
        variant: DecisionVariantArg,
        #[arg(long, default_value_t = 50)]
        fuel: usize,
        rules: PathBuf,
    },
    /// Decide whether every chase of the ruleset stops within k rounds.
    CheckKbounded {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "o")]
        variant: DecisionVariantArg,
        /// Give up when the instance enumeration would exceed this many
        /// isomorphism classes.
        #[arg(long, default_value_t = 1_000_000)]
        ceiling: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Decide via the critical instance instead of enumerating; sound
        /// for fully existential rulesets under the oblivious chase.
        #[arg(long)]
        fe_critical: bool,
        rules: PathBuf,
    },
    /// Classify whether the ruleset's chase rank is uniformly bounded.
    Classify {
        #[arg(long, value_enum, default_value = "o")]
        variant: DecisionVariantArg,
        #[arg(long, default_value_t = 50)]
        fuel: usize,
        #[arg(long, default_value_t = 1_000_000)]
        ceiling: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Largest k probed when searching for per-k refutations.
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        /// Rewriting steps granted to the saturation estimates.
        #[arg(long, default_value_t = 8)]
        rewrite_steps: usize,
        rules: PathBuf,
    },
    /// Report term depths of a chase, or a ruleset's uniform depth bound.
    Depth {
        #[arg(long, value_enum, default_value = "o")]
        variant: VariantArg,
        #[arg(long, default_value_t = 50)]
        fuel: usize,
        rules: PathBuf,
        /// With an instance: per-term depths of that chase. Without: the
        /// depth of the critical-instance chase, when it stops.
        instance: Option<PathBuf>,
    },
    /// Re-run a committed scenario and diff its report against the golden
    /// copy.
    Repro {
        /// Scenario id: loop, compose, swap, chain, or split.
        id: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Display) -> Failure {
        Failure { code: 64, message: message.to_string() }
    }

    fn data(path: &Path, err: impl Display) -> Failure {
        Failure { code: 65, message: format!("{}: {err}", path.display()) }
    }

    fn io(path: &Path, err: impl Display) -> Failure {
        Failure { code: 66, message: format!("{}: {err}", path.display()) }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let human = cli.human;
    match cli.command {
        Command::Chase { variant, fuel, max_atoms, trace, rules, instance } => {
            let rs = load_rules(&rules)?;
            let input = load_instance(&instance)?;
            emit(vec![chase_check(&rs, &input, variant.chase(), fuel, max_atoms, trace)], human);
            Ok(0)
        }
        Command::Transform { op, path, instance } => {
            let check = transform_check(op, &path, instance.as_deref())?;
            emit(vec![check], human);
            Ok(0)
        }
        Command::Rewrite { fuel, max_cqs, kaf, kfo, rules, query } => {
            let rs = load_rules(&rules)?;
            let mut budget = RewriteBudget::with_steps(fuel);
            budget.max_cqs = max_cqs;
            if kaf || kfo {
                if query.is_some() {
                    return Err(Failure::usage("an estimate run takes no query file"));
                }
                let seeds = if kaf { "generated-fact" } else { "rule-body" };
                let (check, code) = estimate_check(&rs, seeds, &budget);
                emit(vec![check], human);
                return Ok(code);
            }
            let qpath = query
                .ok_or_else(|| Failure::usage("rewriting needs a query file unless --kaf or --kfo is given"))?;
            let q = load_query(&qpath)?;
            let (check, code) = rewrite_check(&rs, q, &budget);
            emit(vec![check], human);
            Ok(code)
        }
        Command::Ct { variant, fuel, rules } => {
            let rs = load_rules(&rules)?;
            let (check, code) = ct_verb_check(&rs, variant.chase(), fuel);
            emit(vec![check], human);
            Ok(code)
        }
        Command::CheckKbounded { k, variant, ceiling, threads, fe_critical, rules } => {
            let rs = load_rules(&rules)?;
            let (check, code) = if fe_critical {
                if !matches!(variant, DecisionVariantArg::O) {
                    return Err(Failure::usage("--fe-critical decides the oblivious variant only"));
                }
                let verdict = k_bounded_fe_oblivious(&rs, k).map_err(|e| Failure::data(&rules, e))?;
                let code = report::exit_code(verdict.status);
                let mut extras = Map::new();
                extras.insert("k".into(), json!(k));
                extras.insert("variant".into(), json!("o"));
                extras.insert("mode".into(), json!("critical"));
                (report::verdict_check("k-bounded", &verdict, extras), code)
            } else {
                kbounded_check(&rs, k, variant.chase(), ceiling as u128, threads)
            };
            emit(vec![check], human);
            Ok(code)
        }
        Command::Classify { variant, fuel, ceiling, threads, max_k, rewrite_steps, rules } => {
            let rs = load_rules(&rules)?;
            let opts = ClassifyOptions {
                fuel,
                ceiling: ceiling as u128,
                max_k,
                threads,
                rewrite: RewriteBudget::with_steps(rewrite_steps),
            };
            let (check, code) = classify_check(&rs, variant.chase(), &opts);
            emit(vec![check], human);
            Ok(code)
        }
        Command::Depth { variant, fuel, rules, instance } => {
            let rs = load_rules(&rules)?;
            match instance {
                Some(path) => {
                    let input = load_instance(&path)?;
                    emit(vec![depth_check(&rs, &input, variant.chase(), fuel)], human);
                    Ok(0)
                }
                None => {
                    let (check, code) = depth_bound_check(&rs, variant.chase(), fuel);
                    emit(vec![check], human);
                    Ok(code)
                }
            }
        }
        Command::Repro { id } => repro(&id),
    }
}

fn emit(checks: Vec<Value>, human: bool) {
    let mut rep = Report::new();
    for check in checks {
        rep.push(check);
    }
    print!("{}", rep.render(human));
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn load_rules(path: &Path) -> Result<Ruleset, Failure> {
    parse_ruleset(&read(path)?).map_err(|e| Failure::data(path, e))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::data(path, e))
}

fn load_query(path: &Path) -> Result<Query, Failure> {
    parse_query(&read(path)?).map_err(|e| Failure::data(path, e))
}

fn variant_code(v: ChaseVariant) -> &'static str {
    match v {
        ChaseVariant::Oblivious => "o",
        ChaseVariant::SemiOblivious => "so",
        ChaseVariant::Skolem => "skolem",
    }
}

fn outcome_code(o: ChaseOutcome) -> &'static str {
    match o {
        ChaseOutcome::Terminated => "terminated",
        ChaseOutcome::FuelExhausted => "fuel-exhausted",
        ChaseOutcome::AtomCapExceeded => "atom-cap-exceeded",
        ChaseOutcome::WorkCapExceeded => "work-cap-exceeded",
    }
}

fn chase_check(
    rs: &Ruleset,
    input: &Instance,
    variant: ChaseVariant,
    fuel: usize,
    max_atoms: usize,
    trace: bool,
) -> Value {
    let run = chase(rs, input, ChaseOptions::new(variant).with_rounds(fuel).with_atom_cap(max_atoms));
    let mut namer = NullNamer::new();
    for t in &run.creation_order {
        namer.register(t);
    }
    let mut m = Map::new();
    m.insert("check".into(), json!("chase"));
    m.insert("variant".into(), json!(variant_code(variant)));
    m.insert("fuel".into(), json!(fuel));
    m.insert("outcome".into(), json!(outcome_code(run.outcome)));
    if run.outcome.is_terminated() {
        m.insert("rank".into(), json!(run.rank()));
        m.insert("verdict".into(), json!("yes"));
        m.insert("rationale".into(), json!(format!("fixpoint of rank {}", run.rank())));
    } else {
        m.insert("verdict".into(), json!("unknown"));
        m.insert("rationale".into(), json!("the budget ran out while rounds were still productive"));
    }
    m.insert("rounds_computed".into(), json!(run.rank()));
    let sizes: Vec<usize> = run.rounds.iter().map(|r| r.len()).collect();
    m.insert("round_sizes".into(), json!(sizes));
    m.insert("atoms".into(), json!(run.result().len()));
    m.insert("max_depth".into(), json!(run.max_depth()));
    m.insert("max_frontier_depth".into(), json!(run.max_fr_depth()));
    m.insert("result".into(), json!(namer.instance(run.result())));
    if trace {
        let mut triggers = Vec::new();
        for t in &run.triggers {
            let mut assignment = Vec::new();
            for (from, to) in t.assignment.iter() {
                assignment.push(format!("{} -> {}", namer.term(from), namer.term(to)));
            }
            let outputs: Vec<String> = t.outputs.iter().map(|a| namer.atom(a)).collect();
            triggers.push(json!({
                "round": t.round,
                "rule": t.rule,
                "assignment": assignment,
                "outputs": outputs,
                "produced_new": t.produced_new,
            }));
        }
        m.insert("triggers".into(), Value::Array(triggers));
        let legend: Vec<Value> = namer
            .legend()
            .into_iter()
            .map(|(name, origin)| json!({ "null": name, "origin": origin }))
            .collect();
        if !legend.is_empty() {
            m.insert("nulls".into(), Value::Array(legend));
        }
    }
    Value::Object(m)
}

fn depth_check(rs: &Ruleset, input: &Instance, variant: ChaseVariant, fuel: usize) -> Value {
    let run = chase(rs, input, ChaseOptions::new(variant).with_rounds(fuel));
    let mut namer = NullNamer::new();
    for t in &run.creation_order {
        namer.register(t);
    }
    let mut m = Map::new();
    m.insert("check".into(), json!("depth"));
    m.insert("variant".into(), json!(variant_code(variant)));
    m.insert("fuel".into(), json!(fuel));
    m.insert("outcome".into(), json!(outcome_code(run.outcome)));
    if run.outcome.is_terminated() {
        m.insert("rank".into(), json!(run.rank()));
        m.insert("verdict".into(), json!("yes"));
        m.insert("rationale".into(), json!(format!("fixpoint of rank {}", run.rank())));
    } else {
        m.insert("verdict".into(), json!("unknown"));
        m.insert("rationale".into(), json!("the budget ran out while rounds were still productive"));
    }
    m.insert("max_depth".into(), json!(run.max_depth()));
    m.insert("max_frontier_depth".into(), json!(run.max_fr_depth()));
    let mut terms = Vec::new();
    for t in &run.creation_order {
        terms.push(json!({
            "term": namer.term(t),
            "rank": run.term_rank.get(t).copied().unwrap_or(0),
            "depth": run.depth_of(t),
            "frontier_depth": run.fr_depth_of(t),
        }));
    }
    m.insert("terms".into(), Value::Array(terms));
    let legend: Vec<Value> = namer
        .legend()
        .into_iter()
        .map(|(name, origin)| json!({ "null": name, "origin": origin }))
        .collect();
    if !legend.is_empty() {
        m.insert("nulls".into(), Value::Array(legend));
    }
    Value::Object(m)
}

fn transform_check(op: OpArg, path: &Path, instance: Option<&Path>) -> Result<Value, Failure> {
    let reject_instance = |given: Option<&Path>| match given {
        Some(_) => Err(Failure::usage("only fe-encode takes a second path")),
        None => Ok(()),
    };
    let mut m = Map::new();
    m.insert("check".into(), json!("transform"));
    m.insert("verdict".into(), json!("yes"));
    match op {
        OpArg::Df => {
            reject_instance(instance)?;
            let rs = load_rules(path)?;
            return Ok(df_check(&rs));
        }
        OpArg::Psi => {
            reject_instance(instance)?;
            let rs = load_rules(path)?;
            let out = psi_transform(&rs);
            m.insert("op".into(), json!("psi"));
            m.insert("rules".into(), json!(rule_strings(&out)));
        }
        OpArg::Critical => {
            reject_instance(instance)?;
            let rs = load_rules(path)?;
            let critical = critical_instance_with(rs.arities(), &rs.constants());
            m.insert("op".into(), json!("critical"));
            m.insert("instance".into(), json!(instance_strings(&critical)));
        }
        OpArg::FeEncode => {
            let rs = load_rules(path)?;
            let input = match instance {
                Some(p) => load_instance(p)?,
                None => Instance::new(),
            };
            let (out_rules, out_instance) =
                fe_encode(&rs, &input).map_err(|e| Failure::data(path, e))?;
            m.insert("op".into(), json!("fe-encode"));
            m.insert("rules".into(), json!(rule_strings(&out_rules)));
            m.insert("instance".into(), json!(instance_strings(&out_instance)));
        }
        OpArg::FeDecode => {
            reject_instance(instance)?;
            let input = load_instance(path)?;
            let out = fe_decode(&input).map_err(|e| Failure::data(path, e))?;
            m.insert("op".into(), json!("fe-decode"));
            m.insert("instance".into(), json!(instance_strings(&out)));
        }
        OpArg::Freeze => {
            reject_instance(instance)?;
            let input = load_instance(path)?;
            let (out, bijection) = freeze(&input);
            m.insert("op".into(), json!("freeze"));
            m.insert("instance".into(), json!(instance_strings(&out)));
            let pairs: Map<String, Value> =
                bijection.iter().map(|(v, c)| (v.to_string(), json!(c.to_string()))).collect();
            m.insert("bijection".into(), Value::Object(pairs));
        }
    }
    Ok(Value::Object(m))
}

fn rule_strings(rs: &Ruleset) -> Vec<String> {
    rs.rules.iter().map(render_rule).collect()
}

fn instance_strings(i: &Instance) -> Vec<String> {
    let mut namer = NullNamer::new();
    namer.instance(i)
}

fn rewrite_check(rs: &Ruleset, q: Query, budget: &RewriteBudget) -> (Value, u8) {
    let state = run_rewriting(q, rs, budget);
    let mut m = Map::new();
    m.insert("check".into(), json!("rewrite"));
    m.insert("steps".into(), json!(state.steps));
    m.insert("productive_steps".into(), json!(state.productive_steps));
    m.insert("saturated".into(), json!(state.saturated));
    m.insert("exhausted".into(), json!(state.exhausted));
    m.insert("sizes".into(), json!(state.sizes));
    let ucq: Vec<String> = state.ucq.iter().map(|cq| cq.to_string()).collect();
    m.insert("ucq".into(), json!(ucq));
    if state.saturated {
        m.insert("verdict".into(), json!("yes"));
        m.insert(
            "rationale".into(),
            json!(format!(
                "the union stopped growing after {} productive steps",
                state.productive_steps
            )),
        );
        (Value::Object(m), 0)
    } else {
        m.insert("verdict".into(), json!("unknown"));
        m.insert("rationale".into(), json!("the budget ran out before the union saturated"));
        (Value::Object(m), 2)
    }
}

fn estimate_check(rs: &Ruleset, seeds: &str, budget: &RewriteBudget) -> (Value, u8) {
    let estimate = match seeds {
        "generated-fact" => estimate_k_af(rs, budget),
        _ => estimate_k_fo(rs, budget),
    };
    let mut m = Map::new();
    m.insert("check".into(), json!("rewrite-estimate"));
    m.insert("seeds".into(), json!(seeds));
    m.insert("budget".into(), json!(budget.max_steps));
    match estimate {
        KEstimate::Saturated(k) => {
            m.insert("verdict".into(), json!("yes"));
            m.insert("k".into(), json!(k));
            m.insert("rationale".into(), json!("every seed query's rewriting saturated"));
            (Value::Object(m), 0)
        }
        KEstimate::BudgetExhausted { trace } => {
            m.insert("verdict".into(), json!("unknown"));
            m.insert("growth_trace".into(), json!(trace));
            m.insert(
                "rationale".into(),
                json!("a seed query's union was still growing when the budget ran out"),
            );
            (Value::Object(m), 2)
        }
    }
}

fn ct_verb_check(rs: &Ruleset, variant: ChaseVariant, fuel: usize) -> (Value, u8) {
    let verdict = ct_check(rs, variant, fuel);
    let code = report::exit_code(verdict.status);
    let mut extras = Map::new();
    extras.insert("variant".into(), json!(variant_code(variant)));
    extras.insert("fuel".into(), json!(fuel));
    (report::verdict_check("ct", &verdict, extras), code)
}

fn kbounded_check(
    rs: &Ruleset,
    k: usize,
    variant: ChaseVariant,
    ceiling: u128,
    threads: usize,
) -> (Value, u8) {
    match k_bounded(rs, k, variant, ceiling, threads) {
        Ok(verdict) => {
            let code = report::exit_code(verdict.status);
            let mut extras = Map::new();
            extras.insert("k".into(), json!(k));
            extras.insert("variant".into(), json!(variant_code(variant)));
            extras.insert("instances_examined".into(), json!(verdict.budget));
            (report::verdict_check("k-bounded", &verdict, extras), code)
        }
        Err(infeasible) => {
            let mut m = Map::new();
            m.insert("check".into(), json!("k-bounded"));
            m.insert("k".into(), json!(k));
            m.insert("variant".into(), json!(variant_code(variant)));
            m.insert("verdict".into(), json!("unknown"));
            m.insert("rationale".into(), json!(infeasible.to_string()));
            // The estimate can exceed what a JSON number carries; keep it
            // lossless as a string.
            m.insert("estimate".into(), json!(infeasible.estimate.to_string()));
            m.insert("ceiling".into(), json!(ceiling.to_string()));
            (Value::Object(m), 2)
        }
    }
}

fn classify_check(rs: &Ruleset, variant: ChaseVariant, opts: &ClassifyOptions) -> (Value, u8) {
    let verdict = classify_boundedness(rs, variant, opts);
    let code = report::exit_code(verdict.status);
    let mut extras = Map::new();
    extras.insert("variant".into(), json!(variant_code(variant)));
    extras.insert("fuel".into(), json!(opts.fuel));
    extras.insert("max_k".into(), json!(opts.max_k));
    (report::verdict_check("classify", &verdict, extras), code)
}

fn depth_bound_check(rs: &Ruleset, variant: ChaseVariant, fuel: usize) -> (Value, u8) {
    let mut m = Map::new();
    m.insert("check".into(), json!("depth-bound"));
    m.insert("variant".into(), json!(variant_code(variant)));
    m.insert("fuel".into(), json!(fuel));
    match depth_bound(rs, variant, fuel) {
        Some(k_d) => {
            m.insert("verdict".into(), json!("yes"));
            m.insert("k_d".into(), json!(k_d));
            m.insert(
                "rationale".into(),
                json!("the critical-instance chase stopped; its depth bounds every chase"),
            );
            (Value::Object(m), 0)
        }
        None => {
            m.insert("verdict".into(), json!("unknown"));
            m.insert("rationale".into(), json!("the critical-instance chase exceeded its budget"));
            (Value::Object(m), 2)
        }
    }
}

// Committed scenarios; input texts are embedded so a repro run cannot drift
// from the files it was recorded against.
const LOOP_RULES: &str = include_str!("../../../data/loop.erl");
const LOOP_INSTANCE: &str = include_str!("../../../data/loop_instance.erl");
const TRANSITIVE_RULES: &str = include_str!("../../../data/transitive.erl");
const DETACHED_RULES: &str = include_str!("../../../data/detached.erl");
const COMPOSE_RULES: &str = include_str!("../../../data/compose.erl");
const SWAP_RULES: &str = include_str!("../../../data/swap.erl");
const SWAP_INSTANCE: &str = include_str!("../../../data/swap_instance.erl");
const CHAIN_RULES: &str = include_str!("../../../data/chain.erl");
const CHAIN_QUERY: &str = include_str!("../../../data/chain_query.q");
const SPLIT_RULES: &str = include_str!("../../../data/split.erl");
const SPLIT_INSTANCE: &str = include_str!("../../../data/split_instance.erl");

fn embedded_rules(src: &str) -> Ruleset {
    parse_ruleset(src).expect("embedded rules parse")
}

fn embedded_instance(src: &str) -> Instance {
    parse_instance(src).expect("embedded instance parses")
}

fn repro(id: &str) -> Result<u8, Failure> {
    let (rep, golden) = match id {
        "loop" => (loop_scenario(), include_str!("../../../golden/loop.json")),
        "compose" => (compose_scenario(), include_str!("../../../golden/compose.json")),
        "swap" => (swap_scenario(), include_str!("../../../golden/swap.json")),
        "chain" => (chain_scenario(), include_str!("../../../golden/chain.json")),
        "split" => (split_scenario(), include_str!("../../../golden/split.json")),
        other => {
            return Err(Failure::usage(format!(
                "unknown scenario '{other}'; expected loop, compose, swap, chain, or split"
            )))
        }
    };
    // Goldens are recorded as JSON; the diff ignores --human.
    let rendered = rep.render(false);
    print!("{rendered}");
    if rendered == golden {
        eprintln!("repro {id}: report matches the golden copy");
        Ok(0)
    } else {
        eprintln!("repro {id}: report DIFFERS from the golden copy");
        Ok(1)
    }
}

fn loop_scenario() -> Report {
    let rs = embedded_rules(LOOP_RULES);
    let input = embedded_instance(LOOP_INSTANCE);
    let mut rep = Report::new();
    rep.push(chase_check(&rs, &input, ChaseVariant::Oblivious, 50, 100_000, false));
    rep.push(chase_check(&rs, &input, ChaseVariant::SemiOblivious, 10, 100_000, true));
    rep.push(chase_check(&rs, &input, ChaseVariant::Skolem, 10, 100_000, false));
    rep.push(ct_verb_check(&rs, ChaseVariant::Oblivious, 20).0);
    rep.push(ct_verb_check(&rs, ChaseVariant::SemiOblivious, 20).0);
    let verdict = k_bounded_fe_oblivious(&rs, 3).expect("the loop rule is fully existential");
    let mut extras = Map::new();
    extras.insert("k".into(), json!(3));
    extras.insert("variant".into(), json!("o"));
    extras.insert("mode".into(), json!("critical"));
    rep.push(report::verdict_check("k-bounded", &verdict, extras));
    rep
}

fn compose_scenario() -> Report {
    let transitive = embedded_rules(TRANSITIVE_RULES);
    let detached = embedded_rules(DETACHED_RULES);
    let both = embedded_rules(COMPOSE_RULES);
    let mut rep = Report::new();
    rep.push(kbounded_check(&detached, 1, ChaseVariant::Oblivious, 1_000_000, 1).0);
    rep.push(kbounded_check(&transitive, 1, ChaseVariant::Oblivious, 1_000_000, 1).0);
    rep.push(kbounded_check(&both, 1, ChaseVariant::Oblivious, 1_000_000, 1).0);
    let opts = ClassifyOptions::default();
    rep.push(classify_check(&detached, ChaseVariant::Oblivious, &opts).0);
    rep.push(classify_check(&transitive, ChaseVariant::Oblivious, &opts).0);
    rep
}

fn swap_scenario() -> Report {
    let rs = embedded_rules(SWAP_RULES);
    let input = embedded_instance(SWAP_INSTANCE);
    let mut rep = Report::new();
    rep.push(chase_check(&rs, &input, ChaseVariant::SemiOblivious, 10, 100_000, true));
    rep.push(depth_check(&rs, &input, ChaseVariant::Oblivious, 50));
    rep.push(depth_bound_check(&rs, ChaseVariant::SemiOblivious, 10).0);
    rep
}

fn chain_scenario() -> Report {
    let rs = embedded_rules(CHAIN_RULES);
    let q = parse_query(CHAIN_QUERY).expect("embedded query parses");
    let mut rep = Report::new();
    rep.push(estimate_check(&rs, "generated-fact", &RewriteBudget::default()).0);
    rep.push(rewrite_check(&rs, q, &RewriteBudget::with_steps(3)).0);
    rep.push(ct_verb_check(&rs, ChaseVariant::Oblivious, 6).0);
    rep
}

fn split_scenario() -> Report {
    let rs = embedded_rules(SPLIT_RULES);
    let input = embedded_instance(SPLIT_INSTANCE);
    let split = df_decompose(&rs).ruleset();
    let mut rep = Report::new();
    rep.push(chase_check(&rs, &input, ChaseVariant::SemiOblivious, 50, 100_000, false));
    rep.push(df_check(&rs));
    rep.push(chase_check(&split, &input, ChaseVariant::SemiOblivious, 10, 100_000, true));
    rep
}

fn df_check(rs: &Ruleset) -> Value {
    let d = df_decompose(rs);
    let out = d.ruleset();
    let mut m = Map::new();
    m.insert("check".into(), json!("transform"));
    m.insert("verdict".into(), json!("yes"));
    m.insert("op".into(), json!("df"));
    m.insert("rules".into(), json!(rule_strings(&out)));
    let origin: Map<String, Value> =
        d.origin().iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    m.insert("origin".into(), Value::Object(origin));
    m.insert(
        "note".into(),
        json!(
            "splitting heads can shrink rule frontiers, which renames \
             semi-oblivious nulls and can change whether the semi-oblivious \
             chase terminates"
        ),
    );
    Value::Object(m)
}
