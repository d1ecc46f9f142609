//! Breadth-first chase engines.
//!
//! All three variants run in rounds: round `i` enumerates every rule trigger
//! against the full round `i-1` instance and adds all outputs at once, so
//! `rounds[i]` is the saturation of `rounds[i-1]` under one parallel step. A
//! trigger fires at most once over the whole run, keyed per variant:
//!
//! * oblivious — rule plus the full body assignment; a fresh null is minted
//!   per existential variable and full assignment,
//! * semi-oblivious — rule plus the assignment restricted to the frontier;
//!   nulls are minted per frontier assignment, so two triggers agreeing on
//!   the frontier share their nulls,
//! * skolem — rules are skolemized first (existentials become functional
//!   terms over the frontier) and then chased like datalog.
//!
//! Besides the saturated instance the engine records, for every fact and
//! generated term, the round where it first appeared, and for every generated
//! term its existential depth (1 + max depth over the instantiated body) and
//! frontier depth (1 + max depth over the frontier image). When several
//! triggers of one round mint the same term, the smallest depth wins; later
//! rounds never revisit it.

pub mod embedding;

use std::collections::{BTreeMap, BTreeSet};

use crate::atom::{Atom, Instance};
use crate::homomorphism::for_each_homomorphism;
use crate::query::Query;
use crate::rule::{Rule, Ruleset};
use crate::subst::Substitution;
use crate::symbol::Symbol;
use crate::term::{NullKind, Term};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ChaseVariant {
    Oblivious,
    SemiOblivious,
    Skolem,
}

impl ChaseVariant {
    pub fn label(self) -> &'static str {
        match self {
            ChaseVariant::Oblivious => "oblivious",
            ChaseVariant::SemiOblivious => "semi-oblivious",
            ChaseVariant::Skolem => "skolem",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ChaseOptions {
    pub variant: ChaseVariant,
    /// Maximum number of rounds to enumerate. Termination is only reported
    /// when an enumerated round adds nothing, so certifying that a chase has
    /// rank `r` needs at least `r + 1` rounds of fuel.
    pub max_rounds: usize,
    /// Abort once the instance grows past this many atoms.
    pub max_atoms: usize,
    /// Abort once this many body matches have been enumerated over the
    /// whole run. Dense instances admit far more matches than atoms — every
    /// body homomorphism is one, and each round re-walks them all — so this
    /// is the cap that bounds both time and the fired-trigger ledger.
    pub max_work: usize,
    /// Keep a [`TriggerRecord`] per firing. Disable for analysis sweeps
    /// that only need ranks and depths; the records dwarf the instance on
    /// dense runs.
    pub log_triggers: bool,
}

impl ChaseOptions {
    pub fn new(variant: ChaseVariant) -> ChaseOptions {
        ChaseOptions {
            variant,
            max_rounds: 32,
            max_atoms: 100_000,
            max_work: usize::MAX,
            log_triggers: true,
        }
    }

    pub fn with_rounds(mut self, max_rounds: usize) -> ChaseOptions {
        self.max_rounds = max_rounds;
        self
    }

    pub fn with_atom_cap(mut self, max_atoms: usize) -> ChaseOptions {
        self.max_atoms = max_atoms;
        self
    }

    pub fn with_work_cap(mut self, max_work: usize) -> ChaseOptions {
        self.max_work = max_work;
        self
    }

    pub fn with_trigger_log(mut self, log_triggers: bool) -> ChaseOptions {
        self.log_triggers = log_triggers;
        self
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChaseOutcome {
    /// An enumerated round added no facts; the result is a fixpoint.
    Terminated,
    FuelExhausted,
    AtomCapExceeded,
    WorkCapExceeded,
}

impl ChaseOutcome {
    pub fn is_terminated(self) -> bool {
        self == ChaseOutcome::Terminated
    }
}

/// One fired trigger: rule, full body assignment, and its head instantiation.
#[derive(Clone, Debug)]
pub struct TriggerRecord {
    pub round: usize,
    pub rule: usize,
    pub assignment: Substitution,
    pub outputs: Vec<Atom>,
    pub produced_new: bool,
}

#[derive(Clone, Debug)]
pub struct ChaseResult {
    pub variant: ChaseVariant,
    /// Cumulative rounds; `rounds[0]` is the input instance.
    pub rounds: Vec<Instance>,
    pub outcome: ChaseOutcome,
    /// Round where each fact first appeared (0 for input facts).
    pub fact_rank: BTreeMap<Atom, usize>,
    /// Frontier depth of the trigger that first produced each derived fact.
    pub fact_fr_depth: BTreeMap<Atom, usize>,
    /// Round where each term first entered the active domain.
    pub term_rank: BTreeMap<Term, usize>,
    /// Existential depth of each generated term.
    pub depth: BTreeMap<Term, usize>,
    /// Frontier depth of each generated term.
    pub fr_depth: BTreeMap<Term, usize>,
    pub triggers: Vec<TriggerRecord>,
    /// Generated terms in the order they were minted.
    pub creation_order: Vec<Term>,
}

impl ChaseResult {
    pub fn result(&self) -> &Instance {
        self.rounds.last().expect("at least the input round exists")
    }

    /// Index of the last productive round. Meaningful as the chase rank only
    /// when the outcome is [`ChaseOutcome::Terminated`].
    pub fn rank(&self) -> usize {
        self.rounds.len() - 1
    }

    /// `rounds[i]`, clamped to the final round beyond the computed prefix.
    pub fn round(&self, i: usize) -> &Instance {
        &self.rounds[i.min(self.rounds.len() - 1)]
    }

    pub fn depth_of(&self, t: &Term) -> usize {
        self.depth.get(t).copied().unwrap_or(0)
    }

    pub fn fr_depth_of(&self, t: &Term) -> usize {
        self.fr_depth.get(t).copied().unwrap_or(0)
    }

    /// Largest existential depth over the terms of `fact` (0 if none are
    /// generated).
    pub fn fact_value_depth(&self, fact: &Atom) -> usize {
        fact.args.iter().map(|t| self.depth_of(t)).max().unwrap_or(0)
    }

    pub fn max_depth(&self) -> usize {
        self.depth.values().copied().max().unwrap_or(0)
    }

    pub fn max_fr_depth(&self) -> usize {
        self.fr_depth.values().copied().max().unwrap_or(0)
    }
}

/// Replaces every existential head variable by a functional term over the
/// rule's frontier. Rules without existentials are kept as they are.
pub fn skolemize(rs: &Ruleset) -> Ruleset {
    let rules = rs
        .rules
        .iter()
        .map(|r| {
            if r.is_datalog() {
                return r.clone();
            }
            let mut sub = Substitution::new();
            for z in r.existentials() {
                let args = r.frontier().iter().map(|v| Term::variable(v.clone())).collect();
                sub.bind(Term::variable(z.clone()), Term::functional(r.id, z.clone(), args));
            }
            let head = r.head.iter().map(|a| sub.apply_atom(a)).collect();
            Rule::new(r.id, r.body.clone(), head)
        })
        .collect();
    Ruleset::new(rules)
}

type TriggerKey = (usize, Vec<(Symbol, Term)>);

fn trigger_key(variant: ChaseVariant, rule: &Rule, hom: &Substitution) -> TriggerKey {
    let vars: Vec<Symbol> = match variant {
        ChaseVariant::SemiOblivious => rule.frontier().to_vec(),
        ChaseVariant::Oblivious | ChaseVariant::Skolem => {
            rule.body_variables().into_iter().collect()
        }
    };
    let mut mapping: Vec<(Symbol, Term)> = vars
        .into_iter()
        .map(|v| {
            let img = hom.apply(&Term::variable(v.clone()));
            (v, img)
        })
        .collect();
    mapping.sort();
    (rule.id, mapping)
}

pub fn chase(rs: &Ruleset, input: &Instance, opts: ChaseOptions) -> ChaseResult {
    let rules = match opts.variant {
        ChaseVariant::Skolem => skolemize(rs),
        _ => rs.clone(),
    };
    let mut res = ChaseResult {
        variant: opts.variant,
        rounds: vec![input.clone()],
        outcome: ChaseOutcome::FuelExhausted,
        fact_rank: input.iter().map(|a| (a.clone(), 0)).collect(),
        fact_fr_depth: BTreeMap::new(),
        term_rank: input.adom().into_iter().map(|t| (t, 0)).collect(),
        depth: BTreeMap::new(),
        fr_depth: BTreeMap::new(),
        triggers: Vec::new(),
        creation_order: Vec::new(),
    };
    let mut fired: BTreeSet<TriggerKey> = BTreeSet::new();
    let mut work = 0usize;

    for round in 1..=opts.max_rounds {
        let prev = res.rounds.last().unwrap().clone();
        let mut new_atoms: BTreeSet<Atom> = BTreeSet::new();
        let mut over_cap = None;

        for rule in &rules.rules {
            // Stream the matches: a dense round can have far more body
            // homomorphisms than the cap allows firing, so the walk must be
            // abandoned the moment a cap trips.
            for_each_homomorphism(&rule.body, &prev, &Substitution::new(), &mut |hom| {
                work += 1;
                if work > opts.max_work {
                    over_cap = Some(ChaseOutcome::WorkCapExceeded);
                    return false;
                }
                let key = trigger_key(opts.variant, rule, hom);
                if !fired.insert(key) {
                    return true;
                }
                fire_trigger(&mut res, rule, hom, round, &mut new_atoms, opts.log_triggers);
                if prev.len() + new_atoms.len() > opts.max_atoms {
                    over_cap = Some(ChaseOutcome::AtomCapExceeded);
                    return false;
                }
                true
            });
            if over_cap.is_some() {
                break;
            }
        }

        if let Some(outcome) = over_cap {
            res.outcome = outcome;
            return res;
        }
        if new_atoms.is_empty() {
            res.outcome = ChaseOutcome::Terminated;
            return res;
        }
        let mut next = prev;
        for a in new_atoms {
            next.insert(a);
        }
        res.rounds.push(next);
    }
    res
}

fn fire_trigger(
    res: &mut ChaseResult,
    rule: &Rule,
    hom: &Substitution,
    round: usize,
    new_atoms: &mut BTreeSet<Atom>,
    log: bool,
) {
    // Depth of the instantiated body / frontier image, shared by every term
    // and fact this trigger produces.
    let body_depth = 1 + rule
        .body
        .iter()
        .flat_map(|a| a.args.iter())
        .map(|t| res.depth_of(&hom.apply(t)))
        .max()
        .unwrap_or(0);
    let frontier_depth = 1 + rule
        .frontier()
        .iter()
        .map(|v| res.fr_depth_of(&hom.apply(&Term::variable(v.clone()))))
        .max()
        .unwrap_or(0);

    let mut ext = hom.clone();
    for z in rule.existentials() {
        let mapped_vars: Vec<Symbol> = match res.variant {
            ChaseVariant::SemiOblivious => rule.frontier().to_vec(),
            _ => rule.body_variables().into_iter().collect(),
        };
        let kind = match res.variant {
            ChaseVariant::SemiOblivious => NullKind::SemiOblivious,
            _ => NullKind::Oblivious,
        };
        let mapping: Vec<(Symbol, Term)> = mapped_vars
            .into_iter()
            .map(|v| {
                let img = hom.apply(&Term::variable(v.clone()));
                (v, img)
            })
            .collect();
        ext.bind(Term::variable(z.clone()), Term::null(kind, rule.id, z.clone(), mapping));
    }

    let outputs: Vec<Atom> = rule.head.iter().map(|a| ext.apply_atom(a)).collect();
    let mut produced_new = false;

    for out in &outputs {
        for t in &out.args {
            if !t.is_generated() {
                continue;
            }
            match res.term_rank.get(t) {
                None => {
                    res.term_rank.insert(t.clone(), round);
                    res.depth.insert(t.clone(), body_depth);
                    res.fr_depth.insert(t.clone(), frontier_depth);
                    res.creation_order.push(t.clone());
                }
                Some(&r) if r == round => {
                    let d = res.depth.get_mut(t).unwrap();
                    *d = (*d).min(body_depth);
                    let fd = res.fr_depth.get_mut(t).unwrap();
                    *fd = (*fd).min(frontier_depth);
                }
                Some(_) => {}
            }
        }
        match res.fact_rank.get(out) {
            None => {
                res.fact_rank.insert(out.clone(), round);
                res.fact_fr_depth.insert(out.clone(), frontier_depth);
                new_atoms.insert(out.clone());
                produced_new = true;
            }
            Some(&r) if r == round => {
                let fd = res.fact_fr_depth.get_mut(out).unwrap();
                *fd = (*fd).min(frontier_depth);
            }
            Some(_) => {}
        }
    }

    if log {
        res.triggers.push(TriggerRecord {
            round,
            rule: rule.id,
            assignment: hom.clone(),
            outputs,
            produced_new,
        });
    }
}

#[derive(Clone, Debug)]
pub struct CertainAnswers {
    pub answers: BTreeSet<Vec<Term>>,
    /// True when the chase reached a fixpoint, making the answer set exact;
    /// otherwise the reported answers are a sound lower approximation.
    pub complete: bool,
}

/// Answers of `query` that hold in every model of rules + input, computed on
/// the chase result. Only all-constant tuples qualify; a Boolean query
/// reports the empty tuple when it holds.
pub fn certain_answers(
    rs: &Ruleset,
    input: &Instance,
    query: &Query,
    opts: ChaseOptions,
) -> CertainAnswers {
    let res = chase(rs, input, opts);
    let mut answers = BTreeSet::new();
    for_each_homomorphism(&query.atoms, res.result(), &Substitution::new(), &mut |h| {
        let tuple: Vec<Term> = query.answers.iter().map(|t| h.apply(t)).collect();
        if tuple.iter().all(Term::is_constant) {
            answers.insert(tuple);
        }
        true
    });
    CertainAnswers { answers, complete: res.outcome.is_terminated() }
}
