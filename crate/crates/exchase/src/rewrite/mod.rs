//! Breadth-first rewriting of conjunctive queries into unions of conjunctive
//! queries, and step-count estimates derived from it.
//!
//! One step rewrites every query added by the previous step against every
//! aggregated piece unifier of the ruleset, then prunes the union under
//! subsumption. A ruleset gets a finite estimate when the union stops
//! growing for every seed query before the budget runs out.

mod unifier;

pub use unifier::{piece_unifiers, selection_rewriting, PieceUnifier};

use std::collections::{BTreeMap, BTreeSet};

use crate::atom::Atom;
use crate::query::{cq_subsumes, Query};
use crate::rule::Ruleset;
use crate::symbol::Symbol;
use crate::term::Term;
use crate::transforms::df_decompose;
use unifier::aggregated_rewritings;

/// Caps on a rewriting run. Every cap trips deterministically, independent
/// of thread count or timing.
#[derive(Debug, Clone)]
pub struct RewriteBudget {
    /// Breadth-first steps before giving up.
    pub max_steps: usize,
    /// Queries kept in the union.
    pub max_cqs: usize,
    /// Atoms a generated query may have.
    pub max_atoms_per_cq: usize,
    /// Unifier-search work units across the whole run.
    pub max_work: usize,
}

impl Default for RewriteBudget {
    fn default() -> Self {
        RewriteBudget { max_steps: 8, max_cqs: 512, max_atoms_per_cq: 24, max_work: 1 << 16 }
    }
}

impl RewriteBudget {
    pub fn with_steps(max_steps: usize) -> RewriteBudget {
        RewriteBudget { max_steps, ..RewriteBudget::default() }
    }
}

/// A union of conjunctive queries under construction.
///
/// Members are kept canonically renamed and form an antichain: no member
/// subsumes another. A newly admitted query evicts the members it strictly
/// subsumes, so the union only ever keeps the most general representatives.
#[derive(Debug, Clone)]
pub struct RewritingState {
    /// Current union.
    pub ucq: Vec<Query>,
    /// Members added by the most recent step; the next step rewrites these.
    pub frontier: Vec<Query>,
    /// Steps taken.
    pub steps: usize,
    /// Steps that added at least one surviving query.
    pub productive_steps: usize,
    /// No further step can add a member.
    pub saturated: bool,
    /// A budget cap tripped; the union may be incomplete.
    pub exhausted: bool,
    /// Union size at the start and after every step.
    pub sizes: Vec<usize>,
    seen: BTreeSet<String>,
    work: usize,
}

impl RewritingState {
    pub fn new(seed: Query) -> RewritingState {
        let seed = seed.canonical();
        let mut seen = BTreeSet::new();
        seen.insert(seed.to_string());
        RewritingState {
            ucq: vec![seed.clone()],
            frontier: vec![seed],
            steps: 0,
            productive_steps: 0,
            saturated: false,
            exhausted: false,
            sizes: vec![1],
            seen,
            work: 0,
        }
    }

    /// One breadth-first step: rewrite every frontier query by every
    /// aggregated piece unifier, admit the candidates no current member
    /// subsumes, and evict the members an admitted candidate strictly
    /// subsumes.
    pub fn aggregate_step(&mut self, rules: &Ruleset, budget: &RewriteBudget) {
        if self.saturated || self.exhausted {
            return;
        }
        self.steps += 1;
        let frontier = std::mem::take(&mut self.frontier);
        let mut survivors: Vec<Query> = Vec::new();
        'queries: for q in &frontier {
            let candidates =
                match aggregated_rewritings(q, &rules.rules, budget.max_work, &mut self.work) {
                    Ok(c) => c,
                    Err(_) => {
                        self.exhausted = true;
                        break 'queries;
                    }
                };
            for cand in candidates {
                if cand.atoms.len() > budget.max_atoms_per_cq {
                    self.exhausted = true;
                    continue;
                }
                let cand = cand.canonical();
                if !self.seen.insert(cand.to_string()) {
                    continue;
                }
                if self.ucq.iter().chain(&survivors).any(|m| cq_subsumes(m, &cand)) {
                    continue;
                }
                self.ucq.retain(|m| !cq_subsumes(&cand, m));
                survivors.retain(|m| !cq_subsumes(&cand, m));
                survivors.push(cand);
                if self.ucq.len() + survivors.len() > budget.max_cqs {
                    self.exhausted = true;
                    break 'queries;
                }
            }
        }
        if survivors.is_empty() {
            self.saturated = !self.exhausted;
        } else {
            self.productive_steps += 1;
            self.ucq.extend(survivors.iter().cloned());
            self.frontier = survivors;
        }
        self.sizes.push(self.ucq.len());
    }
}

/// Runs breadth-first rewriting from `seed` until saturation or a budget
/// cap; a run that stops unsaturated is marked exhausted.
pub fn run_rewriting(seed: Query, rules: &Ruleset, budget: &RewriteBudget) -> RewritingState {
    let mut state = RewritingState::new(seed);
    while !state.saturated && !state.exhausted && state.steps < budget.max_steps {
        state.aggregate_step(rules, budget);
    }
    if !state.saturated {
        state.exhausted = true;
    }
    state
}

/// Outcome of estimating how many rewriting steps a family of seed queries
/// needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KEstimate {
    /// Every seed saturated; the payload is the largest count of productive
    /// steps any of them took.
    Saturated(usize),
    /// Some seed tripped a budget cap; the payload traces how that seed's
    /// union grew per step.
    BudgetExhausted { trace: Vec<usize> },
}

impl KEstimate {
    pub fn saturated_k(&self) -> Option<usize> {
        match self {
            KEstimate::Saturated(k) => Some(*k),
            KEstimate::BudgetExhausted { .. } => None,
        }
    }
}

/// One full-atomic query per distinct datalog-rule head in the
/// frontier-decomposition of the ruleset.
///
/// Answers are the head's positions left to right, repeating a variable
/// exactly where the head repeats one; constants get a plain positional
/// variable. Isomorphic duplicates are dropped.
pub fn hd_queries(rs: &Ruleset) -> Vec<Query> {
    let df = df_decompose(rs);
    let mut out: Vec<Query> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for rule in &df.datalog_rules {
        for head in &rule.head {
            let mut var_of: BTreeMap<Symbol, Term> = BTreeMap::new();
            let mut args: Vec<Term> = Vec::new();
            for (pos, t) in head.args.iter().enumerate() {
                let arg = match t {
                    Term::Variable(v) => var_of
                        .entry(v.clone())
                        .or_insert_with(|| Term::variable(format!("X{}", pos + 1)))
                        .clone(),
                    _ => Term::variable(format!("X{}", pos + 1)),
                };
                args.push(arg);
            }
            let q =
                Query::new(args.clone(), vec![Atom::new(head.predicate.clone(), args)]).canonical();
            if seen.insert(q.to_string()) {
                out.push(q);
            }
        }
    }
    out
}

/// The body of each rule as a query answering the rule's frontier, in
/// body-occurrence order. Isomorphic duplicates are dropped.
pub fn body_queries(rs: &Ruleset) -> Vec<Query> {
    let mut out: Vec<Query> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for rule in &rs.rules {
        let answers = rule.frontier().iter().map(|v| Term::variable(v.clone())).collect();
        let q = Query::new(answers, rule.body.clone()).canonical();
        if seen.insert(q.to_string()) {
            out.push(q);
        }
    }
    out
}

fn estimate_over(seeds: Vec<Query>, rules: &Ruleset, budget: &RewriteBudget) -> KEstimate {
    let mut k = 0;
    for seed in seeds {
        let state = run_rewriting(seed, rules, budget);
        if state.saturated {
            k = k.max(state.productive_steps);
        } else {
            return KEstimate::BudgetExhausted { trace: state.sizes };
        }
    }
    KEstimate::Saturated(k)
}

/// Largest number of productive rewriting steps any full-atomic head query
/// of the ruleset needs, when all of them saturate.
pub fn estimate_k_af(rs: &Ruleset, budget: &RewriteBudget) -> KEstimate {
    estimate_over(hd_queries(rs), rs, budget)
}

/// As [`estimate_k_af`], seeded with the rule-body queries instead.
pub fn estimate_k_fo(rs: &Ruleset, budget: &RewriteBudget) -> KEstimate {
    estimate_over(body_queries(rs), rs, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_query, parse_ruleset};

    fn rules(src: &str) -> Ruleset {
        parse_ruleset(src).expect("parses")
    }

    fn query(src: &str) -> Query {
        parse_query(src).expect("parses")
    }

    fn equivalent(a: &Query, b: &Query) -> bool {
        cq_subsumes(a, b) && cq_subsumes(b, a)
    }

    /// Boolean chain of `k` p-atoms from constant a to constant b.
    fn bool_chain(k: usize) -> Query {
        let mut atoms = Vec::new();
        let mut prev = Term::constant("a");
        for i in 1..k {
            let v = Term::variable(format!("U{i}"));
            atoms.push(Atom::new("p", vec![prev, v.clone()]));
            prev = v;
        }
        atoms.push(Atom::new("p", vec![prev, Term::constant("b")]));
        Query::new(Vec::new(), atoms)
    }

    #[test]
    fn chain_seed_grows_into_an_antichain_of_chains() {
        let rs = rules("p(X,X1), p(X1,X2), p(X2,Z) -> p(X,Y), p(Y,Z).");
        let budget = RewriteBudget::default();
        let mut state = RewritingState::new(bool_chain(2));
        for _ in 0..3 {
            state.aggregate_step(&rs, &budget);
        }
        // Step 3 adds both the 5-chain (single unifiers) and the 6-chain
        // (aggregation of the two disjoint end pieces of the 4-chain).
        assert_eq!(state.sizes, vec![1, 2, 3, 5]);
        assert!(!state.saturated);
        assert!(!state.exhausted);
        for k in 2..=6 {
            let chain = bool_chain(k);
            let hits = state.ucq.iter().filter(|m| equivalent(m, &chain)).count();
            assert_eq!(hits, 1, "expected exactly one {k}-chain");
        }
        for (i, a) in state.ucq.iter().enumerate() {
            for (j, b) in state.ucq.iter().enumerate() {
                if i != j {
                    assert!(!cq_subsumes(a, b), "union must be an antichain");
                }
            }
        }
    }

    #[test]
    fn fully_existential_rulesets_have_no_head_queries() {
        let rs = rules("p(X,X1), p(X1,X2), p(X2,Z) -> p(X,Y), p(Y,Z).");
        assert!(hd_queries(&rs).is_empty());
        assert_eq!(estimate_k_af(&rs, &RewriteBudget::default()), KEstimate::Saturated(0));
    }

    #[test]
    fn projection_rule_saturates_after_one_productive_step() {
        let rs = rules("p(X,Y) -> q(X).");
        assert_eq!(estimate_k_af(&rs, &RewriteBudget::default()), KEstimate::Saturated(1));
    }

    #[test]
    fn transitivity_exhausts_the_head_query_budget() {
        let rs = rules("p(X,Y), p(Y,Z) -> p(X,Z).");
        let estimate = estimate_k_af(&rs, &RewriteBudget::with_steps(4));
        assert!(matches!(estimate, KEstimate::BudgetExhausted { .. }));
    }

    #[test]
    fn composition_rule_evicts_its_seed_and_saturates() {
        let rs = rules("p(X,Y), p(W,Z) -> p(X,Z).");
        let budget = RewriteBudget::default();
        let seeds = hd_queries(&rs);
        assert_eq!(seeds.len(), 1);
        let state = run_rewriting(seeds[0].clone(), &rs, &budget);
        assert!(state.saturated);
        assert_eq!(state.productive_steps, 1);
        // The one-step rewriting strictly subsumes the full-atomic seed, so
        // the seed is evicted and the union stays at a single member.
        assert_eq!(state.ucq.len(), 1);
        assert!(cq_subsumes(&state.ucq[0], &seeds[0]));
        assert!(!cq_subsumes(&seeds[0], &state.ucq[0]));
        assert_eq!(estimate_k_af(&rs, &budget), KEstimate::Saturated(1));
    }

    #[test]
    fn head_queries_mirror_datalog_heads_after_decomposition() {
        let rs = rules("p(X,Y) -> p(X,Z), q(X).");
        let qs = hd_queries(&rs);
        assert_eq!(qs.len(), 1);
        assert!(equivalent(&qs[0], &query("?(X) :- q(X).")));
        assert_eq!(qs[0].answers.len(), 1);

        let rs = rules("p(X,Y), p(Y,Z) -> p(X,Z). p(X,Y), p(W,Z) -> p(X,Z).");
        let qs = hd_queries(&rs);
        assert_eq!(qs.len(), 1, "isomorphic heads deduplicate");
        assert!(equivalent(&qs[0], &query("?(X1,X2) :- p(X1,X2).")));
    }

    #[test]
    fn head_queries_repeat_answers_where_heads_repeat_variables() {
        let rs = rules("p(X,Y) -> q(X,X,a).");
        let qs = hd_queries(&rs);
        assert_eq!(qs.len(), 1);
        let q = &qs[0];
        assert_eq!(q.answers.len(), 3);
        assert_eq!(q.answers[0], q.answers[1]);
        assert_ne!(q.answers[0], q.answers[2]);
        assert_eq!(q.atoms.len(), 1);
        assert!(q.atoms[0].args.iter().all(|t| matches!(t, Term::Variable(_))));
    }

    #[test]
    fn body_queries_answer_the_frontier_in_body_order() {
        let rs = rules("p(X,Y), p(W,Z) -> p(X,Z).");
        let qs = body_queries(&rs);
        assert_eq!(qs.len(), 1);
        let q = &qs[0];
        assert_eq!(q.answers.len(), 2);
        assert_eq!(q.atoms.len(), 2);
        assert!(equivalent(q, &query("?(X,Z) :- p(X,Y), p(W,Z).")));
    }

    #[test]
    fn growing_null_chains_exhaust_the_body_query_budget() {
        let rs = rules("p(X,Y,U), p(Y,Z,V) -> p(X,Z,W).");
        let estimate = estimate_k_fo(&rs, &RewriteBudget::with_steps(4));
        assert!(matches!(estimate, KEstimate::BudgetExhausted { .. }));
    }

    #[test]
    fn self_chaining_existential_rule_saturates_immediately() {
        // The body query's own rewriting is isomorphic to the seed: Y is
        // neither an answer nor separating, so it may take the existential.
        let rs = rules("p(X,Y) -> p(X,Z).");
        assert_eq!(estimate_k_fo(&rs, &RewriteBudget::default()), KEstimate::Saturated(0));
    }

    #[test]
    fn empty_ruleset_estimates_are_zero() {
        let rs = rules("");
        assert_eq!(estimate_k_af(&rs, &RewriteBudget::default()), KEstimate::Saturated(0));
        assert_eq!(estimate_k_fo(&rs, &RewriteBudget::default()), KEstimate::Saturated(0));
    }

    #[test]
    fn composition_body_query_saturates_without_growth() {
        let rs = rules("p(X,Y), p(W,Z) -> p(X,Z).");
        assert_eq!(estimate_k_fo(&rs, &RewriteBudget::default()), KEstimate::Saturated(0));
    }

    #[test]
    fn exhaustion_reports_the_growth_trace() {
        let rs = rules("p(X,Y), p(Y,Z) -> p(X,Z).");
        match estimate_k_af(&rs, &RewriteBudget::with_steps(3)) {
            KEstimate::BudgetExhausted { trace } => {
                assert_eq!(trace[0], 1);
                assert!(trace.len() >= 2);
                assert!(trace.windows(2).all(|w| w[0] <= w[1]));
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }
}
