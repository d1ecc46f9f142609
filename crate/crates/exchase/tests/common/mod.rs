//! Deterministic random inputs shared by the integration suites.
//!
//! Generators draw from a seeded ChaCha stream, so every suite re-runs on
//! exactly the same cases. Rulesets are constant-free with at most two body
//! and two head atoms per rule; instances and queries share the generated
//! vocabulary.

#![allow(dead_code)] // each test target compiles its own copy and uses a subset

use exchase::atom::{Atom, Instance};
use exchase::query::Query;
use exchase::rule::{Rule, Ruleset};
use exchase::term::Term;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const PRED_NAMES: [&str; 2] = ["p", "q"];
const BODY_VARS: [&str; 4] = ["X0", "X1", "X2", "X3"];
const EX_VARS: [&str; 2] = ["Z0", "Z1"];
const CONSTS: [&str; 4] = ["a", "b", "c", "d"];
const QUERY_VARS: [&str; 3] = ["U0", "U1", "U2"];

/// One or two predicates with arities 1..=3, fixed for a whole case.
#[derive(Clone, Debug)]
pub struct Vocab {
    pub preds: Vec<(String, usize)>,
}

pub fn vocab(rng: &mut ChaCha8Rng) -> Vocab {
    let n = rng.gen_range(1..=PRED_NAMES.len());
    let preds =
        PRED_NAMES.iter().take(n).map(|s| (s.to_string(), rng.gen_range(1..=3))).collect();
    Vocab { preds }
}

fn pick<'a>(rng: &mut ChaCha8Rng, v: &'a Vocab) -> &'a (String, usize) {
    &v.preds[rng.gen_range(0..v.preds.len())]
}

/// Up to `max_rules` rules over `v`. With `fe` every head atom is forced to
/// carry at least one existential variable.
pub fn ruleset(rng: &mut ChaCha8Rng, v: &Vocab, max_rules: usize, fe: bool) -> Ruleset {
    let n = rng.gen_range(1..=max_rules);
    Ruleset::new((0..n).map(|id| rule(rng, v, id, fe)).collect())
}

fn rule(rng: &mut ChaCha8Rng, v: &Vocab, id: usize, fe: bool) -> Rule {
    let body: Vec<Atom> = (0..rng.gen_range(1..=2))
        .map(|_| {
            let (p, ar) = pick(rng, v);
            let args = (0..*ar)
                .map(|_| Term::variable(BODY_VARS[rng.gen_range(0..BODY_VARS.len())]))
                .collect();
            Atom::new(p.as_str(), args)
        })
        .collect();
    let occurring: Vec<Term> =
        body.iter().flat_map(|a| a.args.iter().cloned()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let head: Vec<Atom> = (0..rng.gen_range(1..=2))
        .map(|_| {
            let (p, ar) = pick(rng, v);
            let mut args: Vec<Term> = (0..*ar)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        Term::variable(EX_VARS[rng.gen_range(0..EX_VARS.len())])
                    } else {
                        occurring[rng.gen_range(0..occurring.len())].clone()
                    }
                })
                .collect();
            let is_ex = |t: &Term| {
                matches!(t, Term::Variable(s) if EX_VARS.contains(&s.as_str()))
            };
            if fe && !args.iter().any(is_ex) {
                let slot = rng.gen_range(0..args.len());
                args[slot] = Term::variable(EX_VARS[rng.gen_range(0..EX_VARS.len())]);
            }
            Atom::new(p.as_str(), args)
        })
        .collect();
    Rule::new(id, body, head)
}

pub fn instance(rng: &mut ChaCha8Rng, v: &Vocab, max_atoms: usize) -> Instance {
    let n = rng.gen_range(1..=max_atoms);
    (0..n)
        .map(|_| {
            let (p, ar) = pick(rng, v);
            let args =
                (0..*ar).map(|_| Term::constant(CONSTS[rng.gen_range(0..CONSTS.len())])).collect();
            Atom::new(p.as_str(), args)
        })
        .collect()
}

/// A query of 1..=3 atoms over `v`; its answer tuple is a subset of the
/// variables used (possibly empty, making the query Boolean).
pub fn query(rng: &mut ChaCha8Rng, v: &Vocab) -> Query {
    let atoms: Vec<Atom> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let (p, ar) = pick(rng, v);
            let args = (0..*ar)
                .map(|_| {
                    if rng.gen_bool(0.6) {
                        Term::variable(QUERY_VARS[rng.gen_range(0..QUERY_VARS.len())])
                    } else {
                        Term::constant(CONSTS[rng.gen_range(0..CONSTS.len())])
                    }
                })
                .collect();
            Atom::new(p.as_str(), args)
        })
        .collect();
    let used: Vec<Term> = atoms
        .iter()
        .flat_map(|a| a.args.iter())
        .filter(|t| matches!(t, Term::Variable(_)))
        .cloned()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let n_ans = rng.gen_range(0..=used.len().min(2));
    Query::new(used.into_iter().take(n_ans).collect(), atoms)
}
