//! Extending instance embeddings along chase runs, and the structural
//! translations between chase variants.
//!
//! Given an embedding `phi` of instance `I` into `I'` (a homomorphism that
//! may also move constants), [`extend_embedding`] lifts it to every term
//! minted while chasing `I`: a null keyed by an assignment is sent to the
//! null keyed by the image of that assignment, and a functional term to the
//! same function over the image of its arguments. Processing terms in
//! creation order makes the lift well-defined, because a term's key only
//! mentions terms from strictly earlier rounds.

use std::collections::BTreeMap;

use crate::atom::Instance;
use crate::chase::ChaseResult;
use crate::rule::Ruleset;
use crate::subst::Substitution;
use crate::symbol::Symbol;
use crate::term::{NullKind, Term};

/// Lifts `phi` (defined on the input instance's terms) to all generated
/// terms of `src`, returning the combined map.
pub fn extend_embedding(src: &ChaseResult, phi: &Substitution) -> Substitution {
    let mut full = phi.clone();
    for t in &src.creation_order {
        let image = match t {
            Term::Null(n) => Term::null(
                n.kind,
                n.rule,
                n.var.clone(),
                n.mapping.iter().map(|(v, img)| (v.clone(), full.apply(img))).collect::<Vec<_>>(),
            ),
            Term::Functional(f) => Term::functional(
                f.rule,
                f.var.clone(),
                f.args.iter().map(|a| full.apply(a)).collect(),
            ),
            other => other.clone(),
        };
        full.bind(t.clone(), image);
    }
    full
}

/// Checks `phi(src.rounds[i])` is contained in `dst.rounds[i]` for every
/// computed round of `src`. Rounds of `dst` past its fixpoint are clamped,
/// so `dst` should either be terminated or have at least as much fuel.
pub fn embeds_round_by_round(src: &ChaseResult, dst: &ChaseResult, phi: &Substitution) -> bool {
    src.rounds.iter().enumerate().all(|(i, round)| {
        let image: Instance = phi.apply_instance(round);
        dst.round(i).contains_all(&image)
    })
}

/// The structural collapse from an oblivious run onto the semi-oblivious
/// one: each null keyed by a full assignment maps to the null keyed by its
/// frontier restriction.
pub fn oblivious_to_semi_oblivious(src: &ChaseResult, rs: &Ruleset) -> Substitution {
    let frontiers: BTreeMap<usize, Vec<Symbol>> =
        rs.rules.iter().map(|r| (r.id, r.frontier().to_vec())).collect();
    let mut map = Substitution::new();
    for t in &src.creation_order {
        if let Term::Null(n) = t {
            let frontier = &frontiers[&n.rule];
            let mapping: Vec<(Symbol, Term)> = n
                .mapping
                .iter()
                .filter(|(v, _)| frontier.contains(v))
                .map(|(v, img)| (v.clone(), map.apply(img)))
                .collect();
            let image = Term::null(NullKind::SemiOblivious, n.rule, n.var.clone(), mapping);
            map.bind(t.clone(), image);
        }
    }
    map
}

/// The structural bijection from skolem terms to semi-oblivious nulls:
/// `f[r::z](t1..tk)` maps to the null for rule `r`, variable `z`, frontier
/// assignment `fr_i -> t_i`.
pub fn skolem_term_to_null(t: &Term, frontiers: &BTreeMap<usize, Vec<Symbol>>) -> Term {
    match t {
        Term::Functional(f) => {
            let frontier = &frontiers[&f.rule];
            let mapping: Vec<(Symbol, Term)> = frontier
                .iter()
                .cloned()
                .zip(f.args.iter().map(|a| skolem_term_to_null(a, frontiers)))
                .collect();
            Term::null(NullKind::SemiOblivious, f.rule, f.var.clone(), mapping)
        }
        other => other.clone(),
    }
}

/// Maps a whole skolem-chase instance through [`skolem_term_to_null`].
pub fn skolem_instance_to_so(i: &Instance, rs: &Ruleset) -> Instance {
    let frontiers: BTreeMap<usize, Vec<Symbol>> =
        rs.rules.iter().map(|r| (r.id, r.frontier().to_vec())).collect();
    i.iter()
        .map(|a| {
            crate::atom::Atom::new(
                a.predicate.clone(),
                a.args.iter().map(|t| skolem_term_to_null(t, &frontiers)).collect(),
            )
        })
        .collect()
}

/// The null translation that witnesses the round-by-round agreement between
/// an oblivious run of a ruleset and of its head decomposition: a null of
/// rule `r` becomes the null of the decomposition's generating rule for `r`,
/// with the assignment translated recursively.
pub fn decomposition_null_translation(
    src: &ChaseResult,
    fe_rule_of: &BTreeMap<usize, usize>,
) -> Substitution {
    let mut map = Substitution::new();
    for t in &src.creation_order {
        if let Term::Null(n) = t {
            let image = Term::null(
                n.kind,
                fe_rule_of[&n.rule],
                n.var.clone(),
                n.mapping.iter().map(|(v, img)| (v.clone(), map.apply(img))).collect::<Vec<_>>(),
            );
            map.bind(t.clone(), image);
        }
    }
    map
}
