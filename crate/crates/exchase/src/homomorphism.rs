//! Homomorphism search between conjunctions of atoms and instances.
//!
//! A homomorphism maps variables (and generated terms) to target terms while
//! fixing constants; an embedding additionally treats constants as bindable,
//! so distinct constants may collapse. Generated terms (nulls, functional
//! terms) bind atomically: the search never decomposes them.
//!
//! The search is a depth-first backtracking walk with a static atom order:
//! pattern atoms with the fewest same-predicate candidates in the target go
//! first, ties broken by atom order. Candidates are tried in instance order,
//! so results are deterministic.

use std::collections::BTreeMap;

use crate::atom::{Atom, Instance};
use crate::subst::Substitution;
use crate::term::Term;

/// Calls `visit` for every homomorphism extending `seed`; stops early if
/// `visit` returns false. Returns false iff the walk was stopped early.
pub fn for_each_homomorphism(
    pattern: &[Atom],
    target: &Instance,
    seed: &Substitution,
    visit: &mut dyn FnMut(&Substitution) -> bool,
) -> bool {
    search(pattern, target, seed, true, visit)
}

/// Like [`for_each_homomorphism`], but constants are bindable too.
pub fn for_each_embedding(
    pattern: &[Atom],
    target: &Instance,
    seed: &Substitution,
    visit: &mut dyn FnMut(&Substitution) -> bool,
) -> bool {
    search(pattern, target, seed, false, visit)
}

pub fn find_homomorphisms(pattern: &[Atom], target: &Instance) -> Vec<Substitution> {
    let mut out = Vec::new();
    for_each_homomorphism(pattern, target, &Substitution::new(), &mut |h| {
        out.push(h.clone());
        true
    });
    out
}

pub fn find_embeddings(pattern: &[Atom], target: &Instance) -> Vec<Substitution> {
    let mut out = Vec::new();
    for_each_embedding(pattern, target, &Substitution::new(), &mut |h| {
        out.push(h.clone());
        true
    });
    out
}

pub fn exists_homomorphism(pattern: &[Atom], target: &Instance, seed: &Substitution) -> bool {
    !for_each_homomorphism(pattern, target, seed, &mut |_| false)
}

fn search(
    pattern: &[Atom],
    target: &Instance,
    seed: &Substitution,
    fix_constants: bool,
    visit: &mut dyn FnMut(&Substitution) -> bool,
) -> bool {
    // Candidate atoms per pattern atom, then most-constrained first.
    let candidates: Vec<Vec<&Atom>> = pattern
        .iter()
        .map(|p| {
            target
                .iter()
                .filter(|t| t.predicate == p.predicate && t.arity() == p.arity())
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..pattern.len()).collect();
    order.sort_by(|&a, &b| {
        candidates[a]
            .len()
            .cmp(&candidates[b].len())
            .then_with(|| pattern[a].cmp(&pattern[b]))
            .then(a.cmp(&b))
    });

    let mut bindings: BTreeMap<Term, Term> =
        seed.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    dfs(&order, &candidates, pattern, 0, &mut bindings, fix_constants, visit)
}

fn dfs(
    order: &[usize],
    candidates: &[Vec<&Atom>],
    pattern: &[Atom],
    depth: usize,
    bindings: &mut BTreeMap<Term, Term>,
    fix_constants: bool,
    visit: &mut dyn FnMut(&Substitution) -> bool,
) -> bool {
    if depth == order.len() {
        let sub = Substitution::from_pairs(bindings.iter().map(|(k, v)| (k.clone(), v.clone())));
        return visit(&sub);
    }
    let idx = order[depth];
    let pat = &pattern[idx];
    for cand in &candidates[idx] {
        let mut added = Vec::new();
        if match_atom(pat, cand, bindings, fix_constants, &mut added) {
            let keep_going =
                dfs(order, candidates, pattern, depth + 1, bindings, fix_constants, visit);
            for k in &added {
                bindings.remove(k);
            }
            if !keep_going {
                return false;
            }
        } else {
            for k in &added {
                bindings.remove(k);
            }
        }
    }
    true
}

fn match_atom(
    pat: &Atom,
    cand: &Atom,
    bindings: &mut BTreeMap<Term, Term>,
    fix_constants: bool,
    added: &mut Vec<Term>,
) -> bool {
    for (s, t) in pat.args.iter().zip(&cand.args) {
        if fix_constants && s.is_constant() {
            if s != t {
                return false;
            }
            continue;
        }
        match bindings.get(s) {
            Some(u) => {
                if u != t {
                    return false;
                }
            }
            None => {
                bindings.insert(s.clone(), t.clone());
                added.push(s.clone());
            }
        }
    }
    true
}
