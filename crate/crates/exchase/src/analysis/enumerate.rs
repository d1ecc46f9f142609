//! Exhaustive generation of small ground instances, one representative per
//! isomorphism class.
//!
//! Instances are generated with atoms in strictly increasing order and fresh
//! constants introduced in pool order — every isomorphism class has such a
//! member (its lexicographically smallest relabeling is one) — then each is
//! reduced to that smallest relabeling so duplicates collapse. Constants
//! named by the rules are pinned: usable anywhere, never relabeled.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::atom::{Atom, Instance};
use crate::symbol::Symbol;
use crate::term::Term;

/// The space is too large to enumerate: `estimate` counts raw atom subsets,
/// an upper bound on the isomorphism classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infeasible {
    pub estimate: u128,
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "about {} candidate instances exceed the enumeration ceiling", self.estimate)
    }
}

impl std::error::Error for Infeasible {}

/// Relabelable constants in canonical order: a, b, ..., z.
///
/// Twenty-six suffice for every space under the default ceiling; larger
/// requests are reported as infeasible before any further name would be
/// needed.
pub fn default_pool(n: usize) -> Vec<Symbol> {
    (0..n.min(26)).map(|i| Symbol::from(((b'a' + i as u8) as char).to_string())).collect()
}

fn count_subsets(atom_count: u128, max_atoms: usize, ceiling: u128) -> u128 {
    // sum over j <= max_atoms of (atom_count choose j), saturating once past
    // the ceiling
    let mut total: u128 = 1;
    let mut term: u128 = 1;
    for j in 0..max_atoms as u128 {
        if j >= atom_count {
            break;
        }
        term = match term.checked_mul(atom_count - j) {
            Some(t) => t / (j + 1),
            None => return ceiling + 1,
        };
        total = total.saturating_add(term);
        if total > ceiling {
            return total;
        }
    }
    total
}

/// Every ground instance with at most `max_atoms` atoms over the given
/// predicates, deduplicated up to renaming of non-pinned constants and
/// sorted by size then canonical form. The empty instance is included.
pub fn enumerate_instances(
    arities: &BTreeMap<Symbol, usize>,
    max_atoms: usize,
    pinned: &BTreeSet<Symbol>,
    ceiling: u128,
) -> Result<Vec<Instance>, Infeasible> {
    let max_arity = arities.values().copied().max().unwrap_or(0);
    let fresh_needed = max_atoms * max_arity;
    let pool = default_pool(fresh_needed);

    let domain = (pool.len() + pinned.len()) as u128;
    let mut atom_count: u128 = 0;
    for &n in arities.values() {
        let mut tuples: u128 = 1;
        for _ in 0..n {
            tuples = match tuples.checked_mul(domain.max(1)) {
                Some(t) => t,
                None => return Err(Infeasible { estimate: ceiling + 1 }),
            };
        }
        atom_count = atom_count.saturating_add(tuples);
    }
    let estimate = count_subsets(atom_count, max_atoms, ceiling);
    if estimate > ceiling || pool.len() < fresh_needed {
        return Err(Infeasible { estimate: estimate.max(ceiling + 1) });
    }

    let mut gen = Generator {
        predicates: arities.iter().map(|(p, &n)| (p.clone(), n)).collect(),
        pool: &pool,
        pinned: pinned.iter().map(|c| Term::constant(c.clone())).collect(),
        max_atoms,
        seen: BTreeSet::new(),
        out: vec![Instance::new()],
    };
    gen.extend_instance(&mut Vec::new(), 0);
    let mut out = gen.out;
    out.sort_by_key(|inst| (inst.len(), inst.clone()));
    Ok(out)
}

struct Generator<'a> {
    predicates: Vec<(Symbol, usize)>,
    pool: &'a [Symbol],
    pinned: Vec<Term>,
    max_atoms: usize,
    seen: BTreeSet<Instance>,
    out: Vec<Instance>,
}

impl Generator<'_> {
    /// Appends every candidate atom greater than the current last one, with
    /// `fresh_used` constants of the pool already in play.
    fn extend_instance(&mut self, atoms: &mut Vec<Atom>, fresh_used: usize) {
        if atoms.len() == self.max_atoms {
            return;
        }
        for pi in 0..self.predicates.len() {
            self.extend_args(atoms, fresh_used, pi, &mut Vec::new());
        }
    }

    fn extend_args(
        &mut self,
        atoms: &mut Vec<Atom>,
        fresh_used: usize,
        pi: usize,
        args: &mut Vec<Term>,
    ) {
        let (predicate, arity) = self.predicates[pi].clone();
        if args.len() == arity {
            let atom = Atom::new(predicate, args.clone());
            if atoms.last().is_some_and(|last| *last >= atom) {
                return;
            }
            let fresh_now = fresh_used + self.new_constants(args, fresh_used).len();
            atoms.push(atom);
            let canon = canonicalize(&atoms.iter().cloned().collect(), self.pool);
            if self.seen.insert(canon.clone()) {
                self.out.push(canon);
            }
            self.extend_instance(atoms, fresh_now);
            atoms.pop();
            return;
        }
        for i in 0..self.pinned.len() {
            args.push(self.pinned[i].clone());
            self.extend_args(atoms, fresh_used, pi, args);
            args.pop();
        }
        // Fresh constants already in play, plus at most the next unused one:
        // introducing them in pool order skips the bulk of the renamings.
        let usable = fresh_used + self.new_constants(args, fresh_used).len();
        for i in 0..(usable + 1).min(self.pool.len()) {
            args.push(Term::constant(self.pool[i].clone()));
            self.extend_args(atoms, fresh_used, pi, args);
            args.pop();
        }
    }

    /// Distinct pool constants in `args` beyond the first `fresh_used`.
    fn new_constants<'t>(&self, args: &'t [Term], fresh_used: usize) -> BTreeSet<&'t Symbol> {
        args.iter()
            .filter_map(|t| match t {
                Term::Constant(c) if self.pool[fresh_used.min(self.pool.len())..].contains(c) => {
                    Some(c)
                }
                _ => None,
            })
            .collect()
    }
}

/// Lexicographically smallest relabeling of the instance's non-pinned
/// constants onto the pool prefix.
fn canonicalize(inst: &Instance, pool: &[Symbol]) -> Instance {
    let mut used: Vec<Symbol> = inst
        .adom()
        .into_iter()
        .filter_map(|t| match t {
            Term::Constant(c) if pool.contains(&c) => Some(c),
            _ => None,
        })
        .collect();
    used.sort();
    used.dedup();
    if used.len() <= 1 {
        return relabel(inst, &used, pool);
    }
    let mut best: Option<Instance> = None;
    let mut order = used.clone();
    permutations(&mut order, 0, &mut |perm| {
        let candidate = relabel(inst, perm, pool);
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    });
    best.expect("at least the identity permutation")
}

/// Relabels `order[i]` to `pool[i]`, leaving other constants alone.
fn relabel(inst: &Instance, order: &[Symbol], pool: &[Symbol]) -> Instance {
    let map: BTreeMap<&Symbol, &Symbol> = order.iter().zip(pool.iter()).collect();
    inst.iter()
        .map(|a| {
            Atom::new(
                a.predicate.clone(),
                a.args
                    .iter()
                    .map(|t| match t {
                        Term::Constant(c) => match map.get(c) {
                            Some(fresh) => Term::constant((*fresh).clone()),
                            None => t.clone(),
                        },
                        _ => t.clone(),
                    })
                    .collect(),
            )
        })
        .collect()
}

fn permutations(items: &mut [Symbol], k: usize, visit: &mut impl FnMut(&[Symbol])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}
