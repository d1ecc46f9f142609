//! Atoms and instances.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::symbol::Symbol;
use crate::term::Term;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<Symbol>, args: Vec<Term>) -> Atom {
        Atom { predicate: predicate.into(), args }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.args.iter()
    }

    /// Variables occurring in the atom (including inside functional terms),
    /// in argument order with repeats.
    pub fn variables(&self) -> impl Iterator<Item = &Symbol> {
        let mut out = Vec::new();
        for t in &self.args {
            collect_vars(t, &mut out);
        }
        out.into_iter()
    }
}

fn collect_vars<'a>(t: &'a Term, out: &mut Vec<&'a Symbol>) {
    match t {
        Term::Variable(v) => out.push(v),
        Term::Functional(f) => {
            for a in &f.args {
                collect_vars(a, out);
            }
        }
        Term::Null(n) => {
            for (_, inner) in &n.mapping {
                collect_vars(inner, out);
            }
        }
        Term::Constant(_) => {}
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// A set of atoms. Iteration order is the canonical term order, so anything
/// derived from iteration (printing, trigger enumeration) is deterministic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default, Debug)]
pub struct Instance {
    atoms: BTreeSet<Atom>,
}

impl Instance {
    pub fn new() -> Instance {
        Instance::default()
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Instance {
        Instance { atoms: atoms.into_iter().collect() }
    }

    pub fn insert(&mut self, atom: Atom) -> bool {
        self.atoms.insert(atom)
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn contains_all(&self, other: &Instance) -> bool {
        other.atoms.iter().all(|a| self.atoms.contains(a))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter()
    }

    /// Active domain: every term occurring in some atom.
    pub fn adom(&self) -> BTreeSet<Term> {
        self.atoms.iter().flat_map(|a| a.args.iter().cloned()).collect()
    }

    /// Predicate -> arity map of the atoms present.
    pub fn arities(&self) -> BTreeMap<Symbol, usize> {
        let mut out = BTreeMap::new();
        for a in &self.atoms {
            out.entry(a.predicate.clone()).or_insert(a.arity());
        }
        out
    }

    pub fn union(&self, other: &Instance) -> Instance {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Instance { atoms }
    }
}

impl FromIterator<Atom> for Instance {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Instance {
        Instance::from_atoms(iter)
    }
}

impl<'a> IntoIterator for &'a Instance {
    type Item = &'a Atom;
    type IntoIter = std::collections::btree_set::Iter<'a, Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.atoms.iter()
    }
}
