//! Conjunctive queries and subsumption between them.

use std::collections::BTreeMap;
use std::fmt;

use crate::atom::{Atom, Instance};
use crate::homomorphism::exists_homomorphism;
use crate::subst::Substitution;
use crate::term::Term;

/// A conjunctive query: an answer tuple over the body's variables (constants
/// are allowed in answer positions) and a non-empty conjunction of atoms.
/// An empty answer tuple makes the query Boolean.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Query {
    pub answers: Vec<Term>,
    pub atoms: Vec<Atom>,
}

impl Query {
    pub fn new(answers: Vec<Term>, atoms: Vec<Atom>) -> Query {
        Query { answers, atoms }
    }

    pub fn boolean(atoms: Vec<Atom>) -> Query {
        Query { answers: Vec::new(), atoms }
    }

    pub fn is_boolean(&self) -> bool {
        self.answers.is_empty()
    }

    /// All variables of the query in first-occurrence order (answers first).
    pub fn variables(&self) -> Vec<Term> {
        let mut seen = Vec::new();
        let mut push = |t: &Term| {
            if t.is_variable() && !seen.contains(t) {
                seen.push(t.clone());
            }
        };
        for t in &self.answers {
            push(t);
        }
        for a in &self.atoms {
            for t in &a.args {
                push(t);
            }
        }
        seen
    }

    /// Renames variables to `V0, V1, ...` in first-occurrence order (answers
    /// first, then atoms in stored order) and sorts the atoms. Two queries
    /// with equal canonical forms differ only by variable names; for
    /// single-atom queries the converse holds as well.
    pub fn canonical(&self) -> Query {
        let mut renaming: BTreeMap<Term, Term> = BTreeMap::new();
        for v in self.variables() {
            let fresh = Term::variable(format!("V{}", renaming.len()));
            renaming.insert(v, fresh);
        }
        let sub = Substitution::from_pairs(renaming);
        let answers = self.answers.iter().map(|t| sub.apply(t)).collect();
        let mut atoms: Vec<Atom> = self.atoms.iter().map(|a| sub.apply_atom(a)).collect();
        atoms.sort();
        atoms.dedup();
        Query { answers, atoms }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?")?;
        if !self.answers.is_empty() {
            write!(f, "(")?;
            for (i, t) in self.answers.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{t}")?;
            }
            write!(f, ")")?;
        }
        write!(f, " :- ")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// True iff `general` maps homomorphically into `specific` with the answer
/// tuples matched position by position, so every answer of `specific` (over
/// any instance) is an answer of `general`. Variables of `specific` are held
/// fixed during the search.
pub fn cq_subsumes(general: &Query, specific: &Query) -> bool {
    if general.answers.len() != specific.answers.len() {
        return false;
    }
    let mut seed = Substitution::new();
    for (s, t) in general.answers.iter().zip(&specific.answers) {
        if s.is_constant() {
            if s != t {
                return false;
            }
            continue;
        }
        match seed.get(s) {
            Some(u) if u != t => return false,
            Some(_) => {}
            None => seed.bind(s.clone(), t.clone()),
        }
    }
    let target = Instance::from_atoms(specific.atoms.iter().cloned());
    exists_homomorphism(&general.atoms, &target, &seed)
}
