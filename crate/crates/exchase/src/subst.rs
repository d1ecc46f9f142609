//! Substitutions over terms.

use std::collections::BTreeMap;

use crate::atom::{Atom, Instance};
use crate::term::Term;

/// A finite map from terms to terms. Keys are usually variables, but nulls
/// and constants are allowed as keys so the same machinery serves rule
/// application, embeddings between chases, and null-translation maps.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Substitution {
    map: BTreeMap<Term, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Term, Term)>) -> Substitution {
        Substitution { map: pairs.into_iter().collect() }
    }

    pub fn bind(&mut self, from: Term, to: Term) {
        self.map.insert(from, to);
    }

    pub fn get(&self, t: &Term) -> Option<&Term> {
        self.map.get(t)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, &Term)> {
        self.map.iter()
    }

    /// Applies the map to a term: a direct binding wins; otherwise functional
    /// terms are rewritten argument-wise. Nulls without a direct binding are
    /// left untouched — their identity is opaque to substitution.
    pub fn apply(&self, t: &Term) -> Term {
        if let Some(out) = self.map.get(t) {
            return out.clone();
        }
        match t {
            Term::Functional(f) => {
                let args = f.args.iter().map(|a| self.apply(a)).collect();
                Term::functional(f.rule, f.var.clone(), args)
            }
            other => other.clone(),
        }
    }

    pub fn apply_atom(&self, atom: &Atom) -> Atom {
        Atom::new(atom.predicate.clone(), atom.args.iter().map(|t| self.apply(t)).collect())
    }

    pub fn apply_instance(&self, instance: &Instance) -> Instance {
        instance.iter().map(|a| self.apply_atom(a)).collect()
    }

    /// `self` then `after`: (after ∘ self)(t) = after(self(t)).
    pub fn then(&self, after: &Substitution) -> Substitution {
        let mut map: BTreeMap<Term, Term> =
            self.map.iter().map(|(k, v)| (k.clone(), after.apply(v))).collect();
        for (k, v) in &after.map {
            map.entry(k.clone()).or_insert_with(|| v.clone());
        }
        Substitution { map }
    }
}

impl FromIterator<(Term, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Term, Term)>>(iter: I) -> Substitution {
        Substitution::from_pairs(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unbound_terms_pass_through() {
        let s = Substitution::from_pairs([(Term::variable("X"), Term::constant("a"))]);
        assert_eq!(s.apply(&Term::variable("X")), Term::constant("a"));
        assert_eq!(s.apply(&Term::variable("Y")), Term::variable("Y"));
        assert_eq!(s.apply(&Term::constant("b")), Term::constant("b"));
    }

    #[test]
    fn functional_terms_rewrite_argument_wise() {
        let s = Substitution::from_pairs([(Term::variable("X"), Term::constant("a"))]);
        let f = Term::functional(0, "z", vec![Term::variable("X"), Term::constant("c")]);
        let expect = Term::functional(0, "z", vec![Term::constant("a"), Term::constant("c")]);
        assert_eq!(s.apply(&f), expect);
    }

    #[test]
    fn direct_binding_beats_congruence() {
        let f = Term::functional(0, "z", vec![Term::variable("X")]);
        let s = Substitution::from_pairs([
            (f.clone(), Term::constant("hit")),
            (Term::variable("X"), Term::constant("a")),
        ]);
        assert_eq!(s.apply(&f), Term::constant("hit"));
    }

    #[test]
    fn composition_applies_left_then_right() {
        let s1 = Substitution::from_pairs([(Term::variable("X"), Term::variable("Y"))]);
        let s2 = Substitution::from_pairs([(Term::variable("Y"), Term::constant("a"))]);
        let c = s1.then(&s2);
        assert_eq!(c.apply(&Term::variable("X")), Term::constant("a"));
        assert_eq!(c.apply(&Term::variable("Y")), Term::constant("a"));
    }
}
