//! Existential rules and rulesets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::atom::Atom;
use crate::symbol::Symbol;
use crate::term::Term;

/// A rule `body -> exists(existentials) head`. Body and head are conjunctions
/// of atoms over variables and constants. Head variables that do not occur in
/// the body are existential; body variables that also occur in the head form
/// the frontier.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub id: usize,
    pub body: Vec<Atom>,
    pub head: Vec<Atom>,
    frontier: Vec<Symbol>,
    existentials: Vec<Symbol>,
}

impl Rule {
    pub fn new(id: usize, body: Vec<Atom>, head: Vec<Atom>) -> Rule {
        let body_vars: BTreeSet<&Symbol> = body.iter().flat_map(|a| a.variables()).collect();
        let mut frontier = Vec::new();
        let mut existentials = Vec::new();
        let mut seen = BTreeSet::new();
        // Frontier order follows first occurrence in the body.
        for a in &body {
            for v in a.variables() {
                if seen.insert(v.clone()) {
                    let in_head = head.iter().any(|h| h.variables().any(|hv| hv == v));
                    if in_head {
                        frontier.push(v.clone());
                    }
                }
            }
        }
        let mut seen_ex = BTreeSet::new();
        for a in &head {
            for v in a.variables() {
                if !body_vars.contains(v) && seen_ex.insert(v.clone()) {
                    existentials.push(v.clone());
                }
            }
        }
        Rule { id, body, head, frontier, existentials }
    }

    /// Body variables shared with the head, in body-occurrence order.
    pub fn frontier(&self) -> &[Symbol] {
        &self.frontier
    }

    /// Head-only variables, in head-occurrence order.
    pub fn existentials(&self) -> &[Symbol] {
        &self.existentials
    }

    pub fn is_datalog(&self) -> bool {
        self.existentials.is_empty()
    }

    /// Frontier-existential: every head atom carries at least one existential.
    pub fn is_fe(&self) -> bool {
        !self.existentials.is_empty()
            && self.head.iter().all(|a| {
                a.variables().any(|v| self.existentials.contains(v))
            })
    }

    pub fn body_variables(&self) -> BTreeSet<Symbol> {
        self.body.iter().flat_map(|a| a.variables().cloned()).collect()
    }

    pub fn head_variables(&self) -> BTreeSet<Symbol> {
        self.head.iter().flat_map(|a| a.variables().cloned()).collect()
    }

    pub fn constants(&self) -> BTreeSet<Symbol> {
        self.body
            .iter()
            .chain(self.head.iter())
            .flat_map(|a| a.args.iter())
            .filter_map(|t| match t {
                Term::Constant(c) => Some(c.clone()),
                _ => None,
            })
            .collect()
    }

    /// A copy of this rule with every variable prefixed so that two copies
    /// never share variables. The rule id is preserved.
    pub fn rename_apart(&self, tag: usize) -> Rule {
        let rename = |t: &Term| match t {
            Term::Variable(v) => Term::variable(format!("{}#{}", v, tag)),
            other => other.clone(),
        };
        let map_atoms = |atoms: &[Atom]| {
            atoms
                .iter()
                .map(|a| Atom::new(a.predicate.clone(), a.args.iter().map(rename).collect()))
                .collect()
        };
        Rule::new(self.id, map_atoms(&self.body), map_atoms(&self.head))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.body.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, " -> ")?;
        for (i, a) in self.head.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// A set of rules plus the predicate arities they use.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Ruleset {
    pub rules: Vec<Rule>,
    arities: BTreeMap<Symbol, usize>,
}

impl Ruleset {
    pub fn new(rules: Vec<Rule>) -> Ruleset {
        let mut arities = BTreeMap::new();
        for r in &rules {
            for a in r.body.iter().chain(r.head.iter()) {
                arities.entry(a.predicate.clone()).or_insert(a.arity());
            }
        }
        Ruleset { rules, arities }
    }

    pub fn arities(&self) -> &BTreeMap<Symbol, usize> {
        &self.arities
    }

    pub fn predicates(&self) -> impl Iterator<Item = &Symbol> {
        self.arities.keys()
    }

    pub fn is_datalog(&self) -> bool {
        self.rules.iter().all(Rule::is_datalog)
    }

    pub fn is_fe(&self) -> bool {
        self.rules.iter().all(Rule::is_fe)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Largest body size over the rules (0 for an empty ruleset).
    pub fn max_body_atoms(&self) -> usize {
        self.rules.iter().map(|r| r.body.len()).max().unwrap_or(0)
    }

    pub fn constants(&self) -> BTreeSet<Symbol> {
        self.rules.iter().flat_map(|r| r.constants()).collect()
    }
}
