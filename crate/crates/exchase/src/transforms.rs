//! Ruleset and instance transformations: datalog/fully-existential
//! decomposition, critical instance, the frontier-predicate split, the
//! fully-existential encoding with its inverse projection, and freezing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::atom::{Atom, Instance};
use crate::rule::{Rule, Ruleset};
use crate::subst::Substitution;
use crate::symbol::Symbol;
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformError {
    /// `fe_encode` requires a vocabulary free of `+`-suffixed predicates.
    NotPlusFree { predicate: Symbol },
    /// `fe_decode` requires every predicate to carry the `+` suffix.
    MixedVocabulary { predicate: Symbol },
    /// An encoded atom must have at least the trailing tag position.
    EmptyEncodedAtom { predicate: Symbol },
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::NotPlusFree { predicate } => {
                write!(f, "predicate `{predicate}` already ends with '+'; input must be plus-free")
            }
            TransformError::MixedVocabulary { predicate } => {
                write!(f, "predicate `{predicate}` lacks the '+' suffix; decode needs a fully encoded instance")
            }
            TransformError::EmptyEncodedAtom { predicate } => {
                write!(f, "encoded atom `{predicate}` has no argument positions to strip")
            }
        }
    }
}

impl std::error::Error for TransformError {}

/// Split of a ruleset into fully-existential rules and single-head datalog
/// rules. Every head atom of every source rule lands in exactly one output
/// rule, so the decomposition is logically equivalent to its source.
#[derive(Debug, Clone)]
pub struct DfDecomposition {
    pub fe_rules: Vec<Rule>,
    pub datalog_rules: Vec<Rule>,
    /// Output rule id -> source rule id.
    origin: BTreeMap<usize, usize>,
    /// Source rule id -> id of the fully-existential output rule, when any.
    fe_rule_of: BTreeMap<usize, usize>,
}

impl DfDecomposition {
    pub fn origin(&self) -> &BTreeMap<usize, usize> {
        &self.origin
    }

    pub fn fe_rule_of(&self) -> &BTreeMap<usize, usize> {
        &self.fe_rule_of
    }

    /// All output rules as one ruleset, ordered by output id.
    pub fn ruleset(&self) -> Ruleset {
        let mut rules: Vec<Rule> = self
            .fe_rules
            .iter()
            .chain(self.datalog_rules.iter())
            .cloned()
            .collect();
        rules.sort_by_key(|r| r.id);
        Ruleset::new(rules)
    }

    pub fn output_len(&self) -> usize {
        self.fe_rules.len() + self.datalog_rules.len()
    }
}

/// Decompose each rule `B -> H` into the fully-existential rule `B -> H_F`
/// (head atoms that contain an existential variable, omitted when there are
/// none) plus one single-head datalog rule `B -> h` per remaining head atom.
pub fn df_decompose(rs: &Ruleset) -> DfDecomposition {
    let mut fe_rules = Vec::new();
    let mut datalog_rules = Vec::new();
    let mut origin = BTreeMap::new();
    let mut fe_rule_of = BTreeMap::new();
    let mut next_id = 0;
    for rule in &rs.rules {
        let ex: BTreeSet<&Symbol> = rule.existentials().iter().collect();
        let (head_f, head_d): (Vec<Atom>, Vec<Atom>) = rule
            .head
            .iter()
            .cloned()
            .partition(|a| a.variables().any(|v| ex.contains(v)));
        if !head_f.is_empty() {
            let out = Rule::new(next_id, rule.body.clone(), head_f);
            origin.insert(next_id, rule.id);
            fe_rule_of.insert(rule.id, next_id);
            next_id += 1;
            fe_rules.push(out);
        }
        for atom in head_d {
            let out = Rule::new(next_id, rule.body.clone(), vec![atom]);
            origin.insert(next_id, rule.id);
            next_id += 1;
            datalog_rules.push(out);
        }
    }
    DfDecomposition { fe_rules, datalog_rules, origin, fe_rule_of }
}

/// The instance with one fact `p(a, …, a)` per predicate, over the single
/// constant `a`. Every instance over the same vocabulary maps into it.
pub fn critical_instance(arities: &BTreeMap<Symbol, usize>) -> Instance {
    critical_instance_with(arities, &BTreeSet::new())
}

/// As [`critical_instance`], but over the designated constant plus every
/// given rule constant: all atoms with arguments drawn from that domain.
/// Needed whenever the rules themselves mention constants, since a body
/// constant only matches itself.
pub fn critical_instance_with(
    arities: &BTreeMap<Symbol, usize>,
    constants: &BTreeSet<Symbol>,
) -> Instance {
    let mut domain: Vec<Term> = vec![Term::constant("a")];
    domain.extend(constants.iter().filter(|c| c.as_str() != "a").map(|c| Term::constant(c.clone())));
    let mut out = Instance::new();
    for (p, &n) in arities {
        let mut tuple = vec![0usize; n];
        loop {
            out.insert(Atom::new(p.clone(), tuple.iter().map(|&i| domain[i].clone()).collect()));
            let mut pos = n;
            while pos > 0 && tuple[pos - 1] + 1 == domain.len() {
                tuple[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            tuple[pos - 1] += 1;
        }
    }
    out
}

fn fresh_predicate(base: String, taken: &mut BTreeSet<Symbol>) -> Symbol {
    let mut candidate = Symbol::from(base.as_str());
    let mut suffix = 2;
    while taken.contains(&candidate) {
        candidate = Symbol::from(format!("{base}_{suffix}").as_str());
        suffix += 1;
    }
    taken.insert(candidate.clone());
    candidate
}

/// Replace every rule `B -> H` by the datalog rule `B -> p_r(fr)` and the
/// rule `p_r(fr) -> H`, where `p_r` is a fresh predicate over the frontier in
/// body-occurrence order. The output has exactly twice as many rules.
pub fn psi_transform(rs: &Ruleset) -> Ruleset {
    let mut taken: BTreeSet<Symbol> = rs.arities().keys().cloned().collect();
    let mut rules = Vec::with_capacity(rs.len() * 2);
    for rule in &rs.rules {
        let marker = fresh_predicate(format!("p_r{}", rule.id), &mut taken);
        let fr_args: Vec<Term> =
            rule.frontier().iter().map(|v| Term::variable(v.clone())).collect();
        let marker_atom = Atom::new(marker, fr_args);
        rules.push(Rule::new(rules.len(), rule.body.clone(), vec![marker_atom.clone()]));
        rules.push(Rule::new(rules.len(), vec![marker_atom], rule.head.clone()));
    }
    Ruleset::new(rules)
}

fn plus_name(p: &Symbol) -> Symbol {
    Symbol::from(format!("{p}+").as_str())
}

fn fresh_var(used: &BTreeSet<Symbol>, counter: &mut usize) -> Symbol {
    loop {
        *counter += 1;
        let candidate = Symbol::from(format!("Z{counter}").as_str());
        if !used.contains(&candidate) {
            return candidate;
        }
    }
}

/// Encode a ruleset and instance into a fully-existential vocabulary: every
/// atom `p(t̄)` becomes `p+(t̄, z)` with a fresh trailing term. Rule-head tags
/// are head-local variables (hence existential), rule-body tags are fresh
/// body variables, and instance tags are fresh labelled constants, so the
/// encoded ruleset consists of fully-existential rules only.
pub fn fe_encode(rs: &Ruleset, instance: &Instance) -> Result<(Ruleset, Instance), TransformError> {
    for p in rs.arities().keys().chain(instance.arities().keys()) {
        if p.as_str().ends_with('+') {
            return Err(TransformError::NotPlusFree { predicate: p.clone() });
        }
    }
    let mut rules = Vec::with_capacity(rs.len());
    for rule in &rs.rules {
        let used: BTreeSet<Symbol> =
            rule.body_variables().union(&rule.head_variables()).cloned().collect();
        let mut counter = 0;
        let mut tag_atoms = |atoms: &[Atom]| -> Vec<Atom> {
            atoms
                .iter()
                .map(|a| {
                    let mut args = a.args.clone();
                    args.push(Term::variable(fresh_var(&used, &mut counter)));
                    Atom::new(plus_name(&a.predicate), args)
                })
                .collect()
        };
        let body = tag_atoms(&rule.body);
        let head = tag_atoms(&rule.head);
        rules.push(Rule::new(rule.id, body, head));
    }
    // Labelled values for instance tags: fresh constants, kept clear of every
    // constant in the ruleset and the instance.
    let mut taken: BTreeSet<Symbol> = rs.constants();
    taken.extend(instance.adom().into_iter().filter_map(|t| match t {
        Term::Constant(c) => Some(c),
        _ => None,
    }));
    let mut counter = 0;
    let mut label = || loop {
        counter += 1;
        let candidate = Symbol::from(format!("z{counter}").as_str());
        if !taken.contains(&candidate) {
            return candidate;
        }
    };
    let encoded: Instance = instance
        .iter()
        .map(|a| {
            let mut args = a.args.clone();
            args.push(Term::constant(label()));
            Atom::new(plus_name(&a.predicate), args)
        })
        .collect();
    Ok((Ruleset::new(rules), encoded))
}

/// Project an encoded instance back: strip the trailing tag position and the
/// `+` suffix of every atom. Inverse of `fe_encode` on instances.
pub fn fe_decode(instance: &Instance) -> Result<Instance, TransformError> {
    let mut atoms = Vec::new();
    for atom in instance {
        let name = atom.predicate.as_str();
        let base = match name.strip_suffix('+') {
            Some(base) => base,
            None => {
                return Err(TransformError::MixedVocabulary { predicate: atom.predicate.clone() })
            }
        };
        if atom.args.is_empty() {
            return Err(TransformError::EmptyEncodedAtom { predicate: atom.predicate.clone() });
        }
        let args = atom.args[..atom.args.len() - 1].to_vec();
        atoms.push(Atom::new(Symbol::from(base), args));
    }
    Ok(atoms.into_iter().collect())
}

/// Replace every variable of the instance by a distinct fresh constant that
/// does not occur in it. Returns the ground instance and the bijection.
pub fn freeze(instance: &Instance) -> (Instance, BTreeMap<Symbol, Symbol>) {
    let constants: BTreeSet<Symbol> = instance
        .adom()
        .into_iter()
        .filter_map(|t| match t {
            Term::Constant(c) => Some(c),
            _ => None,
        })
        .collect();
    let vars: BTreeSet<Symbol> = instance
        .iter()
        .flat_map(|a| a.variables().cloned().collect::<Vec<_>>())
        .collect();
    let mut taken = constants;
    let mut bijection = BTreeMap::new();
    let mut subst = Substitution::new();
    for v in vars {
        let name = fresh_predicate(format!("c_{v}"), &mut taken);
        bijection.insert(v.clone(), name.clone());
        subst.bind(Term::variable(v), Term::constant(name));
    }
    let frozen = instance.iter().map(|a| subst.apply_atom(a)).collect();
    (frozen, bijection)
}
