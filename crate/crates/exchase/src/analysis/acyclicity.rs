//! Weak acyclicity over a predicate-position dependency graph.
//!
//! Nodes are predicate positions `(p, i)`. For each rule, a frontier
//! variable's body positions point at its head positions with normal edges.
//! Special edges run from **every** body position of **every** body variable
//! to every head position holding an existential variable: a new value's
//! identity depends on the whole trigger, and under the oblivious chase any
//! body variable picking up a new value re-fires the rule. A ruleset passes
//! when no cycle goes through a special edge, which is sufficient for all
//! chase variants here — including the oblivious one, where the textbook
//! frontier-only construction is not enough.

use std::collections::{BTreeMap, BTreeSet};

use crate::rule::Ruleset;
use crate::symbol::Symbol;
use crate::term::Term;

type Position = (Symbol, usize);

#[derive(Default)]
struct PositionGraph {
    normal: BTreeMap<Position, BTreeSet<Position>>,
    special: BTreeMap<Position, BTreeSet<Position>>,
}

fn positions_of(atoms: &[crate::atom::Atom], var: &Symbol) -> Vec<Position> {
    let mut out = Vec::new();
    for atom in atoms {
        for (i, t) in atom.args.iter().enumerate() {
            if matches!(t, Term::Variable(v) if v == var) {
                out.push((atom.predicate.clone(), i));
            }
        }
    }
    out
}

fn position_graph(rs: &Ruleset) -> PositionGraph {
    let mut g = PositionGraph::default();
    for rule in &rs.rules {
        let frontier: BTreeSet<&Symbol> = rule.frontier().iter().collect();
        let existentials: BTreeSet<&Symbol> = rule.existentials().iter().collect();

        let mut ex_positions: Vec<Position> = Vec::new();
        for atom in &rule.head {
            for (i, t) in atom.args.iter().enumerate() {
                if matches!(t, Term::Variable(v) if existentials.contains(v)) {
                    ex_positions.push((atom.predicate.clone(), i));
                }
            }
        }

        for var in rule.body_variables() {
            let body_positions = positions_of(&rule.body, &var);
            if frontier.contains(&var) {
                for hp in positions_of(&rule.head, &var) {
                    for bp in &body_positions {
                        g.normal.entry(bp.clone()).or_default().insert(hp.clone());
                    }
                }
            }
            for ep in &ex_positions {
                for bp in &body_positions {
                    g.special.entry(bp.clone()).or_default().insert(ep.clone());
                }
            }
        }
    }
    g
}

/// True when the position graph has no cycle containing a special edge.
pub fn weakly_acyclic(rs: &Ruleset) -> bool {
    let g = position_graph(rs);
    // A special edge u -> v lies on a cycle exactly when v reaches u.
    for (u, targets) in &g.special {
        for v in targets {
            if reaches(&g, v, u) {
                return false;
            }
        }
    }
    true
}

fn reaches(g: &PositionGraph, from: &Position, to: &Position) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack = vec![from.clone()];
    while let Some(p) = stack.pop() {
        if p == *to {
            return true;
        }
        if !seen.insert(p.clone()) {
            continue;
        }
        for next in [&g.normal, &g.special] {
            if let Some(succ) = next.get(&p) {
                stack.extend(succ.iter().cloned());
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_ruleset;

    fn rules(src: &str) -> Ruleset {
        parse_ruleset(src).expect("parses")
    }

    #[test]
    fn self_feeding_existential_position_is_rejected() {
        // y's body position (p,2) feeds the existential position (p,2): a
        // special self-loop. The oblivious chase indeed diverges here.
        let rs = rules("p(X,Y) -> p(X,Z).");
        assert!(!weakly_acyclic(&rs));
    }

    #[test]
    fn one_shot_existential_rule_is_accepted() {
        let rs = rules("p(X) -> q(X,Z).");
        assert!(weakly_acyclic(&rs));
    }

    #[test]
    fn datalog_has_no_special_edges() {
        let rs = rules("p(X,Y), p(Y,Z) -> p(X,Z). p(X,Y), p(W,Z) -> p(X,Z).");
        assert!(weakly_acyclic(&rs));
    }

    #[test]
    fn two_rule_feedback_through_an_existential_is_rejected() {
        let rs = rules("p(X) -> q(X,Z).\nq(X,Y) -> p(Y).");
        assert!(!weakly_acyclic(&rs));
    }

    #[test]
    fn chain_growing_head_is_rejected() {
        let rs = rules("p(X,X1), p(X1,X2), p(X2,Z) -> p(X,Y), p(Y,Z).");
        assert!(!weakly_acyclic(&rs));
    }
}
