//! Stable text rendering for terms, atoms, instances, rules and queries.
//!
//! Generated terms (nulls, functional terms) are displayed as `_n1`, `_n2`,
//! ... in the order they are registered with a [`NullNamer`]. Chase results
//! register their generated terms in creation order, so the same run always
//! prints the same names; a legend mapping each name back to the term's
//! structure is available for traces.

use std::collections::BTreeMap;

use crate::atom::{Atom, Instance};
use crate::query::Query;
use crate::rule::{Rule, Ruleset};
use crate::term::Term;

#[derive(Clone, Default, Debug)]
pub struct NullNamer {
    names: BTreeMap<Term, String>,
    order: Vec<Term>,
}

impl NullNamer {
    pub fn new() -> NullNamer {
        NullNamer::default()
    }

    /// Assigns the next `_n<k>` name to `t` if it is a generated term seen
    /// for the first time.
    pub fn register(&mut self, t: &Term) {
        if t.is_generated() && !self.names.contains_key(t) {
            let name = format!("_n{}", self.order.len() + 1);
            self.names.insert(t.clone(), name);
            self.order.push(t.clone());
        }
    }

    pub fn term(&mut self, t: &Term) -> String {
        match t {
            Term::Constant(s) | Term::Variable(s) => s.to_string(),
            other => {
                self.register(other);
                self.names[other].clone()
            }
        }
    }

    pub fn atom(&mut self, a: &Atom) -> String {
        let args: Vec<String> = a.args.iter().map(|t| self.term(t)).collect();
        format!("{}({})", a.predicate, args.join(","))
    }

    /// Rendered atoms of the instance, sorted for stable output.
    pub fn instance(&mut self, i: &Instance) -> Vec<String> {
        // Register in instance order first so naming does not depend on the
        // final string sort.
        for a in i {
            for t in &a.args {
                self.register_deep(t);
            }
        }
        let mut out: Vec<String> = i.iter().map(|a| self.atom(a)).collect();
        out.sort();
        out
    }

    fn register_deep(&mut self, t: &Term) {
        match t {
            Term::Null(n) => {
                for (_, inner) in &n.mapping {
                    self.register_deep(inner);
                }
                self.register(t);
            }
            Term::Functional(f) => {
                for inner in &f.args {
                    self.register_deep(inner);
                }
                self.register(t);
            }
            _ => {}
        }
    }

    /// `(name, structure)` pairs in naming order, e.g.
    /// `("_n1", "z[r0::Z](Y->b)")`.
    pub fn legend(&mut self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for t in self.order.clone() {
            let name = self.names[&t].clone();
            out.push((name, self.describe(&t)));
        }
        out
    }

    fn describe(&mut self, t: &Term) -> String {
        match t {
            Term::Null(n) => {
                let mapping: Vec<String> = n
                    .mapping
                    .iter()
                    .map(|(v, img)| format!("{v}->{}", self.term(img)))
                    .collect();
                format!("z[r{}::{}]({})", n.rule, n.var, mapping.join(","))
            }
            Term::Functional(f) => {
                let args: Vec<String> = f.args.iter().map(|a| self.term(a)).collect();
                format!("f_r{}_{}({})", f.rule, f.var, args.join(","))
            }
            other => self.term(other),
        }
    }
}

/// One `fact.` statement per atom, sorted, newline-terminated.
pub fn render_instance(i: &Instance, namer: &mut NullNamer) -> String {
    let mut out = String::new();
    for line in namer.instance(i) {
        out.push_str(&line);
        out.push_str(".\n");
    }
    out
}

pub fn render_rule(r: &Rule) -> String {
    format!("{r}.")
}

pub fn render_ruleset(rs: &Ruleset) -> String {
    let mut out = String::new();
    for r in &rs.rules {
        out.push_str(&render_rule(r));
        out.push('\n');
    }
    out
}

pub fn render_query(q: &Query) -> String {
    format!("{q}.")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_instance, parse_program, parse_ruleset};

    #[test]
    fn instance_rendering_roundtrips_through_the_parser() {
        let src = "p(a,b).\nq(b).\nr().\n";
        let inst = parse_instance(src).unwrap();
        let mut namer = NullNamer::new();
        let printed = render_instance(&inst, &mut namer);
        assert_eq!(parse_instance(&printed).unwrap(), inst);
    }

    #[test]
    fn ruleset_rendering_roundtrips_through_the_parser() {
        let src = "p(X,Y) -> r(Z,Y).\np(X,Y), p(Y,W) -> p(X,W).\n";
        let rs = parse_ruleset(src).unwrap();
        let printed = render_ruleset(&rs);
        let back = parse_ruleset(&printed).unwrap();
        assert_eq!(back.rules.len(), 2);
        assert_eq!(printed, render_ruleset(&back));
    }

    #[test]
    fn query_rendering_roundtrips_through_the_parser() {
        let prog = parse_program("?(X,c) :- p(X,Y), q(Y,c).").unwrap();
        let printed = render_query(&prog.queries[0]);
        let back = parse_program(&printed).unwrap();
        assert_eq!(back.queries[0], prog.queries[0]);
    }

    #[test]
    fn generated_terms_get_stable_names() {
        let n1 = Term::null(
            crate::term::NullKind::SemiOblivious,
            0,
            "Z",
            vec![("Y".into(), Term::constant("b"))],
        );
        let n2 = Term::null(
            crate::term::NullKind::SemiOblivious,
            1,
            "Z",
            vec![("Y".into(), n1.clone())],
        );
        let inst = Instance::from_atoms([
            Atom::new("s", vec![Term::constant("b"), n1.clone()]),
            Atom::new("t", vec![n2.clone()]),
        ]);
        let mut namer = NullNamer::new();
        namer.register(&n1);
        namer.register(&n2);
        let lines = namer.instance(&inst);
        assert_eq!(lines, vec!["s(b,_n1)".to_string(), "t(_n2)".to_string()]);
        let legend = namer.legend();
        assert_eq!(legend[0].0, "_n1");
        assert!(legend[1].1.contains("_n1"), "nested null named in legend: {}", legend[1].1);
    }
}
