//! Terms: constants, variables, labeled nulls and functional (Skolem) terms.
//!
//! Null identity is structural. An oblivious null is named by its generating
//! rule, existential variable and the full body homomorphism; a semi-oblivious
//! null by the homomorphism restricted to the rule frontier. Two chase runs on
//! different instances therefore agree on null names whenever the generating
//! triggers agree, which is what the embedding-extension machinery relies on.

use std::fmt;
use std::sync::Arc;

use crate::symbol::Symbol;

/// How a null was named: by the full trigger homomorphism or by its
/// restriction to the rule frontier.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum NullKind {
    Oblivious,
    SemiOblivious,
}

/// A labeled null `z_(rule, mapping)`. `mapping` is kept sorted by variable
/// name so equality and ordering are canonical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NullTerm {
    pub kind: NullKind,
    pub rule: usize,
    pub var: Symbol,
    pub mapping: Vec<(Symbol, Term)>,
}

/// A Skolem term `f_rule_var(args)`; args follow the canonical frontier order
/// of the rule (first occurrence in the body).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FunctionalTerm {
    pub rule: usize,
    pub var: Symbol,
    pub args: Vec<Term>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Constant(Symbol),
    Variable(Symbol),
    Null(Arc<NullTerm>),
    Functional(Arc<FunctionalTerm>),
}

impl Term {
    pub fn constant(name: impl Into<Symbol>) -> Term {
        Term::Constant(name.into())
    }

    pub fn variable(name: impl Into<Symbol>) -> Term {
        Term::Variable(name.into())
    }

    pub fn null(
        kind: NullKind,
        rule: usize,
        var: impl Into<Symbol>,
        mut mapping: Vec<(Symbol, Term)>,
    ) -> Term {
        mapping.sort_by(|a, b| a.0.cmp(&b.0));
        Term::Null(Arc::new(NullTerm { kind, rule, var: var.into(), mapping }))
    }

    pub fn functional(rule: usize, var: impl Into<Symbol>, args: Vec<Term>) -> Term {
        Term::Functional(Arc::new(FunctionalTerm { rule, var: var.into(), args }))
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Term::Constant(_))
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    /// True for terms minted by a chase step (nulls and Skolem terms).
    pub fn is_generated(&self) -> bool {
        matches!(self, Term::Null(_) | Term::Functional(_))
    }

    /// Nesting depth of a Skolem term: constants and variables are 0,
    /// `f()` is 1, `f(g(a))` is 2.
    pub fn functional_nesting(&self) -> usize {
        match self {
            Term::Functional(f) => {
                1 + f.args.iter().map(Term::functional_nesting).max().unwrap_or(0)
            }
            _ => 0,
        }
    }
}

impl fmt::Display for Term {
    /// Debug-oriented rendering. User-facing output goes through the printer,
    /// which assigns `_n<k>` names to nulls per document.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Constant(s) | Term::Variable(s) => write!(f, "{s}"),
            Term::Null(n) => {
                write!(f, "z[r{}::{}](", n.rule + 1, n.var)?;
                for (i, (v, t)) in n.mapping.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}->{t}")?;
                }
                write!(f, ")")
            }
            Term::Functional(t) => {
                write!(f, "f_r{}_{}(", t.rule + 1, t.var)?;
                for (i, a) in t.args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}
