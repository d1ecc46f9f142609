//! Breadth-first chase engines for existential rules, with depth and rank
//! analytics, ruleset transformations, query rewriting and boundedness
//! checks.
//!
//! The building blocks are plain first-order atoms over constants and
//! variables ([`atom`], [`term`], [`rule`]); the [`chase`] module runs the
//! oblivious, semi-oblivious and skolem variants round by round and records
//! where every fact and generated term first appeared and how deep it is.
//! On top of that sit ruleset transformations ([`transforms`]), piece-based
//! query rewriting ([`rewrite`]) and the termination / boundedness analyses
//! ([`analysis`]).

pub mod analysis;
pub mod atom;
pub mod chase;
pub mod homomorphism;
pub mod parser;
pub mod printer;
pub mod query;
pub mod rewrite;
pub mod rule;
pub mod subst;
pub mod symbol;
pub mod term;
pub mod transforms;
