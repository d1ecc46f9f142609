//! Piece unifiers: unification of a subset of a query with a subset of a rule
//! head, respecting the constraints on existential variables, and the
//! construction of the corresponding one-step rewritings.

use std::collections::{BTreeMap, BTreeSet};

use crate::atom::Atom;
use crate::query::Query;
use crate::rule::Rule;
use crate::symbol::Symbol;
use crate::term::Term;

/// Signals that an enumeration exceeded its work budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Exhausted;

/// Element of the unification universe. Query terms keep their identity while
/// rule variables carry the id of the rule copy they belong to, which renames
/// every copy apart from the query and from the other copies.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum UTerm {
    Const(Symbol),
    QVar(Symbol),
    RVar(usize, Symbol),
}

fn query_uterm(t: &Term) -> UTerm {
    match t {
        Term::Constant(c) => UTerm::Const(c.clone()),
        Term::Variable(v) => UTerm::QVar(v.clone()),
        other => panic!("query term {other} is neither variable nor constant"),
    }
}

fn rule_uterm(copy: usize, t: &Term) -> UTerm {
    match t {
        Term::Constant(c) => UTerm::Const(c.clone()),
        Term::Variable(v) => UTerm::RVar(copy, v.clone()),
        other => panic!("rule term {other} is neither variable nor constant"),
    }
}

#[derive(Default)]
struct UnionFind {
    parent: BTreeMap<UTerm, UTerm>,
}

impl UnionFind {
    fn find(&mut self, t: &UTerm) -> UTerm {
        match self.parent.get(t) {
            None => t.clone(),
            Some(p) if p == t => p.clone(),
            Some(p) => {
                let p = p.clone();
                let root = self.find(&p);
                self.parent.insert(t.clone(), root.clone());
                root
            }
        }
    }

    fn union(&mut self, a: &UTerm, b: &UTerm) {
        let ra = self.find(a);
        let rb = self.find(b);
        self.parent.entry(ra.clone()).or_insert_with(|| ra.clone());
        self.parent.entry(rb.clone()).or_insert_with(|| rb.clone());
        if ra != rb {
            // Smaller root wins, keeping the forest deterministic.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(hi, lo);
        }
    }

    fn classes(&mut self) -> Vec<Vec<UTerm>> {
        let keys: Vec<UTerm> = self.parent.keys().cloned().collect();
        let mut by_root: BTreeMap<UTerm, Vec<UTerm>> = BTreeMap::new();
        for k in keys {
            let root = self.find(&k);
            by_root.entry(root).or_default().push(k);
        }
        by_root.into_values().collect()
    }
}

/// A unification of a nonempty subset of a query's atoms (the piece) with
/// atoms of one rule's head. `head_map` records which query atom is unified
/// with which head atom, by index.
#[derive(Clone, Debug)]
pub struct PieceUnifier<'a> {
    pub rule: &'a Rule,
    pub piece: BTreeSet<usize>,
    pub head_map: Vec<(usize, usize)>,
}

/// Builds the merged term partition of a selection of unifiers, where the
/// `i`-th selected unifier works on its own copy `i` of its rule. Returns the
/// classes when the partition satisfies every piece constraint: at most one
/// constant per class, and a class containing an existential variable holds
/// exactly that one rule variable — no constant, no second rule variable, no
/// answer variable, and no query variable that occurs outside the piece of
/// the copy owning the existential. A produced null can only equal itself,
/// so anything else in its class would promise an impossible match.
fn unify_selection(q: &Query, sel: &[&PieceUnifier<'_>]) -> Option<Vec<Vec<UTerm>>> {
    let mut uf = UnionFind::default();
    for (copy, pu) in sel.iter().enumerate() {
        for &(qi, hi) in &pu.head_map {
            let qa = &q.atoms[qi];
            let ha = &pu.rule.head[hi];
            debug_assert_eq!(qa.args.len(), ha.args.len());
            for (qt, ht) in qa.args.iter().zip(&ha.args) {
                uf.union(&query_uterm(qt), &rule_uterm(copy, ht));
            }
        }
    }
    let classes = uf.classes();

    let answer_vars: BTreeSet<&Symbol> = q
        .answers
        .iter()
        .filter_map(|t| match t {
            Term::Variable(v) => Some(v),
            _ => None,
        })
        .collect();
    // Per copy: query variables occurring outside that copy's piece.
    let external: Vec<BTreeSet<&Symbol>> = sel
        .iter()
        .map(|pu| {
            q.atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| !pu.piece.contains(i))
                .flat_map(|(_, a)| a.variables())
                .collect()
        })
        .collect();

    for class in &classes {
        let constants = class.iter().filter(|t| matches!(t, UTerm::Const(_))).count();
        if constants > 1 {
            return None;
        }
        let mut rule_vars = 0;
        let mut existential: Option<usize> = None;
        for member in class {
            if let UTerm::RVar(copy, v) = member {
                rule_vars += 1;
                if sel[*copy].rule.existentials().contains(v) {
                    existential = Some(*copy);
                }
            }
        }
        if let Some(copy) = existential {
            if rule_vars > 1 || constants > 0 {
                return None;
            }
            for member in class {
                if let UTerm::QVar(u) = member {
                    if answer_vars.contains(u) || external[copy].contains(u) {
                        return None;
                    }
                }
            }
        }
    }
    Some(classes)
}

/// The rewriting induced by a selection of compatible unifiers on pairwise
/// disjoint pieces: the representative map applied to the query minus all
/// pieces, together with the instantiated bodies of every selected copy.
struct FreshVars {
    counter: usize,
    taken: BTreeSet<Term>,
}

impl FreshVars {
    fn next(&mut self) -> Term {
        loop {
            self.counter += 1;
            let candidate = Term::variable(format!("F{}", self.counter));
            if !self.taken.contains(&candidate) {
                return candidate;
            }
        }
    }
}

fn resolve(rep: &mut BTreeMap<UTerm, Term>, fresh: &mut FreshVars, ut: UTerm) -> Term {
    if let Some(t) = rep.get(&ut) {
        return t.clone();
    }
    let t = match &ut {
        UTerm::Const(c) => Term::constant(c.clone()),
        UTerm::QVar(v) => Term::variable(v.clone()),
        UTerm::RVar(_, _) => fresh.next(),
    };
    rep.insert(ut, t.clone());
    t
}

fn rewriting_of(q: &Query, sel: &[&PieceUnifier<'_>], classes: Vec<Vec<UTerm>>) -> Option<Query> {
    let mut answer_rank: BTreeMap<&Symbol, usize> = BTreeMap::new();
    for (i, t) in q.answers.iter().enumerate() {
        if let Term::Variable(v) = t {
            answer_rank.entry(v).or_insert(i);
        }
    }
    let mut fresh =
        FreshVars { counter: 0, taken: q.variables().into_iter().collect() };

    // Class representatives: a constant beats an answer variable (earliest
    // answer position first), which beats the smallest plain query variable;
    // classes without query-side members get a fresh variable.
    let mut rep: BTreeMap<UTerm, Term> = BTreeMap::new();
    for class in classes {
        let chosen = if let Some(c) = class.iter().find_map(|t| match t {
            UTerm::Const(c) => Some(c),
            _ => None,
        }) {
            Term::constant(c.clone())
        } else {
            let qvars: Vec<&Symbol> = class
                .iter()
                .filter_map(|t| match t {
                    UTerm::QVar(v) => Some(v),
                    _ => None,
                })
                .collect();
            let answer = qvars
                .iter()
                .filter(|v| answer_rank.contains_key(**v))
                .min_by_key(|v| answer_rank[**v]);
            match answer.or_else(|| qvars.iter().min()) {
                Some(v) => Term::variable((*v).clone()),
                None => fresh.next(),
            }
        };
        for member in class {
            rep.insert(member, chosen.clone());
        }
    }

    let pieced: BTreeSet<usize> = sel.iter().flat_map(|pu| pu.piece.iter().copied()).collect();
    let mut atoms: Vec<Atom> = Vec::new();
    let mut seen: BTreeSet<Atom> = BTreeSet::new();
    let mut push = |atom: Atom, atoms: &mut Vec<Atom>| {
        if seen.insert(atom.clone()) {
            atoms.push(atom);
        }
    };
    for (i, a) in q.atoms.iter().enumerate() {
        if pieced.contains(&i) {
            continue;
        }
        let args =
            a.args.iter().map(|t| resolve(&mut rep, &mut fresh, query_uterm(t))).collect();
        push(Atom::new(a.predicate.clone(), args), &mut atoms);
    }
    for (copy, pu) in sel.iter().enumerate() {
        for a in &pu.rule.body {
            let args =
                a.args.iter().map(|t| resolve(&mut rep, &mut fresh, rule_uterm(copy, t))).collect();
            push(Atom::new(a.predicate.clone(), args), &mut atoms);
        }
    }
    if atoms.is_empty() {
        return None;
    }
    let answers =
        q.answers.iter().map(|t| resolve(&mut rep, &mut fresh, query_uterm(t))).collect();
    Some(Query::new(answers, atoms))
}

/// All piece unifiers of `q` with the head of `rule`, in a deterministic
/// order. Rule variables are renamed apart internally, so the rule can share
/// variable names with the query.
pub fn piece_unifiers<'a>(q: &Query, rule: &'a Rule) -> Vec<PieceUnifier<'a>> {
    let mut ticks = 0;
    enumerate_single(q, rule, usize::MAX, &mut ticks).expect("unbounded enumeration")
}

/// The rewriting of a selection of unifiers on pairwise disjoint pieces, or
/// `None` when pieces overlap or the merged partition violates a constraint.
pub fn selection_rewriting(q: &Query, sel: &[&PieceUnifier<'_>]) -> Option<Query> {
    let mut used = BTreeSet::new();
    for pu in sel {
        for &i in &pu.piece {
            if !used.insert(i) {
                return None;
            }
        }
    }
    let classes = unify_selection(q, sel)?;
    rewriting_of(q, sel, classes)
}

pub(crate) fn enumerate_single<'a>(
    q: &Query,
    rule: &'a Rule,
    max_work: usize,
    ticks: &mut usize,
) -> Result<Vec<PieceUnifier<'a>>, Exhausted> {
    let candidates: Vec<Vec<usize>> = q
        .atoms
        .iter()
        .map(|qa| {
            rule.head
                .iter()
                .enumerate()
                .filter(|(_, ha)| ha.predicate == qa.predicate && ha.args.len() == qa.args.len())
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut assignment: Vec<(usize, usize)> = Vec::new();
    fn rec<'a>(
        i: usize,
        q: &Query,
        rule: &'a Rule,
        candidates: &[Vec<usize>],
        assignment: &mut Vec<(usize, usize)>,
        out: &mut Vec<PieceUnifier<'a>>,
        max_work: usize,
        ticks: &mut usize,
    ) -> Result<(), Exhausted> {
        *ticks += 1;
        if *ticks > max_work {
            return Err(Exhausted);
        }
        if i == q.atoms.len() {
            if !assignment.is_empty() {
                let pu = PieceUnifier {
                    rule,
                    piece: assignment.iter().map(|&(qi, _)| qi).collect(),
                    head_map: assignment.clone(),
                };
                if unify_selection(q, &[&pu]).is_some() {
                    out.push(pu);
                }
            }
            return Ok(());
        }
        rec(i + 1, q, rule, candidates, assignment, out, max_work, ticks)?;
        for &j in &candidates[i] {
            assignment.push((i, j));
            rec(i + 1, q, rule, candidates, assignment, out, max_work, ticks)?;
            assignment.pop();
        }
        Ok(())
    }
    rec(0, q, rule, &candidates, &mut assignment, &mut out, max_work, ticks)?;
    Ok(out)
}

/// Every rewriting of `q` by an aggregated piece unifier over the ruleset:
/// each union of pairwise-compatible single-rule unifiers (singletons
/// included) on pairwise disjoint pieces, with a fresh copy of its rule per
/// selected unifier.
pub(crate) fn aggregated_rewritings(
    q: &Query,
    rules: &[Rule],
    max_work: usize,
    ticks: &mut usize,
) -> Result<Vec<Query>, Exhausted> {
    let mut singles: Vec<PieceUnifier<'_>> = Vec::new();
    for rule in rules {
        singles.extend(enumerate_single(q, rule, max_work, ticks)?);
    }
    let mut out = Vec::new();
    let mut selection: Vec<&PieceUnifier<'_>> = Vec::new();
    let mut used: BTreeSet<usize> = BTreeSet::new();
    fn rec<'s, 'r>(
        start: usize,
        q: &Query,
        singles: &'s [PieceUnifier<'r>],
        selection: &mut Vec<&'s PieceUnifier<'r>>,
        used: &mut BTreeSet<usize>,
        out: &mut Vec<Query>,
        max_work: usize,
        ticks: &mut usize,
    ) -> Result<(), Exhausted> {
        for i in start..singles.len() {
            let pu = &singles[i];
            if pu.piece.iter().any(|a| used.contains(a)) {
                continue;
            }
            *ticks += 1;
            if *ticks > max_work {
                return Err(Exhausted);
            }
            selection.push(pu);
            used.extend(pu.piece.iter().copied());
            // Invalid merges stay invalid under further merging, so an
            // incompatible selection prunes its whole subtree.
            if let Some(classes) = unify_selection(q, selection) {
                if let Some(rw) = rewriting_of(q, selection, classes) {
                    out.push(rw);
                }
                rec(i + 1, q, singles, selection, used, out, max_work, ticks)?;
            }
            selection.pop();
            for a in &pu.piece {
                used.remove(a);
            }
        }
        Ok(())
    }
    rec(0, q, &singles, &mut selection, &mut used, &mut out, max_work, ticks)?;
    Ok(out)
}
