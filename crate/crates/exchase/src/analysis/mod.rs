//! Termination and boundedness analyses.
//!
//! Everything here reduces questions about *all* instances to finitely many
//! chase runs: the critical instance (one constant per position, plus every
//! rule constant) decides termination, enumerating instances of at most
//! `b^(k+1)` atoms decides k-boundedness, and a saturating query rewriting
//! turns a termination certificate into a uniform rank bound.
//!
//! Boundedness itself is undecidable, so several checks return three-valued
//! [`Verdict`]s: a `No` always carries a re-checkable witness, a `Yes` for a
//! semi-decision carries its certificate, and exhausted budgets surface as
//! `Unknown` rather than being rounded to an answer.

mod acyclicity;
mod enumerate;

pub use acyclicity::weakly_acyclic;
pub use enumerate::{default_pool, enumerate_instances, Infeasible};

use std::collections::BTreeMap;
use std::fmt;

use crate::atom::{Atom, Instance};
use crate::chase::{chase, ChaseOptions, ChaseVariant};
use crate::rewrite::{estimate_k_af, estimate_k_fo, KEstimate, RewriteBudget};
use crate::rule::Ruleset;
use crate::symbol::Symbol;
use crate::term::Term;
use crate::transforms::critical_instance_with;

/// Atom cap for critical-instance chases. Critical instances are tiny, and a
/// generated term embeds the terms it was built from, so a diverging run gets
/// expensive quickly; growth past this cap is treated as budget exhaustion
/// (never as termination).
const CRITICAL_ATOM_CAP: usize = 5_000;
/// Cap on enumerated body matches for critical-instance chases. Dense rounds
/// over the star instance admit quadratically more matches than atoms, and
/// every round re-walks them all; past this many the run is abandoned as
/// inconclusive instead of burning minutes and memory.
const CRITICAL_WORK_CAP: usize = 500_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Yes,
    No,
    Unknown,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Yes => "yes",
            Status::No => "no",
            Status::Unknown => "unknown",
        }
    }
}

/// Evidence attached to a [`Verdict`].
#[derive(Clone, Debug)]
pub enum Witness {
    /// A failing input instance, one offending fact, and the round that
    /// first produced it.
    Instance { instance: Instance, fact: Atom, rank: usize },
    /// Rank at which the critical-instance chase reached a fixpoint.
    CriticalRank(usize),
    /// A proven bound on the chase rank over all instances.
    RankBound(usize),
    /// Union sizes per rewriting step, for estimates that ran out of budget.
    GrowthTrace(Vec<usize>),
}

/// Outcome of a decision or semi-decision procedure.
///
/// `No` verdicts carry a witness that can be re-checked independently;
/// `Yes` verdicts of semi-decisions carry their terminating certificate.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    /// Which criterion produced the verdict, in plain words.
    pub rationale: String,
    /// Work spent: chase rounds, instances checked, or rewriting steps,
    /// depending on the operation.
    pub budget: usize,
    pub witness: Option<Witness>,
    /// Component verdicts of composite analyses.
    pub parts: Vec<(String, Verdict)>,
}

impl Verdict {
    fn of(status: Status, rationale: impl Into<String>) -> Verdict {
        Verdict {
            status,
            rationale: rationale.into(),
            budget: 0,
            witness: None,
            parts: Vec::new(),
        }
    }

    fn yes(rationale: impl Into<String>) -> Verdict {
        Verdict::of(Status::Yes, rationale)
    }

    fn no(rationale: impl Into<String>) -> Verdict {
        Verdict::of(Status::No, rationale)
    }

    fn unknown(rationale: impl Into<String>) -> Verdict {
        Verdict::of(Status::Unknown, rationale)
    }

    fn witness(mut self, witness: Witness) -> Verdict {
        self.witness = Some(witness);
        self
    }

    fn budget(mut self, budget: usize) -> Verdict {
        self.budget = budget;
        self
    }

    fn part(mut self, name: impl Into<String>, verdict: Verdict) -> Verdict {
        self.parts.push((name.into(), verdict));
        self
    }
}

/// Syntactic profile of a ruleset. Recomputed on every call, never cached.
#[derive(Clone, Debug)]
pub struct RulesetStats {
    /// Largest number of body atoms in any rule.
    pub max_body_atoms: usize,
    pub arities: BTreeMap<Symbol, usize>,
    pub is_datalog: bool,
    /// Every head atom introduces at least one existential variable.
    pub is_fe: bool,
    /// Every rule body is a single atom.
    pub is_linear: bool,
    /// Every rule has a body atom containing all of its body variables.
    pub is_guarded: bool,
    pub weakly_acyclic: bool,
}

pub fn detect_classes(rs: &Ruleset) -> RulesetStats {
    let is_guarded = rs.rules.iter().all(|r| {
        let vars = r.body_variables();
        r.body
            .iter()
            .any(|a| vars.iter().all(|v| a.args.contains(&Term::variable(v.clone()))))
    });
    RulesetStats {
        max_body_atoms: rs.max_body_atoms(),
        arities: rs.arities().clone(),
        is_datalog: rs.is_datalog(),
        is_fe: rs.is_fe(),
        is_linear: rs.rules.iter().all(|r| r.body.len() == 1),
        is_guarded,
        weakly_acyclic: weakly_acyclic(rs),
    }
}

/// Does the chase terminate on **all** instances?
///
/// Weak acyclicity is a sufficient condition and short-circuits to `Yes`.
/// Otherwise the answer is read off the critical instance: the variant chase
/// terminates everywhere exactly when it terminates there, so a fixpoint
/// within `fuel` rounds certifies `Yes` and an exhausted budget leaves the
/// question `Unknown`.
pub fn ct_check(rs: &Ruleset, variant: ChaseVariant, fuel: usize) -> Verdict {
    if weakly_acyclic(rs) {
        return Verdict::yes(
            "weakly acyclic: every position feeding an existential is filled at bounded depth, \
             so each chase variant terminates on every instance",
        );
    }
    let critical = critical_instance_with(rs.arities(), &rs.constants());
    let opts = ChaseOptions::new(variant)
        .with_rounds(fuel)
        .with_atom_cap(CRITICAL_ATOM_CAP)
        .with_work_cap(CRITICAL_WORK_CAP)
        .with_trigger_log(false);
    let run = chase(rs, &critical, opts);
    if run.outcome.is_terminated() {
        Verdict::yes(format!(
            "{} chase of the critical instance reached a fixpoint",
            variant.label()
        ))
        .witness(Witness::CriticalRank(run.rank()))
        .budget(run.rank())
    } else {
        Verdict::unknown(format!(
            "critical-instance {} chase exceeded its budget while still productive",
            variant.label()
        ))
        .budget(run.rounds.len() - 1)
    }
}

/// Depth of the critical-instance chase: the largest round that introduced a
/// new term (oblivious) or the largest frontier depth of a generated term
/// (semi-oblivious and skolem). `None` when the chase is still productive
/// after `fuel` rounds.
pub fn depth_bound(rs: &Ruleset, variant: ChaseVariant, fuel: usize) -> Option<usize> {
    let critical = critical_instance_with(rs.arities(), &rs.constants());
    let opts = ChaseOptions::new(variant)
        .with_rounds(fuel)
        .with_atom_cap(CRITICAL_ATOM_CAP)
        .with_work_cap(CRITICAL_WORK_CAP)
        .with_trigger_log(false);
    let run = chase(rs, &critical, opts);
    if !run.outcome.is_terminated() {
        return None;
    }
    Some(match variant {
        ChaseVariant::Oblivious => run.term_rank.values().copied().max().unwrap_or(0),
        _ => run.max_fr_depth(),
    })
}

/// Is the chase rank at most `k` on **every** instance?
///
/// It suffices to test instances of at most `b^(k+1)` atoms, `b` the largest
/// body size: any deeper derivation already has a preimage that small, and
/// relabeling the instance relabels the derivation, so ground representatives
/// up to isomorphism cover everything. Each representative is chased for
/// `k + 1` rounds; a productive round `k + 1` refutes the bound and the
/// canonically smallest such representative is reported, together with a fact
/// it derives at that round.
///
/// `threads` workers split the representatives; the verdict and witness do
/// not depend on the split.
pub fn k_bounded(
    rs: &Ruleset,
    k: usize,
    variant: ChaseVariant,
    ceiling: u128,
    threads: usize,
) -> Result<Verdict, Infeasible> {
    let b = rs.max_body_atoms();
    let bound = (b as u128).saturating_pow(k as u32 + 1);
    if bound > usize::MAX as u128 {
        return Err(Infeasible { estimate: u128::MAX });
    }
    let max_atoms = bound as usize;
    let instances = enumerate_instances(rs.arities(), max_atoms, &rs.constants(), ceiling)?;
    let total = instances.len();
    let hits = probe_all(rs, &instances, k, variant, threads);

    if let Some((idx, fact)) = hits
        .iter()
        .find_map(|(idx, fact)| fact.as_ref().map(|f| (*idx, f.clone())))
    {
        return Ok(Verdict::no(format!(
            "an instance with at most {max_atoms} atoms is still productive at round {}",
            k + 1
        ))
        .witness(Witness::Instance { instance: instances[idx].clone(), fact, rank: k + 1 })
        .budget(total));
    }
    if !hits.is_empty() {
        return Ok(Verdict::unknown(
            "a chase run overflowed the atom cap before finishing its rounds",
        )
        .budget(total));
    }
    Ok(Verdict::yes(format!(
        "all {total} instances with at most {max_atoms} atoms (up to renaming) are quiescent by round {}",
        k + 1
    ))
    .witness(Witness::RankBound(k))
    .budget(total))
}

/// Chases every representative for `k + 1` rounds and reports the ones that
/// kept producing, sorted by enumeration index. The attached fact is the
/// smallest one first derived at round `k + 1`; it is absent only when the
/// run aborted on the atom cap before reaching that round.
fn probe_all(
    rs: &Ruleset,
    instances: &[Instance],
    k: usize,
    variant: ChaseVariant,
    threads: usize,
) -> Vec<(usize, Option<Atom>)> {
    let stride = threads.max(1);
    let worker = |start: usize| {
        let mut hits = Vec::new();
        let mut idx = start;
        while idx < instances.len() {
            let run = chase(
                rs,
                &instances[idx],
                ChaseOptions::new(variant).with_rounds(k + 1).with_trigger_log(false),
            );
            if !run.outcome.is_terminated() {
                let fact = run
                    .fact_rank
                    .iter()
                    .find(|&(_, &r)| r == k + 1)
                    .map(|(a, _)| a.clone());
                hits.push((idx, fact));
            }
            idx += stride;
        }
        hits
    };
    if stride == 1 {
        return worker(0);
    }
    let mut hits: Vec<(usize, Option<Atom>)> = std::thread::scope(|scope| {
        let worker = &worker;
        let handles: Vec<_> = (0..stride)
            .map(|t| scope.spawn(move || worker(t)))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("chase worker panicked"))
            .collect()
    });
    hits.sort_by_key(|(idx, _)| *idx);
    hits
}

/// Error returned by [`k_bounded_fe_oblivious`] on rulesets with a
/// datalog head atom.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct NotFullyExistential;

impl fmt::Display for NotFullyExistential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ruleset is not fully existential; use the instance-enumerating k-boundedness check"
        )
    }
}

impl std::error::Error for NotFullyExistential {}

/// k-boundedness for the oblivious chase of a fully existential ruleset,
/// decided on the critical instance alone.
///
/// When every head atom mints a fresh term, any chase of any instance embeds
/// into the critical-instance chase rank for rank, so a productive round
/// `k + 1` there refutes k-boundedness everywhere and a fixpoint certifies it.
pub fn k_bounded_fe_oblivious(rs: &Ruleset, k: usize) -> Result<Verdict, NotFullyExistential> {
    if !rs.is_fe() {
        return Err(NotFullyExistential);
    }
    let critical = critical_instance_with(rs.arities(), &rs.constants());
    let run = chase(
        rs,
        &critical,
        ChaseOptions::new(ChaseVariant::Oblivious)
            .with_rounds(k + 1)
            .with_atom_cap(CRITICAL_ATOM_CAP)
            .with_work_cap(CRITICAL_WORK_CAP)
            .with_trigger_log(false),
    );
    if run.outcome.is_terminated() {
        return Ok(Verdict::yes(format!(
            "critical-instance oblivious chase reached a fixpoint by round {}",
            k + 1
        ))
        .witness(Witness::CriticalRank(run.rank()))
        .budget(run.rank()));
    }
    let fact = run
        .fact_rank
        .iter()
        .find(|&(_, &r)| r == k + 1)
        .map(|(a, _)| a.clone());
    match fact {
        Some(fact) => Ok(Verdict::no(format!(
            "critical-instance oblivious chase is still productive at round {}",
            k + 1
        ))
        .witness(Witness::Instance { instance: critical, fact, rank: k + 1 })
        .budget(k + 1)),
        None => Ok(Verdict::unknown(
            "critical-instance chase overflowed the atom cap before finishing its rounds",
        )
        .budget(k + 1)),
    }
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Round budget for critical-instance chases.
    pub fuel: usize,
    /// Isomorphism-class ceiling for instance enumeration.
    pub ceiling: u128,
    /// Largest k probed when searching for per-k refutations.
    pub max_k: usize,
    pub threads: usize,
    pub rewrite: RewriteBudget,
}

impl Default for ClassifyOptions {
    fn default() -> ClassifyOptions {
        ClassifyOptions {
            fuel: 50,
            ceiling: 1_000_000,
            max_k: 4,
            threads: 1,
            rewrite: RewriteBudget::default(),
        }
    }
}

/// Is the chase rank uniformly bounded over all instances?
///
/// The positive route combines two certificates: chase termination plus a
/// saturating rewriting of the generated-fact queries yields the rank bound
/// `k_d*(k_q+1) + k_q` for the oblivious chase and `k_d*(k_q+1) + k_q + 1`
/// for the semi-oblivious one, where `k_d` is the critical-instance depth and
/// `k_q` the saturation step count. Fully existential rulesets take a
/// shortcut for the oblivious variant: boundedness coincides with
/// termination, so the termination verdict is mirrored. When no certificate
/// is found, k-boundedness is probed for `k = 0..=max_k`; a `Yes` at some `k`
/// settles the question, refutations at every probed `k` are reported as a
/// scoped `No`, and anything interrupted stays `Unknown` with all component
/// verdicts attached.
pub fn classify_boundedness(rs: &Ruleset, variant: ChaseVariant, opts: &ClassifyOptions) -> Verdict {
    let termination = ct_check(rs, variant, opts.fuel);

    if variant == ChaseVariant::Oblivious && rs.is_fe() {
        // Every head atom mints a term, so the chase is productive exactly
        // while it generates: boundedness and termination coincide.
        let mut verdict = match termination.status {
            Status::Yes => Verdict::yes(
                "fully existential: oblivious-chase boundedness coincides with termination",
            ),
            _ => Verdict::unknown(
                "fully existential: oblivious-chase boundedness coincides with termination, \
                 which is undetermined at this budget",
            ),
        };
        if verdict.status == Status::Yes {
            if let Some(kd) = depth_bound(rs, variant, opts.fuel) {
                verdict = verdict.witness(Witness::RankBound(kd));
            }
        }
        return verdict.budget(termination.budget).part("termination", termination);
    }

    let estimate = match variant {
        ChaseVariant::Oblivious => estimate_k_af(rs, &opts.rewrite),
        _ => estimate_k_fo(rs, &opts.rewrite),
    };
    let estimate_part = match &estimate {
        KEstimate::Saturated(k) => {
            Verdict::yes(format!("rewriting saturated after {k} productive steps")).budget(*k)
        }
        KEstimate::BudgetExhausted { trace } => {
            Verdict::unknown("rewriting budget exhausted before saturation")
                .witness(Witness::GrowthTrace(trace.clone()))
                .budget(trace.len())
        }
    };

    if termination.status == Status::Yes {
        if let KEstimate::Saturated(kq) = estimate {
            if let Some(kd) = depth_bound(rs, variant, opts.fuel) {
                let bound = match variant {
                    ChaseVariant::Oblivious => kd * (kq + 1) + kq,
                    _ => kd * (kq + 1) + kq + 1,
                };
                return Verdict::yes(
                    "chase terminates everywhere and the rewriting saturates, \
                     so the rank is uniformly bounded",
                )
                .witness(Witness::RankBound(bound))
                .part("termination", termination)
                .part("rewriting", estimate_part);
            }
        }
    }

    let mut parts = vec![
        ("termination".to_string(), termination),
        ("rewriting".to_string(), estimate_part),
    ];
    let mut last_refutation = None;
    for k in 0..=opts.max_k {
        match k_bounded(rs, k, variant, opts.ceiling, opts.threads) {
            Ok(probe) => match probe.status {
                Status::Yes => {
                    let mut verdict = Verdict::yes(format!(
                        "every small instance is quiescent by round {}, \
                         which bounds the chase rank everywhere",
                        k + 1
                    ))
                    .witness(Witness::RankBound(k))
                    .part(format!("k={k}"), probe);
                    verdict.parts.splice(0..0, parts);
                    return verdict;
                }
                Status::No => {
                    last_refutation = probe.witness.clone();
                    parts.push((format!("k={k}"), probe));
                }
                Status::Unknown => {
                    parts.push((format!("k={k}"), probe));
                    let mut verdict = Verdict::unknown(format!(
                        "the k-boundedness probe at k = {k} was interrupted"
                    ));
                    verdict.parts = parts;
                    return verdict;
                }
            },
            Err(infeasible) => {
                parts.push((
                    format!("k={k}"),
                    Verdict::unknown(format!("instance enumeration infeasible: {infeasible}")),
                ));
                let mut verdict = Verdict::unknown(format!(
                    "no bound found for k < {k} and enumeration became infeasible at k = {k}"
                ));
                verdict.parts = parts;
                return verdict;
            }
        }
    }
    let mut verdict = Verdict::no(format!(
        "not k-bounded for any k <= {}; refuting witnesses grow with k, \
         larger bounds were not probed",
        opts.max_k
    ));
    if let Some(witness) = last_refutation {
        verdict = verdict.witness(witness);
    }
    verdict.parts = parts;
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_instance, parse_ruleset};

    fn rules(src: &str) -> Ruleset {
        parse_ruleset(src).expect("ruleset parses")
    }

    fn instance(src: &str) -> Instance {
        parse_instance(src).expect("instance parses")
    }

    const TRANSITIVITY: &str = "p(X,Y), p(Y,Z) -> p(X,Z).";
    const COMPOSITION: &str = "p(X,Y), p(W,Z) -> p(X,Z).";
    const LOOP_EXTENDER: &str = "p(X,Y) -> p(X,Z).";

    #[test]
    fn detect_classes_on_a_datalog_pair() {
        let stats = detect_classes(&rules(&format!("{TRANSITIVITY} {COMPOSITION}")));
        assert!(stats.is_datalog);
        assert!(!stats.is_fe);
        assert_eq!(stats.max_body_atoms, 2);
        assert!(!stats.is_linear);
        assert!(stats.weakly_acyclic);
    }

    #[test]
    fn detect_classes_on_a_single_growing_rule() {
        let stats = detect_classes(&rules(LOOP_EXTENDER));
        assert!(stats.is_fe);
        assert!(stats.is_linear);
        assert!(stats.is_guarded);
        assert!(!stats.is_datalog);
        assert!(!stats.weakly_acyclic);
    }

    #[test]
    fn guardedness_needs_one_atom_with_all_body_variables() {
        assert!(detect_classes(&rules("p(X,Y), q(Y) -> r(X).")).is_guarded);
        assert!(!detect_classes(&rules("p(X,Y), q(Z) -> r(X).")).is_guarded);
    }

    #[test]
    fn ct_is_unknown_for_a_diverging_oblivious_chase() {
        let verdict = ct_check(&rules(LOOP_EXTENDER), ChaseVariant::Oblivious, 20);
        assert_eq!(verdict.status, Status::Unknown);
    }

    #[test]
    fn ct_certifies_the_semi_oblivious_chase_of_the_loop_extender() {
        let verdict = ct_check(&rules(LOOP_EXTENDER), ChaseVariant::SemiOblivious, 20);
        assert_eq!(verdict.status, Status::Yes);
        assert!(matches!(verdict.witness, Some(Witness::CriticalRank(1))));
    }

    #[test]
    fn ct_short_circuits_on_weak_acyclicity() {
        let verdict = ct_check(
            &rules(&format!("{TRANSITIVITY} {COMPOSITION}")),
            ChaseVariant::Oblivious,
            5,
        );
        assert_eq!(verdict.status, Status::Yes);
        assert!(verdict.witness.is_none());
    }

    #[test]
    fn depth_bounds_match_hand_chases() {
        assert_eq!(
            depth_bound(&rules("p(X) -> q(X,Z)."), ChaseVariant::Oblivious, 10),
            Some(1)
        );
        assert_eq!(
            depth_bound(&rules(TRANSITIVITY), ChaseVariant::Oblivious, 10),
            Some(0)
        );
        assert_eq!(
            depth_bound(&rules("p(X,Y,U) -> p(Y,X,Z)."), ChaseVariant::SemiOblivious, 10),
            Some(1)
        );
        assert_eq!(depth_bound(&rules(LOOP_EXTENDER), ChaseVariant::Oblivious, 10), None);
    }

    #[test]
    fn composition_alone_is_one_bounded() {
        let verdict =
            k_bounded(&rules(COMPOSITION), 1, ChaseVariant::Oblivious, 1_000_000, 1).unwrap();
        assert_eq!(verdict.status, Status::Yes);
    }

    #[test]
    fn transitivity_is_refuted_at_k_one_with_a_recheckable_witness() {
        let rs = rules(TRANSITIVITY);
        let verdict = k_bounded(&rs, 1, ChaseVariant::Oblivious, 1_000_000, 1).unwrap();
        assert_eq!(verdict.status, Status::No);
        let Some(Witness::Instance { instance: failing, fact, rank }) = verdict.witness else {
            panic!("refutation must carry an instance witness");
        };
        assert_eq!(rank, 2);
        assert_eq!(failing, instance("p(a,b). p(b,c). p(c,a)."));
        // Re-run the chase on the witness: the fact must first appear at the
        // reported round.
        let run = chase(
            &rs,
            &failing,
            ChaseOptions::new(ChaseVariant::Oblivious).with_rounds(3),
        );
        assert_eq!(run.fact_rank.get(&fact), Some(&2));
    }

    #[test]
    fn adding_composition_restores_one_boundedness() {
        let rs = rules(&format!("{TRANSITIVITY} {COMPOSITION}"));
        let verdict = k_bounded(&rs, 1, ChaseVariant::Oblivious, 1_000_000, 1).unwrap();
        assert_eq!(verdict.status, Status::Yes);
    }

    #[test]
    fn witness_selection_is_independent_of_the_thread_count() {
        let rs = rules(TRANSITIVITY);
        let sequential = k_bounded(&rs, 1, ChaseVariant::Oblivious, 1_000_000, 1).unwrap();
        let parallel = k_bounded(&rs, 1, ChaseVariant::Oblivious, 1_000_000, 8).unwrap();
        let pick = |v: &Verdict| match &v.witness {
            Some(Witness::Instance { instance, fact, .. }) => (instance.clone(), fact.clone()),
            _ => panic!("expected an instance witness"),
        };
        assert_eq!(pick(&sequential), pick(&parallel));
    }

    #[test]
    fn oversized_enumerations_are_infeasible() {
        let err = k_bounded(&rules(TRANSITIVITY), 4, ChaseVariant::Oblivious, 1_000_000, 1)
            .unwrap_err();
        assert!(err.estimate > 1_000_000);
    }

    #[test]
    fn fe_critical_check_refutes_the_loop_extender() {
        let verdict = k_bounded_fe_oblivious(&rules(LOOP_EXTENDER), 3).unwrap();
        assert_eq!(verdict.status, Status::No);
        assert!(matches!(
            verdict.witness,
            Some(Witness::Instance { rank: 4, .. })
        ));
    }

    #[test]
    fn fe_critical_check_certifies_a_single_step_ruleset() {
        let verdict = k_bounded_fe_oblivious(&rules("p(X) -> q(X,Z)."), 1).unwrap();
        assert_eq!(verdict.status, Status::Yes);
    }

    #[test]
    fn fe_critical_check_sees_cross_predicate_feedback() {
        let rs = rules("p(X) -> q(X,Z). q(X,Y) -> p(Z).");
        let verdict = k_bounded_fe_oblivious(&rs, 1).unwrap();
        assert_eq!(verdict.status, Status::No);
    }

    #[test]
    fn fe_critical_check_rejects_datalog_heads() {
        assert_eq!(
            k_bounded_fe_oblivious(&rules("p(X,Y) -> q(X)."), 1).err(),
            Some(NotFullyExistential)
        );
    }

    #[test]
    fn classify_certifies_composition_via_saturation() {
        let verdict = classify_boundedness(
            &rules(COMPOSITION),
            ChaseVariant::Oblivious,
            &ClassifyOptions::default(),
        );
        assert_eq!(verdict.status, Status::Yes);
        assert!(matches!(verdict.witness, Some(Witness::RankBound(1))));
        assert!(verdict.parts.iter().any(|(name, _)| name == "rewriting"));
    }

    #[test]
    fn classify_reports_transitivity_refutations_up_to_the_feasible_k() {
        let verdict = classify_boundedness(
            &rules(TRANSITIVITY),
            ChaseVariant::Oblivious,
            &ClassifyOptions::default(),
        );
        assert_eq!(verdict.status, Status::Unknown);
        let status_of = |name: &str| {
            verdict
                .parts
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v.status)
        };
        assert_eq!(status_of("k=0"), Some(Status::No));
        assert_eq!(status_of("k=1"), Some(Status::No));
        assert_eq!(status_of("k=2"), Some(Status::Unknown));
    }

    #[test]
    fn classify_mirrors_termination_for_fully_existential_rulesets() {
        let rs = rules("p(X,X1), p(X1,X2), p(X2,Z) -> p(X,Y), p(Y,Z).");
        let opts = ClassifyOptions { fuel: 6, ..ClassifyOptions::default() };
        let verdict = classify_boundedness(&rs, ChaseVariant::Oblivious, &opts);
        assert_eq!(verdict.status, Status::Unknown);
        assert_eq!(verdict.parts.len(), 1);
        assert_eq!(verdict.parts[0].0, "termination");

        let bounded = classify_boundedness(
            &rules("p(X) -> q(X,Z)."),
            ChaseVariant::Oblivious,
            &ClassifyOptions::default(),
        );
        assert_eq!(bounded.status, Status::Yes);
        assert!(matches!(bounded.witness, Some(Witness::RankBound(1))));
    }

    #[test]
    fn classify_bounds_the_semi_oblivious_loop_extender() {
        let verdict = classify_boundedness(
            &rules(LOOP_EXTENDER),
            ChaseVariant::SemiOblivious,
            &ClassifyOptions::default(),
        );
        assert_eq!(verdict.status, Status::Yes);
        let Some(Witness::RankBound(bound)) = verdict.witness else {
            panic!("saturation route must report a bound");
        };
        assert_eq!(bound, 2);
    }
}
