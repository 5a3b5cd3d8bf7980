//! The progress measure: basis overapproximation, overestimation of enabled
//! E-matches, the lexicographic pair (sigma, theta), and the descent monitor.
//!
//! Sigma is recomputed from scratch per state so the monitor stays
//! independent of engine bookkeeping. Two routes exist: a counting route used
//! by the monitors, and a brute-force tuple enumeration ([`p_estimation`])
//! kept as the independent cross-check. History filtering in the measure is
//! always modulo tag equivalence: the per-instance estimates for dynamically
//! introduced quantifiers are indexed by current basis representatives, which
//! only relate to recorded instantiations through the E-interface.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::einterface::{ClassId, EInterface};
use crate::formula::{Tag, TaggedQuantifier};
use crate::matching::{history_enables, MatchMode};
use crate::settheory::{self, NestedTemplate};
use crate::term::{Func, Sort, Symbol, Term};
use crate::transitions::{unverified_count, ActiveState, SolverState, StepChoice, Trace};

/// Description of a generative signature: which sorts feed the two
/// overapproximations, the Skolem functions lifted over the set-sorted side,
/// and the nested-quantifier templates.
#[derive(Clone, PartialEq, Debug)]
pub struct MeasureConfig {
    pub set_sort: Sort,
    pub elem_sort: Sort,
    pub skolems: Vec<Func>,
    pub nested: Vec<NestedTemplate>,
}

#[derive(Debug, thiserror::Error)]
pub enum MeasureConfigError {
    #[error("skolem {0} must take only set-sorted arguments")]
    SkolemArgSort(Symbol),
    #[error("skolem {0} must produce the element sort")]
    SkolemResultSort(Symbol),
    #[error("nested template {0} does not name an axiom")]
    UnknownOuterTag(Symbol),
    #[error("nested template {0} disagrees with the axiom's binder sorts")]
    ParamSorts(Symbol),
    #[error("nested template {0}: axiom has no inner quantifier")]
    NoInnerQuantifier(Symbol),
}

impl MeasureConfig {
    /// The configuration for the bundled set-theory axiomatisation.
    pub fn settheory() -> MeasureConfig {
        let b = settheory::bundle();
        MeasureConfig {
            set_sort: b.set_sort,
            elem_sort: b.elem_sort,
            skolems: b.skolems.clone(),
            nested: b.nested.clone(),
        }
    }

    pub fn validate(&self, axioms: &[TaggedQuantifier]) -> Result<(), MeasureConfigError> {
        for sk in &self.skolems {
            if sk.arg_sorts().iter().any(|s| *s != self.set_sort) {
                return Err(MeasureConfigError::SkolemArgSort(sk.name()));
            }
            if sk.result_sort() != self.elem_sort {
                return Err(MeasureConfigError::SkolemResultSort(sk.name()));
            }
        }
        for tpl in &self.nested {
            let outer = axioms
                .iter()
                .find(|a| a.tag == Tag::Prim(tpl.outer_tag))
                .ok_or(MeasureConfigError::UnknownOuterTag(tpl.outer_tag))?;
            if outer.var_sorts() != tpl.param_sorts {
                return Err(MeasureConfigError::ParamSorts(tpl.outer_tag));
            }
            let inner = outer
                .body
                .clauses()
                .iter()
                .flat_map(|c| c.disjuncts())
                .find_map(|d| d.as_quantifier())
                .ok_or(MeasureConfigError::NoInnerQuantifier(tpl.outer_tag))?;
            if inner.var_sorts() != tpl.inner_var_sorts {
                return Err(MeasureConfigError::ParamSorts(tpl.outer_tag));
            }
        }
        Ok(())
    }
}

/// The lexicographically ordered measure value. Terminal states carry
/// (-1, -1).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct MeasureValue {
    pub sigma: i64,
    pub theta: i64,
}

impl MeasureValue {
    pub const TERMINAL: MeasureValue = MeasureValue { sigma: -1, theta: -1 };
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.sigma, self.theta)
    }
}

/// The two basis overapproximations: `O1` keeps the set-sorted
/// representatives; `O2` keeps the element-sorted representatives plus every
/// Skolem application over `O1` tuples (ordered, components may repeat).
pub fn overapprox_basis(basis: &[Term], cfg: &MeasureConfig) -> (Vec<Term>, Vec<Term>) {
    let o1: Vec<Term> = basis.iter().copied().filter(|t| t.sort() == cfg.set_sort).collect();
    let mut o2: Vec<Term> =
        basis.iter().copied().filter(|t| t.sort() == cfg.elem_sort).collect();
    for sk in &cfg.skolems {
        for args in ordered_tuples(&o1, sk.arity()) {
            let t = Term::app(*sk, args);
            if !o2.contains(&t) {
                o2.push(t);
            }
        }
    }
    o2.sort();
    (o1, o2)
}

fn ordered_tuples(pool: &[Term], arity: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * pool.len());
        for prefix in &out {
            for t in pool {
                let mut tuple = prefix.clone();
                tuple.push(*t);
                next.push(tuple);
            }
        }
        out = next;
    }
    if arity == 0 {
        // A nullary Skolem would contribute a single constant.
        return vec![Vec::new()];
    }
    out
}

/// The original axioms of a state: the primitively tagged members of the
/// current quantifiers. Inner quantifiers always carry parameterised tags.
fn original_axioms(s: &ActiveState) -> Vec<&TaggedQuantifier> {
    s.quantifiers.iter().filter(|q| !q.tag.is_parameterised()).collect()
}

fn space_for_sort<'a>(
    sort: Sort,
    o1: &'a [Term],
    o2: &'a [Term],
    basis: &'a [Term],
    cfg: &MeasureConfig,
) -> Vec<Term> {
    if sort == cfg.set_sort {
        o1.to_vec()
    } else if sort == cfg.elem_sort {
        o2.to_vec()
    } else {
        basis.iter().copied().filter(|t| t.sort() == sort).collect()
    }
}

/// Brute-force P-estimation: for every original axiom tag, the tuples over
/// the overapproximations filtered by history enabledness; for every nested
/// template and every ordered parameter tuple over `O1`, the per-instance
/// tuple set. Returns (tag, tuples) pairs in canonical order.
pub fn p_estimation(
    s: &ActiveState,
    basis: &[Term],
    cfg: &MeasureConfig,
) -> Vec<(Tag, Vec<Vec<Term>>)> {
    let (o1, o2) = overapprox_basis(basis, cfg);
    let e = &s.estate;
    let mut out = Vec::new();
    for axiom in original_axioms(s) {
        let spaces: Vec<Vec<Term>> = axiom
            .var_sorts()
            .iter()
            .map(|sort| space_for_sort(*sort, &o1, &o2, basis, cfg))
            .collect();
        let tuples = cartesian(&spaces)
            .into_iter()
            .filter(|tuple| history_enables(e, &axiom.tag, tuple, MatchMode::Optimized))
            .collect();
        out.push((axiom.tag.clone(), tuples));
    }
    for tpl in &cfg.nested {
        let param_spaces: Vec<Vec<Term>> = tpl
            .param_sorts
            .iter()
            .map(|sort| space_for_sort(*sort, &o1, &o2, basis, cfg))
            .collect();
        let inner_spaces: Vec<Vec<Term>> = tpl
            .inner_var_sorts
            .iter()
            .map(|sort| space_for_sort(*sort, &o1, &o2, basis, cfg))
            .collect();
        for params in cartesian(&param_spaces) {
            let tag = Tag::param(Tag::Prim(tpl.outer_tag), params);
            let tuples = cartesian(&inner_spaces)
                .into_iter()
                .filter(|tuple| history_enables(e, &tag, tuple, MatchMode::Optimized))
                .collect();
            out.push((tag, tuples));
        }
    }
    out.sort_by(|(a, _), (b, _)| a.cmp(b));
    out
}

fn cartesian(spaces: &[Vec<Term>]) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for space in spaces {
        let mut next = Vec::with_capacity(out.len() * space.len());
        for prefix in &out {
            for t in space {
                let mut tuple = prefix.clone();
                tuple.push(*t);
                next.push(tuple);
            }
        }
        out = next;
    }
    out
}

/// Sum of the brute-force P-estimation cardinalities; the independent
/// recomputation route.
pub fn sigma_brute(s: &ActiveState, cfg: &MeasureConfig) -> i64 {
    let basis = s.estate.interface.basis_unchecked();
    p_estimation(s, &basis, cfg)
        .iter()
        .map(|(_, tuples)| tuples.len() as i64)
        .sum()
}

/// Counting route for sigma. Tuple spaces factor per position, and for a
/// fixed tag the tuples blocked by distinct history class-vectors are
/// disjoint, so the blocked count is a sum of per-entry products of
/// class-histogram values.
pub fn sigma(s: &SolverState, cfg: &MeasureConfig) -> i64 {
    let SolverState::Active(active) = s else {
        return -1;
    };
    let basis = active.estate.interface.basis_unchecked();
    let (o1, o2) = overapprox_basis(&basis, cfg);
    let e = &active.estate.interface;

    // Histograms per sort role: class -> number of space elements in it.
    let hist_of = |space: &[Term]| -> HashMap<ClassId, usize> {
        let mut h = HashMap::new();
        for t in space {
            if let Some(c) = e.lookup(*t) {
                *h.entry(c).or_insert(0) += 1;
            }
        }
        h
    };
    let o1_hist = hist_of(&o1);
    let o2_hist = hist_of(&o2);

    // History entries grouped by canonical tag: primitive name plus canonical
    // parameter classes. Entries with unknown parameters or terms can never
    // block a candidate and are skipped.
    let mut prim_entries: HashMap<Symbol, HashSet<Vec<ClassId>>> = HashMap::new();
    let mut param_entries: HashMap<(Symbol, Vec<ClassId>), HashSet<Vec<ClassId>>> =
        HashMap::new();
    for (tag, terms) in active.estate.history.entries() {
        let Some(classes) = canonical_classes(e, terms) else {
            continue;
        };
        match tag {
            Tag::Prim(name) => {
                prim_entries.entry(*name).or_default().insert(classes);
            }
            Tag::Param(base, params) => {
                let Tag::Prim(base_name) = base.as_ref() else { continue };
                let Some(param_classes) = canonical_classes(e, params) else {
                    continue;
                };
                param_entries
                    .entry((*base_name, param_classes))
                    .or_default()
                    .insert(classes);
            }
        }
    }

    let mut total: i64 = 0;
    for axiom in original_axioms(active) {
        let sorts = axiom.var_sorts();
        let (sizes, hists) = spaces_summary(&sorts, &o1, &o2, &basis, cfg, e, &o1_hist, &o2_hist);
        let space_size: i64 = sizes.iter().product();
        let mut blocked: i64 = 0;
        if let Tag::Prim(name) = &axiom.tag {
            if let Some(vectors) = prim_entries.get(name) {
                for vector in vectors {
                    blocked += blocked_product(vector, &hists, &sorts);
                }
            }
        }
        total += space_size - blocked;
    }

    for tpl in &cfg.nested {
        let param_spaces: Vec<Vec<Term>> = tpl
            .param_sorts
            .iter()
            .map(|sort| space_for_sort(*sort, &o1, &o2, &basis, cfg))
            .collect();
        let inner_sorts = tpl.inner_var_sorts.clone();
        let (inner_sizes, inner_hists) =
            spaces_summary(&inner_sorts, &o1, &o2, &basis, cfg, e, &o1_hist, &o2_hist);
        let inner_size: i64 = inner_sizes.iter().product();
        let param_count: i64 = param_spaces.iter().map(|s| s.len() as i64).product();
        total += param_count * inner_size;
        // Subtract blocked tuples per parameter tuple. Parameter tuples are
        // basis representatives (or unknown Skolem terms), so at most one
        // parameter tuple matches a given entry class-vector; count how many
        // space tuples land on each entry's parameter classes.
        for ((base_name, param_classes), vectors) in &param_entries {
            if *base_name != tpl.outer_tag {
                continue;
            }
            if param_classes.len() != param_spaces.len() {
                continue;
            }
            let mut matching_param_tuples: i64 = 1;
            for (space, class) in param_spaces.iter().zip(param_classes) {
                let n = space.iter().filter(|t| e.lookup(**t) == Some(*class)).count();
                matching_param_tuples *= n as i64;
            }
            if matching_param_tuples == 0 {
                continue;
            }
            let mut blocked: i64 = 0;
            for vector in vectors {
                blocked += blocked_product(vector, &inner_hists, &inner_sorts);
            }
            total -= matching_param_tuples * blocked;
        }
    }
    total
}

fn canonical_classes(e: &EInterface, terms: &[Term]) -> Option<Vec<ClassId>> {
    terms.iter().map(|t| e.lookup(*t)).collect()
}

#[allow(clippy::too_many_arguments)]
fn spaces_summary(
    sorts: &[Sort],
    o1: &[Term],
    o2: &[Term],
    basis: &[Term],
    cfg: &MeasureConfig,
    e: &EInterface,
    o1_hist: &HashMap<ClassId, usize>,
    o2_hist: &HashMap<ClassId, usize>,
) -> (Vec<i64>, Vec<HashMap<ClassId, usize>>) {
    let mut sizes = Vec::with_capacity(sorts.len());
    let mut hists = Vec::with_capacity(sorts.len());
    for sort in sorts {
        if *sort == cfg.set_sort {
            sizes.push(o1.len() as i64);
            hists.push(o1_hist.clone());
        } else if *sort == cfg.elem_sort {
            sizes.push(o2.len() as i64);
            hists.push(o2_hist.clone());
        } else {
            let space: Vec<Term> =
                basis.iter().copied().filter(|t| t.sort() == *sort).collect();
            let mut h = HashMap::new();
            for t in &space {
                if let Some(c) = e.lookup(*t) {
                    *h.entry(c).or_insert(0) += 1;
                }
            }
            sizes.push(space.len() as i64);
            hists.push(h);
        }
    }
    (sizes, hists)
}

fn blocked_product(
    vector: &[ClassId],
    hists: &[HashMap<ClassId, usize>],
    sorts: &[Sort],
) -> i64 {
    if vector.len() != sorts.len() {
        return 0;
    }
    let mut product: i64 = 1;
    for (class, hist) in vector.iter().zip(hists) {
        let n = hist.get(class).copied().unwrap_or(0);
        if n == 0 {
            return 0;
        }
        product *= n as i64;
    }
    product
}

/// The number of unverified current clauses, or -1 on terminals.
pub fn theta(s: &SolverState) -> i64 {
    match s {
        SolverState::Active(a) => unverified_count(a) as i64,
        _ => -1,
    }
}

pub fn measure(s: &SolverState, cfg: &MeasureConfig) -> MeasureValue {
    MeasureValue { sigma: sigma(s, cfg), theta: theta(s) }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DescentViolationKind {
    /// M did not strictly decrease lexicographically.
    MeasureNotDecreased,
    /// A split step increased sigma.
    SigmaIncreasedAtSplit,
    /// An inst step failed to strictly decrease sigma.
    SigmaNotDecreasedAtInst,
    /// A split step failed to strictly decrease theta.
    ThetaNotDecreasedAtSplit,
}

impl fmt::Display for DescentViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DescentViolationKind::MeasureNotDecreased => "measure-not-decreased",
            DescentViolationKind::SigmaIncreasedAtSplit => "sigma-increased-at-split",
            DescentViolationKind::SigmaNotDecreasedAtInst => "sigma-not-decreased-at-inst",
            DescentViolationKind::ThetaNotDecreasedAtSplit => "theta-not-decreased-at-split",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct DescentViolation {
    /// Index of the step (0-based) whose source/target pair violated descent.
    pub step: usize,
    pub rule: &'static str,
    pub kind: DescentViolationKind,
    pub before: MeasureValue,
    pub after: MeasureValue,
}

impl fmt::Display for DescentViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step {} ({}): {} [before {} after {}]",
            self.step, self.rule, self.kind, self.before, self.after
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct DescentReport {
    pub steps_checked: usize,
    pub violations: Vec<DescentViolation>,
    /// Measure at every state along the trace (initial state first); absent
    /// when no configuration was supplied.
    pub measures: Vec<MeasureValue>,
}

impl DescentReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the measure descent conditions along a trace: M strictly decreases
/// lexicographically at every step; splits keep sigma non-increasing and
/// strictly decrease theta; insts strictly decrease sigma. Without a
/// configuration only the theta condition at splits is checked.
pub fn check_descent(trace: &Trace, cfg: Option<&MeasureConfig>) -> DescentReport {
    let mut report = DescentReport::default();
    let states: Vec<&SolverState> = trace.states().collect();
    if let Some(cfg) = cfg {
        report.measures = states.iter().map(|s| measure(s, cfg)).collect();
    }
    for (i, (choice, _)) in trace.steps.iter().enumerate() {
        report.steps_checked += 1;
        let rule = choice.rule_name();
        let theta_before = theta(states[i]);
        let theta_after = theta(states[i + 1]);
        if let Some(_cfg) = cfg {
            let before = report.measures[i];
            let after = report.measures[i + 1];
            if after >= before {
                report.violations.push(DescentViolation {
                    step: i,
                    rule,
                    kind: DescentViolationKind::MeasureNotDecreased,
                    before,
                    after,
                });
            }
            match choice {
                StepChoice::Split(_) if after.sigma > before.sigma => {
                    report.violations.push(DescentViolation {
                        step: i,
                        rule,
                        kind: DescentViolationKind::SigmaIncreasedAtSplit,
                        before,
                        after,
                    });
                }
                StepChoice::Inst(_) if after.sigma >= before.sigma => {
                    report.violations.push(DescentViolation {
                        step: i,
                        rule,
                        kind: DescentViolationKind::SigmaNotDecreasedAtInst,
                        before,
                        after,
                    });
                }
                _ => {}
            }
        }
        if matches!(choice, StepChoice::Split(_)) && theta_after >= theta_before {
            report.violations.push(DescentViolation {
                step: i,
                rule,
                kind: DescentViolationKind::ThetaNotDecreasedAtSplit,
                before: MeasureValue { sigma: 0, theta: theta_before },
                after: MeasureValue { sigma: 0, theta: theta_after },
            });
        }
    }
    // With a configuration the theta condition is already implied by the
    // recorded measures; drop duplicate entries.
    if cfg.is_some() {
        report
            .violations
            .dedup_by(|a, b| a.step == b.step && a.kind == b.kind);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Literal;
    use crate::settheory::bundle;
    use crate::term::Symbol;
    use crate::transitions::initial_state;

    fn cst(name: &str, sort: Sort) -> Term {
        Term::constant(Func::new(Symbol::new(name), vec![], sort))
    }

    #[test]
    fn overapprox_small_cases() {
        let cfg = MeasureConfig::settheory();
        let b = bundle();
        let s = cst("s", b.set_sort);
        let t = cst("t0", b.elem_sort);
        let basis = vec![s, t, Term::truth(), Term::falsity()];
        let (o1, o2) = overapprox_basis(&basis, &cfg);
        assert_eq!(o1, vec![s]);
        // t plus Sk_ss(s,s), Sk_eq(s,s), Sk_dj(s,s), Sk_ie(s).
        assert_eq!(o2.len(), 5);
        assert!(o2.contains(&t));

        // No set-sorted members: O1 empty, O2 is just the element filter.
        let basis = vec![t, Term::truth()];
        let (o1, o2) = overapprox_basis(&basis, &cfg);
        assert!(o1.is_empty());
        assert_eq!(o2, vec![t]);

        // Two sets: 3 binary skolems over 4 ordered pairs, plus Sk_ie over
        // each set. Frozen from the enumeration: 12 + 2 = 14.
        let s2 = cst("s2", b.set_sort);
        let basis = vec![s, s2];
        let (o1, o2) = overapprox_basis(&basis, &cfg);
        assert_eq!(o1.len(), 2);
        assert_eq!(o2.len(), 14);
    }

    #[test]
    fn measure_of_terminals_is_minimal() {
        let cfg = MeasureConfig::settheory();
        assert_eq!(measure(&SolverState::Inconsistent, &cfg), MeasureValue::TERMINAL);
        assert_eq!(measure(&SolverState::Saturated, &cfg), MeasureValue::TERMINAL);
        assert!(MeasureValue::TERMINAL < MeasureValue { sigma: 0, theta: 0 });
        assert!(MeasureValue { sigma: 1, theta: 0 } < MeasureValue { sigma: 1, theta: 5 });
        assert!(MeasureValue { sigma: 1, theta: 9 } < MeasureValue { sigma: 2, theta: 0 });
    }

    #[test]
    fn settheory_sigma_with_one_member_fact() {
        let b = bundle();
        let cfg = MeasureConfig::settheory();
        let t0 = cst("t0", b.elem_sort);
        let a = cst("a", b.set_sort);
        let member = b.function("member");
        let s = initial_state(
            &b.axioms,
            &[Literal::pred(Term::app(member, vec![t0, a]), true)],
        );
        // |O1| = 1, |O2| = 5; summing the per-axiom tuple spaces over the 34
        // axioms plus the three nested templates gives 285 (frozen from the
        // brute-force route, which is asserted equal here).
        let fast = sigma(&s, &cfg);
        let SolverState::Active(active) = &s else { panic!() };
        assert_eq!(fast, sigma_brute(active, &cfg));
        assert_eq!(fast, 285);
        assert_eq!(theta(&s), 0);
    }

    #[test]
    fn sigma_counting_matches_brute_force_with_history() {
        let b = bundle();
        let cfg = MeasureConfig::settheory();
        let t0 = cst("t0", b.elem_sort);
        let a = cst("a", b.set_sort);
        let c = cst("c", b.set_sort);
        let member = b.function("member");
        let s = initial_state(
            &b.axioms,
            &[
                Literal::pred(Term::app(member, vec![t0, a]), true),
                Literal::equality(a, c),
            ],
        );
        let SolverState::Active(mut active) = s else { panic!() };
        // Record a few instantiations, including one under a parameterised
        // tag, and keep checking the two sigma routes against each other.
        let entries: Vec<(Tag, Vec<Term>)> = vec![
            (Tag::prim("union-elim"), vec![a, a, t0]),
            (Tag::prim("subset-intro"), vec![a, c]),
            (Tag::param(Tag::prim("subset-elim"), vec![a, c]), vec![t0]),
        ];
        for (tag, terms) in entries {
            active.estate.history = active.estate.history.record(tag, terms);
            let fast = sigma(&SolverState::Active(active.clone()), &cfg);
            assert_eq!(fast, sigma_brute(&active, &cfg));
        }
    }

    #[test]
    fn config_validation_catches_mismatches() {
        let b = bundle();
        let cfg = MeasureConfig::settheory();
        assert!(cfg.validate(&b.axioms).is_ok());

        let mut bad = cfg.clone();
        bad.nested[0].outer_tag = Symbol::new("no-such-axiom");
        assert!(matches!(
            bad.validate(&b.axioms),
            Err(MeasureConfigError::UnknownOuterTag(_))
        ));

        let mut bad = cfg.clone();
        bad.skolems.push(b.function("union"));
        assert!(matches!(
            bad.validate(&b.axioms),
            Err(MeasureConfigError::SkolemResultSort(_))
        ));
    }
}
