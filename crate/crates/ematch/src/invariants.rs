//! Invariant monitors: the general-purpose suite that holds for every
//! axiomatisation, and the problem-specific suite for the bundled set theory
//! (clause origins and shapes, inherited quantifiers, candidate-basis
//! containment).
//!
//! Each predicate is evaluated at every state of a trace (or across every
//! consecutive pair, for the growth predicates); violations are collected,
//! never raised.

use std::collections::HashMap;
use std::fmt;

use crate::einterface::EInterface;
use crate::formula::{Clause, ExtLiteral, Literal, Tag, TaggedQuantifier};
use crate::matching::history_enables;
use crate::measure::{overapprox_basis, MeasureConfig};
use crate::settheory;
use crate::term::{Symbol, Term};
use crate::transitions::{verify_clause, ActiveState, Modes, SolverState, Trace};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    /// The eleven general-purpose predicates.
    General,
    /// The six set-theory predicates; requires the bundled axiomatisation.
    SetTheory,
}

#[derive(Clone, Debug)]
pub struct InvariantViolation {
    /// State index in the trace (0 = initial); growth predicates attach to
    /// the index of the source state of the step.
    pub state: usize,
    /// Short check name, e.g. "IG:QT" or "IP:OC".
    pub check: &'static str,
    pub detail: String,
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "state {}: {} violated: {}", self.state, self.check, self.detail)
    }
}

#[derive(Clone, Debug, Default)]
pub struct InvariantReport {
    pub states_checked: usize,
    pub violations: Vec<InvariantViolation>,
}

impl InvariantReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs the selected suites over every state (and step) of a trace.
pub fn check_invariants(trace: &Trace, suites: &[Suite], modes: Modes) -> InvariantReport {
    let mut report = InvariantReport::default();
    let states: Vec<&SolverState> = trace.states().collect();
    let initial = trace
        .initial
        .as_active()
        .map(|a| a.quantifiers.clone())
        .unwrap_or_default();

    for (idx, state) in states.iter().enumerate() {
        let SolverState::Active(active) = state else { continue };
        report.states_checked += 1;
        if suites.contains(&Suite::General) {
            general_state_checks(idx, active, modes, &mut report);
        }
        if suites.contains(&Suite::SetTheory) {
            settheory_state_checks(idx, active, &initial, &mut report);
        }
    }
    for (idx, window) in states.windows(2).enumerate() {
        let (SolverState::Active(before), after) = (window[0], window[1]) else {
            continue;
        };
        if suites.contains(&Suite::General) {
            general_step_checks(idx, before, after, &mut report);
        }
        if suites.contains(&Suite::SetTheory) {
            if let SolverState::Active(after) = after {
                basis_after_step(idx, before, after, &mut report);
            }
        }
    }
    report
}

fn push(
    report: &mut InvariantReport,
    state: usize,
    check: &'static str,
    detail: impl Into<String>,
) {
    report.violations.push(InvariantViolation { state, check, detail: detail.into() });
}

// ---------------------------------------------------------------------------
// General-purpose suite
// ---------------------------------------------------------------------------

fn general_state_checks(
    idx: usize,
    s: &ActiveState,
    modes: Modes,
    report: &mut InvariantReport,
) {
    // IG:QT — distinct quantifiers carry distinct tags.
    for (i, q1) in s.quantifiers.iter().enumerate() {
        for q2 in &s.quantifiers[i + 1..] {
            if q1 != q2 && q1.tag == q2.tag {
                push(report, idx, "IG:QT", format!("duplicate tag {}", q1.tag));
            }
        }
    }

    // IG:NA — no unit clauses among the current clauses.
    for c in &s.clauses {
        if c.is_unit() {
            push(report, idx, "IG:NA", format!("unit clause {c}"));
        }
    }

    // IG:EQ — every history entry names a current quantifier with matching
    // arity.
    for (tag, terms) in s.estate.history.entries() {
        match s.quantifiers.iter().find(|q| &q.tag == tag) {
            None => push(report, idx, "IG:EQ", format!("no quantifier for entry tag {tag}")),
            Some(q) if q.vars.len() != terms.len() => {
                push(report, idx, "IG:EQ", format!("arity mismatch for entry tag {tag}"))
            }
            Some(_) => {}
        }
    }

    // IG:EE — entry terms are known and some trigger-set instantiation is
    // known.
    for (tag, terms) in s.estate.history.entries() {
        if terms.iter().any(|t| !s.estate.interface.known(*t)) {
            push(report, idx, "IG:EE", format!("entry ({tag}: ...) has unknown terms"));
            continue;
        }
        if let Some(q) = s.quantifiers.iter().find(|q| &q.tag == tag) {
            if !crate::transitions::trigger_instantiation_known(&s.estate.interface, q, terms) {
                push(
                    report,
                    idx,
                    "IG:EE",
                    format!("entry ({tag}: ...) has no known trigger instantiation"),
                );
            }
        }
    }

    // IG:HE — enabledness is closed under pointwise-equal instantiation
    // vectors. Checked over the finite family of history vectors and their
    // canonicalisations, per tag.
    for (tag, terms) in s.estate.history.entries() {
        let canonical: Option<Vec<Term>> = terms
            .iter()
            .map(|t| s.estate.interface.lookup(*t).map(|c| s.estate.interface.rep(c)))
            .collect();
        let Some(canonical) = canonical else { continue };
        let direct = history_enables(&s.estate, tag, terms, modes.matching);
        let canon = history_enables(&s.estate, tag, &canonical, modes.matching);
        if direct != canon {
            push(
                report,
                idx,
                "IG:HE",
                format!("enabledness differs across equal vectors for {tag}"),
            );
        }
    }

    // IG:KB — known vectors are pointwise equal to basis vectors. Checked on
    // the inserted terms and all history vectors.
    for (tag, terms) in s.estate.history.entries() {
        for t in terms {
            if let Some(c) = s.estate.interface.lookup(*t) {
                let rep = s.estate.interface.rep(c);
                if !s.estate.interface.equal(*t, rep) {
                    push(report, idx, "IG:KB", format!("{t} ({tag}) not equal to its representative"));
                }
            }
        }
    }
    for class in s.estate.interface.classes() {
        let rep = s.estate.interface.rep(class);
        for member in s.estate.interface.class_members(class) {
            if !s.estate.interface.equal(*member, rep) {
                push(report, idx, "IG:KB", format!("{member} not equal to representative {rep}"));
            }
        }
    }
}

fn general_step_checks(
    idx: usize,
    before: &ActiveState,
    after: &SolverState,
    report: &mut InvariantReport,
) {
    let SolverState::Active(after) = after else {
        // Terminal successors carry no components to compare.
        return;
    };

    // IG:IG — the E-interface grows (asserted literal set is conserved).
    for lit in before.estate.interface.asserted() {
        if !after.estate.interface.asserted().contains(lit) {
            push(report, idx, "IG:IG", format!("literal {lit} dropped"));
        }
    }
    // IG:HG — the E-history grows.
    for entry in before.estate.history.entries() {
        if !after.estate.history.entries().contains(entry) {
            push(report, idx, "IG:HG", format!("history entry ({}: ...) dropped", entry.0));
        }
    }
    // IG:QG — the quantifier set grows.
    for q in &before.quantifiers {
        if !after.quantifiers.contains(q) {
            push(report, idx, "IG:QG", format!("quantifier {} dropped", q.tag));
        }
    }
    // IG:CG — the clause set grows.
    for c in &before.clauses {
        if !after.clauses.contains(c) {
            push(report, idx, "IG:CG", format!("clause {c} dropped"));
        }
    }
    // IG:VV — verified clauses remain verified.
    for c in &before.clauses {
        if verify_clause(&before.quantifiers, &before.estate.interface, c)
            && !(after.clauses.contains(c)
                && verify_clause(&after.quantifiers, &after.estate.interface, c))
        {
            push(report, idx, "IG:VV", format!("clause {c} lost verification"));
        }
    }
}

// ---------------------------------------------------------------------------
// Set-theory suite
// ---------------------------------------------------------------------------

/// A lookup-table row: a non-unit clause of an axiom body (or of an inner
/// quantifier template), with the binders acting as pattern variables.
struct Row {
    /// Tag of the quantifier whose instantiation produces this clause shape.
    /// Primitive for axiom rows; parameterised (over pattern variables) for
    /// inner-template rows.
    tag: Tag,
    /// Pattern variables, in history-entry order.
    vars: Vec<Symbol>,
    clause: Clause,
}

/// A template for quantifiers introduced at run time: the inner quantifier of
/// a nested axiom with the outer binders as pattern variables.
struct InnerShape {
    outer_tag: Symbol,
    outer_vars: Vec<Symbol>,
    quantifier: TaggedQuantifier,
}

fn settheory_rows() -> (Vec<Row>, Vec<InnerShape>) {
    let b = settheory::bundle();
    let mut rows = Vec::new();
    let mut shapes = Vec::new();
    for axiom in &b.axioms {
        for clause in axiom.body.clauses() {
            if !clause.is_unit() {
                rows.push(Row {
                    tag: axiom.tag.clone(),
                    vars: axiom.var_names(),
                    clause: clause.clone(),
                });
            }
        }
        if let Some(inner) = axiom
            .body
            .clauses()
            .iter()
            .flat_map(|c| c.disjuncts())
            .find_map(|d| d.as_quantifier())
        {
            for clause in inner.body.clauses() {
                if !clause.is_unit() {
                    let mut vars = axiom.var_names();
                    vars.extend(inner.var_names());
                    rows.push(Row { tag: inner.tag.clone(), vars, clause: clause.clone() });
                }
            }
            shapes.push(InnerShape {
                outer_tag: axiom.tag.base_name(),
                outer_vars: axiom.var_names(),
                quantifier: inner.clone(),
            });
        }
    }
    (rows, shapes)
}

fn settheory_state_checks(
    idx: usize,
    s: &ActiveState,
    initial_w: &[TaggedQuantifier],
    report: &mut InvariantReport,
) {
    let (rows, shapes) = settheory_rows();
    let entries = s.estate.history.entries();

    // IP:IC and IP:OC over the current clauses.
    for clause in &s.clauses {
        let mut matched_any = false;
        let mut origin_found = false;
        for row in &rows {
            for subst in match_clause(&row.clause, clause) {
                let Some(terms) = assignment(&row.vars, &subst) else { continue };
                matched_any = true;
                let entry_tag = match &row.tag {
                    Tag::Prim(_) => row.tag.clone(),
                    Tag::Param(base, params) => Tag::Param(
                        base.clone(),
                        params.iter().map(|p| p.substitute(&subst)).collect(),
                    ),
                };
                let entry_terms: Vec<Term> = match &row.tag {
                    Tag::Prim(_) => terms,
                    // Inner rows: the entry records only the inner binders.
                    Tag::Param(..) => {
                        let inner_n = row.vars.len() - entry_tag.params().len();
                        terms[terms.len() - inner_n..].to_vec()
                    }
                };
                if entries.contains(&(entry_tag, entry_terms)) {
                    origin_found = true;
                }
            }
        }
        if !matched_any {
            push(report, idx, "IP:IC", format!("clause {clause} matches no lookup-table row"));
        } else if !origin_found {
            push(report, idx, "IP:OC", format!("clause {clause} has no originating history entry"));
        }
    }

    // IP:FQ — quantifiers inside clauses have one of the inner shapes, with
    // the corresponding outer entry recorded.
    for clause in &s.clauses {
        for d in clause.disjuncts() {
            if let ExtLiteral::Quant(q) = d {
                check_inner_shape(idx, "IP:FQ", q, &shapes, entries, report);
            }
        }
    }

    // IP:IQ — quantifiers beyond the initial ones are recorded inner
    // quantifiers.
    for q in &s.quantifiers {
        if !initial_w.contains(q) {
            check_inner_shape(idx, "IP:IQ", q, &shapes, entries, report);
        }
    }
}

fn check_inner_shape(
    idx: usize,
    check: &'static str,
    q: &TaggedQuantifier,
    shapes: &[InnerShape],
    entries: &[(Tag, Vec<Term>)],
    report: &mut InvariantReport,
) {
    for shape in shapes {
        let Tag::Param(base, params) = &q.tag else { continue };
        if base.as_ref() != &Tag::Prim(shape.outer_tag) {
            continue;
        }
        if params.len() != shape.outer_vars.len() || params.iter().any(|p| !p.is_ground()) {
            continue;
        }
        let subst: HashMap<Symbol, Term> =
            shape.outer_vars.iter().copied().zip(params.iter().copied()).collect();
        if &shape.quantifier.substitute(&subst) == q {
            if entries.contains(&(Tag::Prim(shape.outer_tag), params.clone())) {
                return;
            }
            push(
                report,
                idx,
                check,
                format!("quantifier {} lacks its outer history entry", q.tag),
            );
            return;
        }
    }
    push(report, idx, check, format!("quantifier {} matches no inner shape", q.tag));
}

/// IP:BS — the overapproximated pre-step basis is a candidate basis for the
/// post-step interface: every class of a measured sort after the step
/// contains some member of O1(B) or O2(B). Sorts outside the measure's
/// partition (Bool in particular) carry no match-relevant terms and are not
/// covered by the overapproximations.
fn basis_after_step(
    idx: usize,
    before: &ActiveState,
    after: &ActiveState,
    report: &mut InvariantReport,
) {
    let cfg = MeasureConfig::settheory();
    let basis_before = before.estate.interface.basis_unchecked();
    let (o1, o2) = overapprox_basis(&basis_before, &cfg);
    if let Some(detail) = candidate_basis_gap(&after.estate.interface, &o1, &o2, &cfg) {
        push(report, idx, "IP:BS", detail);
    }
}

/// Shared core of IP:BS and IP:IB: the first measured-sort class of `e` not
/// covered by the candidate set, if any.
pub fn candidate_basis_gap(
    e: &EInterface,
    o1: &[Term],
    o2: &[Term],
    cfg: &MeasureConfig,
) -> Option<String> {
    'class: for class in e.classes() {
        let sort = e.class_sort(class);
        if sort != cfg.set_sort && sort != cfg.elem_sort {
            continue;
        }
        for candidate in o1.iter().chain(o2) {
            if e.lookup(*candidate) == Some(class) {
                continue 'class;
            }
        }
        return Some(format!(
            "class of {} not covered by the overapproximated basis",
            e.rep(class)
        ));
    }
    None
}

/// IP:IB as a standalone check: the overapproximated initial basis is a
/// candidate basis for the interface of every state of the trace.
pub fn check_inherited_basis(trace: &Trace, cfg: &MeasureConfig) -> Vec<InvariantViolation> {
    let mut out = Vec::new();
    let Some(initial) = trace.initial.as_active() else { return out };
    let basis0 = initial.estate.interface.basis_unchecked();
    let (o1, o2) = overapprox_basis(&basis0, cfg);
    for (idx, state) in trace.states().enumerate() {
        if let SolverState::Active(a) = state {
            if let Some(detail) = candidate_basis_gap(&a.estate.interface, &o1, &o2, cfg) {
                out.push(InvariantViolation { state: idx, check: "IP:IB", detail });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// First-order matching of lookup-table rows against concrete clauses
// ---------------------------------------------------------------------------

fn assignment(vars: &[Symbol], subst: &HashMap<Symbol, Term>) -> Option<Vec<Term>> {
    vars.iter().map(|v| subst.get(v).copied()).collect()
}

/// All substitutions under which the pattern clause equals the concrete
/// clause. Clauses are sets, so pattern disjuncts are assigned to concrete
/// disjuncts bijectively with backtracking.
fn match_clause(pattern: &Clause, concrete: &Clause) -> Vec<HashMap<Symbol, Term>> {
    if pattern.len() != concrete.len() {
        return Vec::new();
    }
    let mut results = Vec::new();
    let mut used = vec![false; concrete.len()];
    match_disjuncts(
        pattern.disjuncts(),
        concrete.disjuncts(),
        &mut used,
        HashMap::new(),
        &mut results,
    );
    // The same clause can match one row several ways; keep them all, the
    // caller treats candidates disjunctively.
    results
}

fn match_disjuncts(
    patterns: &[ExtLiteral],
    concretes: &[ExtLiteral],
    used: &mut Vec<bool>,
    subst: HashMap<Symbol, Term>,
    results: &mut Vec<HashMap<Symbol, Term>>,
) {
    let Some((p, rest)) = patterns.split_first() else {
        results.push(subst);
        return;
    };
    for (i, c) in concretes.iter().enumerate() {
        if used[i] {
            continue;
        }
        for extended in match_ext(p, c, &subst) {
            used[i] = true;
            match_disjuncts(rest, concretes, used, extended, results);
            used[i] = false;
        }
    }
}

fn match_ext(
    p: &ExtLiteral,
    c: &ExtLiteral,
    subst: &HashMap<Symbol, Term>,
) -> Vec<HashMap<Symbol, Term>> {
    match (p, c) {
        (ExtLiteral::Lit(pl), ExtLiteral::Lit(cl)) => match_literal(pl, cl, subst),
        (ExtLiteral::Quant(pq), ExtLiteral::Quant(cq)) => match_quantifier(pq, cq, subst),
        _ => Vec::new(),
    }
}

fn match_literal(
    p: &Literal,
    c: &Literal,
    subst: &HashMap<Symbol, Term>,
) -> Vec<HashMap<Symbol, Term>> {
    if p.positive() != c.positive() {
        return Vec::new();
    }
    let mut out = Vec::new();
    // Literal sides are stored in structural order, which substitution can
    // flip; try both orientations.
    for (plhs, prhs, clhs, crhs) in [
        (p.lhs(), p.rhs(), c.lhs(), c.rhs()),
        (p.lhs(), p.rhs(), c.rhs(), c.lhs()),
    ] {
        let mut attempt = subst.clone();
        if match_term(plhs, clhs, &mut attempt) && match_term(prhs, crhs, &mut attempt) {
            if !out.contains(&attempt) {
                out.push(attempt);
            }
        }
    }
    out
}

fn match_quantifier(
    p: &TaggedQuantifier,
    c: &TaggedQuantifier,
    subst: &HashMap<Symbol, Term>,
) -> Vec<HashMap<Symbol, Term>> {
    // Match the tag parameters, then verify the whole quantifier by
    // substitution. Pattern variables never collide with the inner binders.
    let (Tag::Param(pbase, pparams), Tag::Param(cbase, cparams)) = (&p.tag, &c.tag) else {
        return if p == c { vec![subst.clone()] } else { Vec::new() };
    };
    if pbase != cbase || pparams.len() != cparams.len() {
        return Vec::new();
    }
    let mut attempt = subst.clone();
    for (pp, cp) in pparams.iter().zip(cparams) {
        if !match_term(*pp, *cp, &mut attempt) {
            return Vec::new();
        }
    }
    if &p.substitute(&attempt) == c {
        vec![attempt]
    } else {
        Vec::new()
    }
}

fn match_term(pattern: Term, concrete: Term, subst: &mut HashMap<Symbol, Term>) -> bool {
    if let Some((name, sort)) = pattern.as_var() {
        if concrete.sort() != sort || !concrete.is_ground() {
            return false;
        }
        return match subst.get(&name) {
            Some(bound) => *bound == concrete,
            None => {
                subst.insert(name, concrete);
                true
            }
        };
    }
    match (pattern.as_app(), concrete.as_app()) {
        (Some((pf, pargs)), Some((cf, cargs))) => {
            pf == cf
                && pargs
                    .iter()
                    .zip(cargs)
                    .all(|(pa, ca)| match_term(*pa, *ca, subst))
        }
        _ => false,
    }
}

/// Whether a quantifier set is exactly the bundled set-theory axiomatisation;
/// the set-theory suite only applies then.
pub fn is_settheory_problem(initial_w: &[TaggedQuantifier]) -> bool {
    let b = settheory::bundle();
    initial_w.len() == b.axioms.len() && initial_w.iter().all(|q| b.axioms.contains(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Clause, Ecnf, ExtLiteral, Literal};
    use crate::matching::{EHistory, EState};
    use crate::settheory::bundle;
    use crate::term::{Func, Sort};

    fn cst(name: &str, sort: Sort) -> Term {
        Term::constant(Func::new(Symbol::new(name), vec![], sort))
    }

    fn single_state_trace(state: ActiveState) -> Trace {
        Trace { initial: SolverState::Active(state), steps: Vec::new() }
    }

    #[test]
    fn unit_clause_in_a_violates_na() {
        let b = bundle();
        let member = b.function("member");
        let t0 = cst("t0", b.elem_sort);
        let a = cst("a", b.set_sort);
        let state = ActiveState {
            quantifiers: b.axioms.clone(),
            clauses: vec![Clause::new(vec![ExtLiteral::Lit(Literal::pred(
                Term::app(member, vec![t0, a]),
                true,
            ))])],
            estate: EState::new(EInterface::new()),
        };
        let report =
            check_invariants(&single_state_trace(state), &[Suite::General], Modes::default());
        assert!(report.violations.iter().any(|v| v.check == "IG:NA"));
    }

    #[test]
    fn dangling_history_entry_violates_eq() {
        let b = bundle();
        let t0 = cst("t0", b.elem_sort);
        let state = ActiveState {
            quantifiers: Vec::new(),
            clauses: Vec::new(),
            estate: EState {
                interface: EInterface::new(),
                history: EHistory::new().record(Tag::prim("ghost"), vec![t0]),
            },
        };
        let report =
            check_invariants(&single_state_trace(state), &[Suite::General], Modes::default());
        assert!(report.violations.iter().any(|v| v.check == "IG:EQ"));
    }

    #[test]
    fn union_elim_instance_clause_requires_history_entry() {
        let b = bundle();
        let member = b.function("member");
        let union = b.function("union");
        let t0 = cst("t0", b.elem_sort);
        let a = cst("a", b.set_sort);
        let bb = cst("b", b.set_sort);
        let u = Term::app(union, vec![a, bb]);
        let clause = Clause::new(vec![
            ExtLiteral::Lit(Literal::pred(Term::app(member, vec![t0, u]), false)),
            ExtLiteral::Lit(Literal::pred(Term::app(member, vec![t0, a]), true)),
            ExtLiteral::Lit(Literal::pred(Term::app(member, vec![t0, bb]), true)),
        ]);
        let interface = EInterface::new().extend(&[Literal::pred(
            Term::app(member, vec![t0, u]),
            true,
        )]);
        let mut state = ActiveState {
            quantifiers: b.axioms.clone(),
            clauses: vec![clause],
            estate: EState::new(interface),
        };
        let report = check_invariants(
            &single_state_trace(state.clone()),
            &[Suite::SetTheory],
            Modes::default(),
        );
        assert!(report.violations.iter().any(|v| v.check == "IP:OC"));

        // With the entry recorded, the clause has its origin.
        state.estate.history =
            state.estate.history.record(Tag::prim("union-elim"), vec![a, bb, t0]);
        let report = check_invariants(
            &single_state_trace(state),
            &[Suite::SetTheory],
            Modes::default(),
        );
        assert!(report.violations.iter().all(|v| v.check != "IP:OC"));
    }

    #[test]
    fn foreign_clause_shape_violates_ic() {
        let b = bundle();
        let a = cst("a", b.set_sort);
        let bb = cst("b", b.set_sort);
        let cc = cst("c", b.set_sort);
        let clause = Clause::new(vec![
            ExtLiteral::Lit(Literal::equality(a, bb)),
            ExtLiteral::Lit(Literal::equality(a, cc)),
        ]);
        let state = ActiveState {
            quantifiers: b.axioms.clone(),
            clauses: vec![clause],
            estate: EState::new(EInterface::new()),
        };
        let report = check_invariants(
            &single_state_trace(state),
            &[Suite::SetTheory],
            Modes::default(),
        );
        assert!(report.violations.iter().any(|v| v.check == "IP:IC"));
    }

    #[test]
    fn inherited_inner_quantifier_needs_its_entry() {
        let b = bundle();
        let a = cst("a", b.set_sort);
        let bb = cst("b", b.set_sort);
        let subset_elim = b.axiom("subset-elim");
        let inner = subset_elim
            .body
            .clauses()
            .iter()
            .flat_map(|c| c.disjuncts())
            .find_map(|d| d.as_quantifier())
            .unwrap();
        let subst: HashMap<Symbol, Term> = [
            (Symbol::new("s1"), a),
            (Symbol::new("s2"), bb),
        ]
        .into_iter()
        .collect();
        let concrete = inner.substitute(&subst);

        let mut quantifiers = b.axioms.clone();
        quantifiers.push(concrete);
        quantifiers.sort();
        let state = ActiveState {
            quantifiers,
            clauses: Vec::new(),
            estate: EState::new(EInterface::new()),
        };
        let trace = Trace {
            initial: SolverState::Active(ActiveState {
                quantifiers: b.axioms.clone(),
                clauses: Vec::new(),
                estate: EState::new(EInterface::new()),
            }),
            steps: vec![(
                crate::transitions::StepChoice::Sat,
                SolverState::Active(state),
            )],
        };
        let report = check_invariants(&trace, &[Suite::SetTheory], Modes::default());
        assert!(report.violations.iter().any(|v| v.check == "IP:IQ"));

        let _ = Ecnf::default();
    }

    #[test]
    fn bundle_initial_state_is_clean() {
        let b = bundle();
        let member = b.function("member");
        let t0 = cst("t0", b.elem_sort);
        let a = cst("a", b.set_sort);
        let s = crate::transitions::initial_state(
            &b.axioms,
            &[Literal::pred(Term::app(member, vec![t0, a]), true)],
        );
        let trace = Trace { initial: s, steps: Vec::new() };
        let report = check_invariants(
            &trace,
            &[Suite::General, Suite::SetTheory],
            Modes::default(),
        );
        assert!(report.ok(), "{:?}", report.violations);
        assert!(is_settheory_problem(
            &trace.initial.as_active().unwrap().quantifiers
        ));
        let ib = check_inherited_basis(&trace, &MeasureConfig::settheory());
        assert!(ib.is_empty());
    }
}
