//! Literals, tags, triggers, tagged quantifiers and extended CNF.
//!
//! Clauses and formulas are kept as sorted, duplicate-free sequences so the
//! set semantics of the transition rules falls out of plain equality.

use std::collections::HashMap;
use std::fmt;

use crate::term::{Sort, Symbol, Term};

/// An equality-encoded literal. A positive predicate application `P` is the
/// equality `P = true`, a negated one is `P = false`; `positive` distinguishes
/// equalities from disequalities. The two sides are stored in structural
/// order, which makes literal values canonical.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    positive: bool,
    lhs: Term,
    rhs: Term,
}

impl Literal {
    pub fn equality(t1: Term, t2: Term) -> Literal {
        assert_eq!(t1.sort(), t2.sort(), "equality between different sorts");
        let (lhs, rhs) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        Literal { positive: true, lhs, rhs }
    }

    pub fn disequality(t1: Term, t2: Term) -> Literal {
        let mut l = Literal::equality(t1, t2);
        l.positive = false;
        l
    }

    /// Encodes a predicate application: `pred(p, true)` is `P = ⊤` and
    /// `pred(p, false)` is `P = ⊥`. Both are positive equalities.
    pub fn pred(p: Term, value: bool) -> Literal {
        assert_eq!(p.sort(), Sort::bool(), "predicate literal must be Bool-sorted");
        Literal::equality(p, if value { Term::truth() } else { Term::falsity() })
    }

    pub fn positive(&self) -> bool {
        self.positive
    }

    pub fn lhs(&self) -> Term {
        self.lhs
    }

    pub fn rhs(&self) -> Term {
        self.rhs
    }

    pub fn is_ground(&self) -> bool {
        self.lhs.is_ground() && self.rhs.is_ground()
    }

    pub fn substitute(&self, map: &HashMap<Symbol, Term>) -> Literal {
        let l = self.lhs.substitute(map);
        let r = self.rhs.substitute(map);
        if self.positive {
            Literal::equality(l, r)
        } else {
            Literal::disequality(l, r)
        }
    }

    pub fn free_vars(&self) -> Vec<(Symbol, Sort)> {
        let mut vars = self.lhs.free_vars();
        for v in self.rhs.free_vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Predicate encodings print in their surface form.
        let (lhs, rhs) = (self.lhs, self.rhs);
        if self.positive && rhs == Term::truth() && lhs != Term::truth() {
            return write!(f, "{lhs}");
        }
        if self.positive && lhs == Term::truth() && rhs != Term::truth() {
            return write!(f, "{rhs}");
        }
        if self.positive && rhs == Term::falsity() && lhs != Term::falsity() {
            return write!(f, "(not {lhs})");
        }
        if self.positive && lhs == Term::falsity() && rhs != Term::falsity() {
            return write!(f, "(not {rhs})");
        }
        if self.positive {
            write!(f, "(= {lhs} {rhs})")
        } else {
            write!(f, "(not (= {lhs} {rhs}))")
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Quantifier tags: a primitive name, or a primitive name applied to the
/// ground terms an enclosing quantifier was instantiated with.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Prim(Symbol),
    Param(Box<Tag>, Vec<Term>),
}

impl Tag {
    pub fn prim(name: &str) -> Tag {
        Tag::Prim(Symbol::new(name))
    }

    pub fn param(base: Tag, params: Vec<Term>) -> Tag {
        Tag::Param(Box::new(base), params)
    }

    pub fn base_name(&self) -> Symbol {
        match self {
            Tag::Prim(s) => *s,
            Tag::Param(base, _) => base.base_name(),
        }
    }

    pub fn params(&self) -> &[Term] {
        match self {
            Tag::Prim(_) => &[],
            Tag::Param(_, params) => params,
        }
    }

    pub fn is_parameterised(&self) -> bool {
        matches!(self, Tag::Param(..))
    }

    pub fn substitute(&self, map: &HashMap<Symbol, Term>) -> Tag {
        match self {
            Tag::Prim(_) => self.clone(),
            Tag::Param(base, params) => Tag::Param(
                base.clone(),
                params.iter().map(|t| t.substitute(map)).collect(),
            ),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Prim(s) => write!(f, "{s}"),
            Tag::Param(base, params) => {
                write!(f, "{base}(")?;
                for (i, p) in params.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One trigger set: a conjunction of patterns that must all be known (under a
/// common substitution) for an instantiation to be enabled. Stored sorted and
/// duplicate-free.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriggerSet(Vec<Term>);

impl TriggerSet {
    pub fn new(mut terms: Vec<Term>) -> TriggerSet {
        terms.sort();
        terms.dedup();
        TriggerSet(terms)
    }

    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn substitute(&self, map: &HashMap<Symbol, Term>) -> TriggerSet {
        TriggerSet::new(self.0.iter().map(|t| t.substitute(map)).collect())
    }
}

impl fmt::Display for TriggerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

/// A tagged quantifier: bound variables, alternative trigger sets, and an
/// ECNF body.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedQuantifier {
    pub tag: Tag,
    pub vars: Vec<(Symbol, Sort)>,
    pub triggers: Vec<TriggerSet>,
    pub body: Ecnf,
}

impl TaggedQuantifier {
    pub fn var_sorts(&self) -> Vec<Sort> {
        self.vars.iter().map(|(_, s)| *s).collect()
    }

    pub fn var_names(&self) -> Vec<Symbol> {
        self.vars.iter().map(|(n, _)| *n).collect()
    }

    /// Substitutes ground terms for free variables throughout the triggers,
    /// body and the tag parameters of inner quantifiers. Bound variables of
    /// this quantifier shadow nothing (shadowing is rejected at parse time),
    /// so the map simply drops entries for this quantifier's own binders.
    pub fn substitute(&self, map: &HashMap<Symbol, Term>) -> TaggedQuantifier {
        let mut inner = map.clone();
        for (name, _) in &self.vars {
            inner.remove(name);
        }
        TaggedQuantifier {
            tag: self.tag.substitute(&inner),
            vars: self.vars.clone(),
            triggers: self.triggers.iter().map(|t| t.substitute(&inner)).collect(),
            body: self.body.substitute_map(&inner),
        }
    }
}

impl fmt::Display for TaggedQuantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(forall#{} (", self.tag)?;
        for (i, (name, sort)) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({name} {sort})")?;
        }
        write!(f, ")")?;
        for trig in &self.triggers {
            write!(f, " {trig}")?;
        }
        write!(f, " {})", self.body)
    }
}

impl fmt::Debug for TaggedQuantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An extended literal: a plain literal or a tagged quantifier.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtLiteral {
    Lit(Literal),
    Quant(TaggedQuantifier),
}

impl ExtLiteral {
    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            ExtLiteral::Lit(l) => Some(l),
            ExtLiteral::Quant(_) => None,
        }
    }

    pub fn as_quantifier(&self) -> Option<&TaggedQuantifier> {
        match self {
            ExtLiteral::Lit(_) => None,
            ExtLiteral::Quant(q) => Some(q),
        }
    }

    pub fn substitute(&self, map: &HashMap<Symbol, Term>) -> ExtLiteral {
        match self {
            ExtLiteral::Lit(l) => ExtLiteral::Lit(l.substitute(map)),
            ExtLiteral::Quant(q) => ExtLiteral::Quant(q.substitute(map)),
        }
    }
}

impl fmt::Display for ExtLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtLiteral::Lit(l) => write!(f, "{l}"),
            ExtLiteral::Quant(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for ExtLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An extended clause: a disjunctive set of extended literals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause(Vec<ExtLiteral>);

impl Clause {
    pub fn new(mut disjuncts: Vec<ExtLiteral>) -> Clause {
        assert!(!disjuncts.is_empty(), "clauses are non-empty");
        disjuncts.sort();
        disjuncts.dedup();
        Clause(disjuncts)
    }

    pub fn disjuncts(&self) -> &[ExtLiteral] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.len() == 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn substitute(&self, map: &HashMap<Symbol, Term>) -> Clause {
        Clause::new(self.0.iter().map(|d| d.substitute(map)).collect())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(or")?;
        for d in &self.0 {
            write!(f, " {d}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Extended conjunctive normal form: a conjunctive set of clauses.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ecnf(Vec<Clause>);

impl Ecnf {
    pub fn new(mut clauses: Vec<Clause>) -> Ecnf {
        clauses.sort();
        clauses.dedup();
        Ecnf(clauses)
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.0
    }

    fn substitute_map(&self, map: &HashMap<Symbol, Term>) -> Ecnf {
        Ecnf::new(self.0.iter().map(|c| c.substitute(map)).collect())
    }
}

impl fmt::Display for Ecnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(and")?;
        for c in &self.0 {
            write!(f, " {c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Ecnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SubstError {
    #[error("substitution arity mismatch: {vars} variables, {terms} terms")]
    Arity { vars: usize, terms: usize },
    #[error("substitution for {var} has sort {got}, expected {expected}")]
    SortMismatch { var: Symbol, expected: Sort, got: Sort },
    #[error("substitution for {var} is not ground: {term}")]
    NotGround { var: Symbol, term: Term },
}

/// Instantiates a quantifier body: replaces each variable by the matching
/// ground term in literals, in inner quantifiers' triggers and bodies, and in
/// inner tag parameters.
pub fn substitute(
    body: &Ecnf,
    vars: &[(Symbol, Sort)],
    terms: &[Term],
) -> Result<Ecnf, SubstError> {
    if vars.len() != terms.len() {
        return Err(SubstError::Arity { vars: vars.len(), terms: terms.len() });
    }
    let mut map = HashMap::new();
    for ((name, sort), term) in vars.iter().zip(terms) {
        if !term.is_ground() {
            return Err(SubstError::NotGround { var: *name, term: *term });
        }
        if term.sort() != *sort {
            return Err(SubstError::SortMismatch { var: *name, expected: *sort, got: term.sort() });
        }
        map.insert(*name, *term);
    }
    Ok(body.substitute_map(&map))
}

/// Partitions a set of extended literals into tagged quantifiers and plain
/// literals. The two halves cover the input and never overlap.
pub fn partition_extended(units: &[ExtLiteral]) -> (Vec<TaggedQuantifier>, Vec<Literal>) {
    let mut quants = Vec::new();
    let mut lits = Vec::new();
    for u in units {
        match u {
            ExtLiteral::Quant(q) => quants.push(q.clone()),
            ExtLiteral::Lit(l) => lits.push(*l),
        }
    }
    (quants, lits)
}

/// One violated trigger restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerViolation {
    /// Tag of the quantifier the violation was found in (inner quantifiers
    /// are validated recursively).
    pub tag: Tag,
    pub trigger_set: usize,
    pub detail: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// The trigger set never mentions this quantified variable.
    VariableNotCovered(Symbol),
    /// A trigger term contains no quantified variable.
    NoQuantifiedVariable(Term),
    /// A trigger term is not (and contains no) uninterpreted function
    /// application, e.g. a bare variable.
    NoFunctionApplication(Term),
    /// A trigger term mentions an interpreted symbol.
    InterpretedSymbol(Term),
    /// Structural defects: empty trigger list, empty binder list.
    Malformed(&'static str),
}

impl fmt::Display for TriggerViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "quantifier {}, trigger set {}: ", self.tag, self.trigger_set)?;
        match &self.detail {
            ViolationKind::VariableNotCovered(v) => write!(f, "variable {v} not covered"),
            ViolationKind::NoQuantifiedVariable(t) => {
                write!(f, "trigger term {t} contains no quantified variable")
            }
            ViolationKind::NoFunctionApplication(t) => {
                write!(f, "trigger term {t} has no uninterpreted function application")
            }
            ViolationKind::InterpretedSymbol(t) => {
                write!(f, "trigger term {t} uses an interpreted symbol")
            }
            ViolationKind::Malformed(msg) => write!(f, "{msg}"),
        }
    }
}

/// Checks the trigger restrictions on a quantifier and, recursively, on every
/// inner quantifier of its body. Returns the empty list when all hold.
pub fn validate_quantifier(q: &TaggedQuantifier) -> Vec<TriggerViolation> {
    let mut out = Vec::new();
    validate_into(q, &mut out);
    out
}

fn validate_into(q: &TaggedQuantifier, out: &mut Vec<TriggerViolation>) {
    if q.vars.is_empty() {
        out.push(TriggerViolation {
            tag: q.tag.clone(),
            trigger_set: 0,
            detail: ViolationKind::Malformed("quantifier binds no variables"),
        });
    }
    if q.triggers.is_empty() {
        out.push(TriggerViolation {
            tag: q.tag.clone(),
            trigger_set: 0,
            detail: ViolationKind::Malformed("quantifier has no trigger sets"),
        });
    }
    for (idx, trig) in q.triggers.iter().enumerate() {
        for (name, _) in &q.vars {
            if !trig.terms().iter().any(|t| t.contains_var(*name)) {
                out.push(TriggerViolation {
                    tag: q.tag.clone(),
                    trigger_set: idx,
                    detail: ViolationKind::VariableNotCovered(*name),
                });
            }
        }
        for term in trig.terms() {
            if !q.vars.iter().any(|(name, _)| term.contains_var(*name)) {
                out.push(TriggerViolation {
                    tag: q.tag.clone(),
                    trigger_set: idx,
                    detail: ViolationKind::NoQuantifiedVariable(*term),
                });
            }
            if term.is_var() {
                out.push(TriggerViolation {
                    tag: q.tag.clone(),
                    trigger_set: idx,
                    detail: ViolationKind::NoFunctionApplication(*term),
                });
            } else if contains_interpreted(*term) {
                out.push(TriggerViolation {
                    tag: q.tag.clone(),
                    trigger_set: idx,
                    detail: ViolationKind::InterpretedSymbol(*term),
                });
            }
        }
    }
    for clause in q.body.clauses() {
        for d in clause.disjuncts() {
            if let ExtLiteral::Quant(inner) = d {
                validate_into(inner, out);
            }
        }
    }
}

fn contains_interpreted(t: Term) -> bool {
    // Equality is represented at the literal level and can never occur inside
    // a term; this guards declared-interpreted symbols for future extensions.
    match t.as_app() {
        None => false,
        Some((f, args)) => f.interpreted() || args.iter().any(|a| contains_interpreted(*a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Func;

    fn sig() -> (Sort, Sort, Func, Func) {
        let t = Sort::new("T");
        let set = Sort::new("SetT");
        let member = Func::new(Symbol::new("member"), vec![t, set], Sort::bool());
        let union = Func::new(Symbol::new("union"), vec![set, set], set);
        (t, set, member, union)
    }

    fn quant(vars: Vec<(Symbol, Sort)>, triggers: Vec<TriggerSet>, body: Ecnf) -> TaggedQuantifier {
        TaggedQuantifier { tag: Tag::prim("q"), vars, triggers, body }
    }

    #[test]
    fn union_elim_style_triggers_validate() {
        let (t, set, member, union) = sig();
        let x = Term::var(Symbol::new("x"), t);
        let s1 = Term::var(Symbol::new("s1"), set);
        let s2 = Term::var(Symbol::new("s2"), set);
        let u = Term::app(union, vec![s1, s2]);
        let q = quant(
            vec![(Symbol::new("s1"), set), (Symbol::new("s2"), set), (Symbol::new("x"), t)],
            vec![
                TriggerSet::new(vec![Term::app(member, vec![x, u])]),
                TriggerSet::new(vec![u, Term::app(member, vec![x, s1])]),
                TriggerSet::new(vec![u, Term::app(member, vec![x, s2])]),
            ],
            Ecnf::new(vec![Clause::new(vec![ExtLiteral::Lit(Literal::pred(
                Term::app(member, vec![x, s1]),
                true,
            ))])]),
        );
        assert!(validate_quantifier(&q).is_empty());
    }

    #[test]
    fn bare_variable_trigger_is_rejected() {
        let (t, _, member, _) = sig();
        let x = Term::var(Symbol::new("x"), t);
        let s = Term::var(Symbol::new("s"), Sort::new("SetT"));
        let q = quant(
            vec![(Symbol::new("x"), t)],
            vec![TriggerSet::new(vec![x])],
            Ecnf::new(vec![Clause::new(vec![ExtLiteral::Lit(Literal::pred(
                Term::app(member, vec![x, s]),
                false,
            ))])]),
        );
        let violations = validate_quantifier(&q);
        assert!(violations
            .iter()
            .any(|v| matches!(v.detail, ViolationKind::NoFunctionApplication(_))));
    }

    #[test]
    fn uncovered_variable_is_reported() {
        let (t, set, member, _) = sig();
        let x = Term::var(Symbol::new("x"), t);
        let s1 = Term::var(Symbol::new("s1"), set);
        let q = quant(
            vec![
                (Symbol::new("s1"), set),
                (Symbol::new("s2"), set),
                (Symbol::new("x"), t),
            ],
            vec![TriggerSet::new(vec![Term::app(member, vec![x, s1])])],
            Ecnf::new(vec![Clause::new(vec![ExtLiteral::Lit(Literal::pred(
                Term::app(member, vec![x, s1]),
                true,
            ))])]),
        );
        let violations = validate_quantifier(&q);
        assert_eq!(violations.len(), 1);
        assert_eq!(
            violations[0].detail,
            ViolationKind::VariableNotCovered(Symbol::new("s2"))
        );
    }

    #[test]
    fn partition_covers_and_never_overlaps() {
        let (t, set, member, _) = sig();
        let x = Term::constant(Func::new(Symbol::new("t0"), vec![], t));
        let a = Term::constant(Func::new(Symbol::new("a"), vec![], set));
        let lit = Literal::pred(Term::app(member, vec![x, a]), true);
        let xq = Term::var(Symbol::new("x"), t);
        let q = quant(
            vec![(Symbol::new("x"), t)],
            vec![TriggerSet::new(vec![Term::app(member, vec![xq, a])])],
            Ecnf::new(vec![Clause::new(vec![ExtLiteral::Lit(Literal::pred(
                Term::app(member, vec![xq, a]),
                false,
            ))])]),
        );
        let units = vec![ExtLiteral::Lit(lit), ExtLiteral::Quant(q.clone())];
        let (quants, lits) = partition_extended(&units);
        assert_eq!(quants, vec![q]);
        assert_eq!(lits, vec![lit]);
        assert_eq!(quants.len() + lits.len(), units.len());

        let (quants, lits) = partition_extended(&[]);
        assert!(quants.is_empty() && lits.is_empty());
    }

    #[test]
    fn substitute_rejects_arity_and_sort_mismatches() {
        let (t, set, member, _) = sig();
        let x = Term::var(Symbol::new("x"), t);
        let a = Term::constant(Func::new(Symbol::new("a"), vec![], set));
        let body = Ecnf::new(vec![Clause::new(vec![ExtLiteral::Lit(Literal::pred(
            Term::app(member, vec![x, a]),
            true,
        ))])]);
        let vars = [(Symbol::new("x"), t)];
        assert!(matches!(substitute(&body, &vars, &[]), Err(SubstError::Arity { .. })));
        assert!(matches!(
            substitute(&body, &vars, &[a]),
            Err(SubstError::SortMismatch { .. })
        ));
        // Empty substitution leaves the body unchanged.
        let same = substitute(&body, &[], &[]).unwrap();
        assert_eq!(same, body);
    }
}
