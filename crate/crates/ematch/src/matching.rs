//! E-histories, history-enabled E-match checking, and enumeration of the
//! enabled E-matches of a state.
//!
//! Matching is performed modulo equivalence classes: each trigger pattern is
//! matched independently against the e-nodes of the interface, and the
//! per-pattern substitutions are joined on compatible variable bindings.
//! Substitutions are then canonicalised to basis representatives, so the
//! enumerator returns one match per equivalence class of enabled
//! instantiations.

use std::collections::HashMap;
use std::fmt;

use crate::einterface::{tags_equivalent, ClassId, EInterface};
use crate::formula::{Tag, TaggedQuantifier};
use crate::term::{Symbol, Term};

/// Whether tag equivalence is consulted when filtering against the history
/// and when joining quantifiers into the current set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatchMode {
    Plain,
    Optimized,
}

/// The instantiation ledger: one entry per performed instantiation.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct EHistory {
    entries: Vec<(Tag, Vec<Term>)>,
}

impl EHistory {
    pub fn new() -> EHistory {
        EHistory::default()
    }

    pub fn entries(&self) -> &[(Tag, Vec<Term>)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Set union with a single pair.
    pub fn record(&self, tag: Tag, terms: Vec<Term>) -> EHistory {
        let mut next = self.clone();
        let entry = (tag, terms);
        if !next.entries.contains(&entry) {
            next.entries.push(entry);
            next.entries.sort();
        }
        next
    }
}

impl fmt::Debug for EHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (tag, terms)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({tag}:")?;
            for t in terms {
                write!(f, " {t}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

/// An E-state: the pair of E-interface and E-history.
#[derive(Clone)]
pub struct EState {
    pub interface: EInterface,
    pub history: EHistory,
}

impl EState {
    pub fn new(interface: EInterface) -> EState {
        EState { interface, history: EHistory::new() }
    }
}

/// Decides whether the E-state enables the candidate pair `(tag : terms)`:
/// for every recorded pair under the same tag (in optimized mode, under any
/// equivalent tag), at least one pointwise equality must not be known.
pub fn history_enables(e: &EState, tag: &Tag, terms: &[Term], mode: MatchMode) -> bool {
    for (recorded_tag, recorded_terms) in e.history.entries() {
        let relevant = match mode {
            MatchMode::Plain => recorded_tag == tag,
            MatchMode::Optimized => tags_equivalent(&e.interface, recorded_tag, tag),
        };
        if !relevant || recorded_terms.len() != terms.len() {
            continue;
        }
        let all_equal = terms
            .iter()
            .zip(recorded_terms)
            .all(|(a, b)| e.interface.equal(*a, *b));
        if all_equal {
            return false;
        }
    }
    true
}

/// One enabled instantiation: a quantifier, one ground term per bound
/// variable (basis representatives), and the first trigger set that matched.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EMatch {
    pub quantifier: TaggedQuantifier,
    pub terms: Vec<Term>,
    pub trigger_index: usize,
}

impl fmt::Debug for EMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:", self.quantifier.tag)?;
        for t in &self.terms {
            write!(f, " {t}")?;
        }
        write!(f, ") via trigger {}", self.trigger_index)
    }
}

/// All enabled E-matches of the given quantifier set against an E-state,
/// canonically ordered. One match is returned per equivalence class of
/// enabled instantiations; a match enabled through several trigger sets is
/// reported once with the lowest trigger index.
pub fn enabled_matches(w: &[TaggedQuantifier], e: &EState, mode: MatchMode) -> Vec<EMatch> {
    let mut out = Vec::new();
    for q in w {
        enabled_matches_of(q, e, mode, &mut out);
    }
    out.sort();
    out
}

fn enabled_matches_of(
    q: &TaggedQuantifier,
    e: &EState,
    mode: MatchMode,
    out: &mut Vec<EMatch>,
) {
    let names = q.var_names();
    let mut seen: HashMap<Vec<ClassId>, usize> = HashMap::new();
    let mut candidates: Vec<(Vec<ClassId>, usize)> = Vec::new();
    for (idx, trigger) in q.triggers.iter().enumerate() {
        let mut partial: Vec<HashMap<Symbol, ClassId>> = vec![HashMap::new()];
        for pattern in trigger.terms() {
            let mut joined = Vec::new();
            for binding in &partial {
                match_pattern(&e.interface, *pattern, binding, &mut joined);
            }
            partial = joined;
            if partial.is_empty() {
                break;
            }
        }
        for binding in partial {
            // Trigger restrictions guarantee each bound variable occurs in
            // every trigger set, so the binding is total.
            let classes: Vec<ClassId> = names.iter().map(|n| binding[n]).collect();
            if !seen.contains_key(&classes) {
                seen.insert(classes.clone(), idx);
                candidates.push((classes, idx));
            }
        }
    }
    for (classes, idx) in candidates {
        let terms: Vec<Term> = classes.iter().map(|c| e.interface.rep(*c)).collect();
        if history_enables(e, &q.tag, &terms, mode) {
            out.push(EMatch { quantifier: q.clone(), terms, trigger_index: idx });
        }
    }
}

/// Extends a variable binding so that the instantiated pattern is known,
/// i.e. lands in an existing class. Patterns are matched against e-nodes,
/// which makes the matching work modulo currently-known equalities.
fn match_pattern(
    e: &EInterface,
    pattern: Term,
    binding: &HashMap<Symbol, ClassId>,
    out: &mut Vec<HashMap<Symbol, ClassId>>,
) {
    let (f, args) = pattern
        .as_app()
        .expect("trigger terms are function applications");
    for (arg_classes, _) in e.apps_of(f) {
        let mut extended = binding.clone();
        if match_args(e, args, &arg_classes, &mut extended) {
            out.push(extended);
        }
    }
}

fn match_args(
    e: &EInterface,
    patterns: &[Term],
    classes: &[ClassId],
    binding: &mut HashMap<Symbol, ClassId>,
) -> bool {
    for (pattern, class) in patterns.iter().zip(classes) {
        if !match_one(e, *pattern, *class, binding) {
            return false;
        }
    }
    true
}

fn match_one(
    e: &EInterface,
    pattern: Term,
    class: ClassId,
    binding: &mut HashMap<Symbol, ClassId>,
) -> bool {
    if let Some((name, _)) = pattern.as_var() {
        return match binding.get(&name) {
            Some(bound) => *bound == class,
            None => {
                binding.insert(name, class);
                true
            }
        };
    }
    if pattern.is_ground() {
        return e.lookup(pattern) == Some(class);
    }
    let (f, args) = pattern.as_app().unwrap();
    // Try every e-node of the class with the right head symbol. Branching is
    // possible when a class holds several applications of the same symbol,
    // so unsuccessful sub-matches must not leak bindings.
    for (head, arg_classes) in e.class_enodes(class) {
        if head != f {
            continue;
        }
        let mut attempt = binding.clone();
        if match_args(e, args, &arg_classes, &mut attempt) {
            *binding = attempt;
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Clause, Ecnf, ExtLiteral, Literal, TriggerSet};
    use crate::term::{Func, Sort};

    fn set_sig() -> (Sort, Sort, Func, Func) {
        let t = Sort::new("T");
        let set = Sort::new("SetT");
        let member = Func::new(Symbol::new("member"), vec![t, set], Sort::bool());
        let diff = Func::new(Symbol::new("diff"), vec![set, set], set);
        (t, set, member, diff)
    }

    fn c(name: &str, sort: Sort) -> Term {
        Term::constant(Func::new(Symbol::new(name), vec![], sort))
    }

    /// The Example 2 quantifier: permissive triggers on both member patterns.
    fn permissive_diff(t: Sort, set: Sort, member: Func, diff: Func) -> TaggedQuantifier {
        let x = Term::var(Symbol::new("x"), t);
        let s1 = Term::var(Symbol::new("s1"), set);
        let s2 = Term::var(Symbol::new("s2"), set);
        TaggedQuantifier {
            tag: Tag::prim("diff-notin"),
            vars: vec![
                (Symbol::new("s1"), set),
                (Symbol::new("s2"), set),
                (Symbol::new("x"), t),
            ],
            triggers: vec![TriggerSet::new(vec![
                Term::app(member, vec![x, s1]),
                Term::app(member, vec![x, s2]),
            ])],
            body: Ecnf::new(vec![Clause::new(vec![
                ExtLiteral::Lit(Literal::pred(Term::app(member, vec![x, s2]), false)),
                ExtLiteral::Lit(Literal::pred(
                    Term::app(member, vec![x, Term::app(diff, vec![s1, s2])]),
                    false,
                )),
            ])]),
        }
    }

    /// The Example 1 quantifier: restrictive trigger [diff(s1,s2), member(x,s2)].
    fn restrictive_diff(t: Sort, set: Sort, member: Func, diff: Func) -> TaggedQuantifier {
        let mut q = permissive_diff(t, set, member, diff);
        let x = Term::var(Symbol::new("x"), t);
        let s1 = Term::var(Symbol::new("s1"), set);
        let s2 = Term::var(Symbol::new("s2"), set);
        q.triggers = vec![TriggerSet::new(vec![
            Term::app(diff, vec![s1, s2]),
            Term::app(member, vec![x, s2]),
        ])];
        q
    }

    #[test]
    fn empty_history_enables_everything() {
        let (t, set, member, _) = set_sig();
        let e = EState::new(EInterface::new().extend(&[Literal::pred(
            Term::app(member, vec![c("t", t), c("a", set)]),
            true,
        )]));
        let tag = Tag::prim("q");
        assert!(history_enables(&e, &tag, &[c("a", set)], MatchMode::Plain));
        assert!(history_enables(&e, &tag, &[c("a", set)], MatchMode::Optimized));
    }

    #[test]
    fn recording_is_set_union() {
        let (t, set, _, _) = set_sig();
        let tag = Tag::prim("q");
        let h = EHistory::new();
        let h1 = h.record(tag.clone(), vec![c("b", set), c("a", set), c("t", t)]);
        assert_eq!(h1.len(), 1);
        let h2 = h1.record(tag.clone(), vec![c("b", set), c("a", set), c("t", t)]);
        assert_eq!(h2, h1);
        let h3 = h2.record(tag, vec![c("a", set), c("a", set), c("t", t)]);
        assert_eq!(h3.len(), 2);
    }

    #[test]
    fn example1_equivalent_candidate_is_rejected() {
        let (ts, set, member, diff) = set_sig();
        let (t, a, b, cc) = (c("t", ts), c("a", set), c("b", set), c("c", set));
        let interface = EInterface::new().extend(&[
            Literal::pred(Term::app(member, vec![t, a]), true),
            Literal::disequality(Term::app(diff, vec![b, cc]), b),
            Literal::equality(a, cc),
        ]);
        let tag = Tag::prim("diff-notin");
        let e = EState {
            interface,
            history: EHistory::new().record(tag.clone(), vec![b, a, t]),
        };
        // All three pointwise equalities are known, so (b, c, t) is redundant.
        assert!(!history_enables(&e, &tag, &[b, cc, t], MatchMode::Plain));
        assert!(!history_enables(&e, &tag, &[b, cc, t], MatchMode::Optimized));
        // A genuinely different instantiation stays enabled.
        assert!(history_enables(&e, &tag, &[a, a, t], MatchMode::Plain));
    }

    #[test]
    fn example1_yields_one_match_class() {
        let (ts, set, member, diff) = set_sig();
        let (t, a, b, cc) = (c("t", ts), c("a", set), c("b", set), c("c", set));
        let interface = EInterface::new().extend(&[
            Literal::pred(Term::app(member, vec![t, a]), true),
            Literal::disequality(Term::app(diff, vec![b, cc]), b),
            Literal::equality(a, cc),
        ]);
        let q = restrictive_diff(ts, set, member, diff);
        let e = EState::new(interface);
        let matches = enabled_matches(&[q.clone()], &e, MatchMode::Optimized);
        assert_eq!(matches.len(), 1);
        // Representatives: s1 -> b, s2 -> a (the rep of {a, c}), x -> t.
        assert_eq!(matches[0].terms, vec![b, a, t]);

        // After recording it, nothing is enabled any more.
        let e2 = EState {
            history: e.history.record(q.tag.clone(), matches[0].terms.clone()),
            interface: e.interface,
        };
        assert!(enabled_matches(&[q], &e2, MatchMode::Optimized).is_empty());
    }

    #[test]
    fn example2_initial_state_has_four_matches() {
        let (ts, set, member, diff) = set_sig();
        let (t, a, b, _) = (c("t", ts), c("a", set), c("b", set), c("c", set));
        let interface = EInterface::new().extend(&[
            Literal::pred(Term::app(member, vec![t, a]), true),
            Literal::pred(Term::app(member, vec![t, b]), true),
        ]);
        let q = permissive_diff(ts, set, member, diff);
        let e = EState::new(interface);
        let matches = enabled_matches(&[q], &e, MatchMode::Optimized);
        let tuples: Vec<&[Term]> = matches.iter().map(|m| m.terms.as_slice()).collect();
        assert_eq!(
            tuples,
            vec![
                &[a, a, t][..],
                &[a, b, t][..],
                &[b, a, t][..],
                &[b, b, t][..],
            ]
        );
    }

    #[test]
    fn no_quantifiers_no_matches() {
        let e = EState::new(EInterface::new());
        assert!(enabled_matches(&[], &e, MatchMode::Optimized).is_empty());
    }

    #[test]
    fn optimized_mode_consults_equivalent_tags() {
        let (ts, set, member, _) = set_sig();
        let (t, a, b, cc) = (c("t", ts), c("a", set), c("b", set), c("c", set));
        // b and t must be known for the pointwise tag-parameter equalities.
        let interface = EInterface::new().extend(&[
            Literal::equality(a, cc),
            Literal::pred(Term::app(member, vec![t, b]), true),
        ]);
        let hist_tag = Tag::param(Tag::prim("subset-elim"), vec![a, b]);
        let cand_tag = Tag::param(Tag::prim("subset-elim"), vec![cc, b]);
        let e = EState {
            interface,
            history: EHistory::new().record(hist_tag, vec![t]),
        };
        assert!(!history_enables(&e, &cand_tag, &[t], MatchMode::Optimized));
        assert!(history_enables(&e, &cand_tag, &[t], MatchMode::Plain));
    }
}
