//! The E-interface: decidable judgements over ground (dis)equalities.
//!
//! The contract is the judgement semantics (knownness, known equality, known
//! disequality, inconsistency as least fixed points of the derivation rules),
//! not the data structure. The implementation is a small e-graph: union-find
//! over inserted terms plus a congruence table, rebuilt to a fixed point after
//! every extension. A term is known exactly when its recursive
//! canonicalisation lands in an existing class; this matches the rule set
//! because asserted equalities only ever relate inserted terms, so every
//! derived class is reachable through the congruence table.
//!
//! Extensions return fresh snapshots; queries are read-only.

use std::collections::HashMap;
use std::fmt;

use crate::formula::Literal;
use crate::term::{Func, Sort, Term};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ClassId(u32);

#[derive(Debug, thiserror::Error)]
#[error("E-interface is inconsistent")]
pub struct Inconsistent;

#[derive(Clone)]
pub struct EInterface {
    asserted: Vec<Literal>,
    class_of: HashMap<Term, u32>,
    parents: Vec<u32>,
    diseqs: Vec<(u32, u32)>,
    inconsistent: bool,
    // Derived, rebuilt after every extension.
    congruence: HashMap<(Func, Vec<u32>), u32>,
    class_terms: HashMap<u32, Vec<Term>>,
    class_enodes: HashMap<u32, Vec<(Func, Vec<u32>)>>,
    by_func: HashMap<Func, Vec<(Vec<u32>, u32)>>,
    reps: HashMap<u32, Term>,
}

impl EInterface {
    /// A fresh interface with `true != false` preloaded. Asserting the
    /// disequality makes both constants known.
    pub fn new() -> EInterface {
        let mut e = EInterface {
            asserted: Vec::new(),
            class_of: HashMap::new(),
            parents: Vec::new(),
            diseqs: Vec::new(),
            inconsistent: false,
            congruence: HashMap::new(),
            class_terms: HashMap::new(),
            class_enodes: HashMap::new(),
            by_func: HashMap::new(),
            reps: HashMap::new(),
        };
        e.extend_in_place(&[Literal::disequality(Term::truth(), Term::falsity())]);
        e
    }

    /// Minimal extension with a set of ground literals.
    pub fn extend(&self, lits: &[Literal]) -> EInterface {
        let mut next = self.clone();
        next.extend_in_place(lits);
        next
    }

    fn extend_in_place(&mut self, lits: &[Literal]) {
        for lit in lits {
            assert!(lit.is_ground(), "E-interface literals must be ground: {lit}");
            let l = self.insert(lit.lhs());
            let r = self.insert(lit.rhs());
            if lit.positive() {
                self.union(l, r);
            } else {
                self.diseqs.push((l, r));
            }
            if !self.asserted.contains(lit) {
                self.asserted.push(*lit);
            }
        }
        self.asserted.sort();
        self.rebuild();
    }

    fn insert(&mut self, t: Term) -> u32 {
        if let Some(c) = self.class_of.get(&t) {
            return self.find(*c);
        }
        if let Some((_, args)) = t.as_app() {
            for a in args {
                self.insert(*a);
            }
        }
        let id = self.parents.len() as u32;
        self.parents.push(id);
        self.class_of.insert(t, id);
        id
    }

    fn find(&self, mut c: u32) -> u32 {
        while self.parents[c as usize] != c {
            c = self.parents[c as usize];
        }
        c
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (winner, loser) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parents[loser as usize] = winner;
        }
    }

    /// Restores congruence (merging classes whose e-nodes collide) and
    /// recomputes the derived indexes and representatives.
    fn rebuild(&mut self) {
        loop {
            let mut table: HashMap<(Func, Vec<u32>), u32> = HashMap::new();
            let mut merges = Vec::new();
            for (term, id) in &self.class_of {
                if let Some((f, args)) = term.as_app() {
                    let key: Vec<u32> =
                        args.iter().map(|a| self.find(self.class_of[a])).collect();
                    let root = self.find(*id);
                    match table.get(&(f, key.clone())) {
                        Some(other) if self.find(*other) != root => {
                            merges.push((root, self.find(*other)));
                        }
                        Some(_) => {}
                        None => {
                            table.insert((f, key), root);
                        }
                    }
                }
            }
            if merges.is_empty() {
                self.congruence = table;
                break;
            }
            for (a, b) in merges {
                self.union(a, b);
            }
        }

        self.class_terms.clear();
        for (term, id) in &self.class_of {
            self.class_terms.entry(self.find(*id)).or_default().push(*term);
        }
        for members in self.class_terms.values_mut() {
            members.sort();
        }

        self.class_enodes.clear();
        self.by_func.clear();
        for ((f, args), id) in &self.congruence {
            let root = self.find(*id);
            let enodes = self.class_enodes.entry(root).or_default();
            if !enodes.contains(&(*f, args.clone())) {
                enodes.push((*f, args.clone()));
            }
            self.by_func.entry(*f).or_default().push((args.clone(), root));
        }

        self.inconsistent = self
            .diseqs
            .iter()
            .any(|(l, r)| self.find(*l) == self.find(*r));

        self.extract_reps();
    }

    /// Chooses the structurally smallest member of every class. Works by
    /// relaxation over e-nodes so the minimum ranges over all known members
    /// of a class, not only the inserted ones.
    fn extract_reps(&mut self) {
        self.reps.clear();
        let mut changed = true;
        while changed {
            changed = false;
            for (class, enodes) in &self.class_enodes {
                for (f, args) in enodes {
                    let mut best_args = Vec::with_capacity(args.len());
                    let mut ok = true;
                    for a in args {
                        match self.reps.get(&self.find(*a)) {
                            Some(t) => best_args.push(*t),
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let candidate = Term::app(*f, best_args);
                    match self.reps.get(class) {
                        Some(current) if *current <= candidate => {}
                        _ => {
                            self.reps.insert(*class, candidate);
                            changed = true;
                        }
                    }
                }
            }
        }
    }

    /// Canonical class of a ground term, or `None` when the term is unknown.
    pub fn lookup(&self, t: Term) -> Option<ClassId> {
        self.lookup_raw(t).map(ClassId)
    }

    fn lookup_raw(&self, t: Term) -> Option<u32> {
        if let Some(c) = self.class_of.get(&t) {
            return Some(self.find(*c));
        }
        let (f, args) = t.as_app()?;
        let mut key = Vec::with_capacity(args.len());
        for a in args {
            key.push(self.lookup_raw(*a)?);
        }
        self.congruence.get(&(f, key)).map(|c| self.find(*c))
    }

    /// Decides whether a ground term is known.
    pub fn known(&self, t: Term) -> bool {
        self.lookup_raw(t).is_some()
    }

    /// Decides whether two ground terms are known equal.
    pub fn equal(&self, t1: Term, t2: Term) -> bool {
        match (self.lookup_raw(t1), self.lookup_raw(t2)) {
            (Some(c1), Some(c2)) => c1 == c2,
            _ => false,
        }
    }

    /// Decides whether two ground terms are known disequal.
    pub fn disequal(&self, t1: Term, t2: Term) -> bool {
        let (c1, c2) = match (self.lookup_raw(t1), self.lookup_raw(t2)) {
            (Some(c1), Some(c2)) => (c1, c2),
            _ => return false,
        };
        self.diseqs.iter().any(|(l, r)| {
            let (l, r) = (self.find(*l), self.find(*r));
            (l, r) == (c1, c2) || (l, r) == (c2, c1)
        })
    }

    pub fn inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// The asserted literal set, canonically ordered. Grows monotonically.
    pub fn asserted(&self) -> &[Literal] {
        &self.asserted
    }

    /// Canonical ids of all classes, ordered by representative term.
    pub fn classes(&self) -> Vec<ClassId> {
        let mut out: Vec<ClassId> = self.class_terms.keys().map(|c| ClassId(*c)).collect();
        out.sort_by_key(|c| self.rep(*c));
        out
    }

    /// The representative (structurally smallest known member) of a class.
    pub fn rep(&self, c: ClassId) -> Term {
        self.reps[&self.find(c.0)]
    }

    /// Inserted member terms of a class, structurally ordered.
    pub fn class_members(&self, c: ClassId) -> &[Term] {
        &self.class_terms[&self.find(c.0)]
    }

    pub fn class_sort(&self, c: ClassId) -> Sort {
        self.class_terms[&self.find(c.0)][0].sort()
    }

    /// E-nodes of a class: function applications over canonical argument
    /// classes. Drives pattern matching and extraction.
    pub fn class_enodes(&self, c: ClassId) -> Vec<(Func, Vec<ClassId>)> {
        match self.class_enodes.get(&self.find(c.0)) {
            Some(nodes) => nodes
                .iter()
                .map(|(f, args)| (*f, args.iter().map(|a| ClassId(self.find(*a))).collect()))
                .collect(),
            None => Vec::new(),
        }
    }

    /// All e-nodes with the given head symbol, as (argument classes, class).
    pub fn apps_of(&self, f: Func) -> Vec<(Vec<ClassId>, ClassId)> {
        match self.by_func.get(&f) {
            Some(apps) => apps
                .iter()
                .map(|(args, c)| {
                    (
                        args.iter().map(|a| ClassId(self.find(*a))).collect(),
                        ClassId(self.find(*c)),
                    )
                })
                .collect(),
            None => Vec::new(),
        }
    }

    /// A basis: one representative per equivalence class of known terms,
    /// structurally ordered. Rejects inconsistent interfaces.
    pub fn basis(&self) -> Result<Vec<Term>, Inconsistent> {
        if self.inconsistent {
            return Err(Inconsistent);
        }
        Ok(self.basis_unchecked())
    }

    /// Basis without the consistency gate. The measure monitors evaluate
    /// active states that are about to transition to the inconsistent state,
    /// and class structure is well-defined there too.
    pub fn basis_unchecked(&self) -> Vec<Term> {
        let mut out: Vec<Term> = self.class_terms.keys().map(|c| self.reps[c]).collect();
        out.sort();
        out
    }

    /// Known disequalities as canonical representative pairs, deduplicated.
    pub fn diseq_pairs(&self) -> Vec<(Term, Term)> {
        let mut out: Vec<(Term, Term)> = self
            .diseqs
            .iter()
            .map(|(l, r)| {
                let (a, b) = (self.reps[&self.find(*l)], self.reps[&self.find(*r)]);
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl Default for EInterface {
    fn default() -> Self {
        EInterface::new()
    }
}

impl fmt::Display for EInterface {
    /// Debug dump: one line per equivalence class listing its members, then
    /// the disequality pairs over representatives.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut classes: Vec<&Vec<Term>> = self.class_terms.values().collect();
        classes.sort_by_key(|members| members[0]);
        for members in classes {
            write!(f, "class {{")?;
            for (i, m) in members.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{m}")?;
            }
            writeln!(f, "}}")?;
        }
        for (l, r) in self.diseq_pairs() {
            writeln!(f, "diseq {l} != {r}")?;
        }
        if self.inconsistent {
            writeln!(f, "inconsistent")?;
        }
        Ok(())
    }
}

/// Equivalence of tags in an E-interface: primitive tags are equivalent when
/// their names coincide; parameterised tags when their bases are equivalent
/// and their parameters are pointwise known equal.
pub fn tags_equivalent(e: &EInterface, t1: &crate::formula::Tag, t2: &crate::formula::Tag) -> bool {
    use crate::formula::Tag;
    match (t1, t2) {
        (Tag::Prim(a), Tag::Prim(b)) => a == b,
        (Tag::Param(b1, p1), Tag::Param(b2, p2)) => {
            tags_equivalent(e, b1, b2)
                && p1.len() == p2.len()
                && p1.iter().zip(p2).all(|(x, y)| e.equal(*x, *y))
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Tag;
    use crate::term::Symbol;

    fn set_sig() -> (Sort, Sort, Func, Func) {
        let t = Sort::new("T");
        let set = Sort::new("SetT");
        let member = Func::new(Symbol::new("member"), vec![t, set], Sort::bool());
        let diff = Func::new(Symbol::new("diff"), vec![set, set], set);
        (t, set, member, diff)
    }

    fn consts(t: Sort, set: Sort) -> (Term, Term, Term, Term) {
        let c = |name: &str, sort: Sort| Term::constant(Func::new(Symbol::new(name), vec![], sort));
        (c("t", t), c("a", set), c("b", set), c("c", set))
    }

    /// The congruence closure of Example 1's facts.
    fn example1() -> (EInterface, Term, Term, Term, Term, Func, Func) {
        let (ts, set, member, diff) = set_sig();
        let (t, a, b, c) = consts(ts, set);
        let e = EInterface::new().extend(&[
            Literal::pred(Term::app(member, vec![t, a]), true),
            Literal::disequality(Term::app(diff, vec![b, c]), b),
            Literal::equality(a, c),
        ]);
        (e, t, a, b, c, member, diff)
    }

    #[test]
    fn preload_makes_truth_constants_known_and_disequal() {
        let e = EInterface::new();
        assert!(e.known(Term::truth()));
        assert!(e.known(Term::falsity()));
        assert!(e.disequal(Term::truth(), Term::falsity()));
        assert!(!e.inconsistent());
        assert_eq!(e.basis().unwrap(), vec![Term::falsity(), Term::truth()]);
    }

    #[test]
    fn congruence_makes_equal_mod_equalities_known() {
        let (e, t, a, b, c, member, diff) = example1();
        // a ~ c, so diff(b,a) is known and equal to diff(b,c).
        assert!(e.known(Term::app(diff, vec![b, a])));
        assert!(e.equal(Term::app(diff, vec![b, a]), Term::app(diff, vec![b, c])));
        assert!(e.known(Term::app(member, vec![t, a])));
        assert!(e.known(Term::app(member, vec![t, c])));
        assert!(e.equal(Term::app(member, vec![t, c]), Term::truth()));
        // Known terms only: nothing relates union-like terms here.
        assert!(!e.known(Term::app(diff, vec![a, b])));
    }

    #[test]
    fn disequality_propagates_through_equalities() {
        let (e, _, a, b, c, _, diff) = example1();
        // diff(b,c) != b together with a ~ c gives diff(b,a) != b.
        assert!(e.disequal(Term::app(diff, vec![b, a]), b));
        assert!(e.disequal(b, Term::app(diff, vec![b, c])));
        assert!(!e.disequal(a, b));
        let _ = c;
    }

    #[test]
    fn equal_requires_knownness_even_reflexively() {
        let (_, set, _, diff) = set_sig();
        let e = EInterface::new();
        let a = Term::constant(Func::new(Symbol::new("a"), vec![], set));
        assert!(!e.equal(a, a));
        let d = Term::app(diff, vec![a, a]);
        assert!(!e.known(d));
    }

    #[test]
    fn contradictory_literals_are_inconsistent() {
        let (_, set, _, _) = set_sig();
        let x = Term::constant(Func::new(Symbol::new("x"), vec![], set));
        let y = Term::constant(Func::new(Symbol::new("y"), vec![], set));
        let e = EInterface::new()
            .extend(&[Literal::equality(x, y), Literal::disequality(y, x)]);
        assert!(e.inconsistent());
        assert!(e.basis().is_err());
    }

    #[test]
    fn extension_with_nothing_is_identity() {
        let (e, ..) = example1();
        let e2 = e.extend(&[]);
        assert_eq!(e.asserted(), e2.asserted());
        assert_eq!(e.basis().unwrap(), e2.basis().unwrap());
    }

    #[test]
    fn example1_basis_is_pinned() {
        // Frozen from the naive fixed-point oracle: six classes.
        let (e, t, a, b, _, _, diff) = example1();
        let basis = e.basis().unwrap();
        assert_eq!(basis.len(), 6);
        assert!(basis.contains(&t));
        assert!(basis.contains(&a)); // rep of {a, c}
        assert!(basis.contains(&b));
        assert!(basis.contains(&Term::falsity()));
        // member(t,a) ~ true: true is the smaller member.
        assert!(basis.contains(&Term::truth()));
        // diff(b,a) is the structural minimum of {diff(b,c), diff(b,a)}.
        assert!(basis.contains(&Term::app(diff, vec![b, a])));
    }

    #[test]
    fn tag_equivalence_follows_parameter_equalities() {
        let (ts, set, member, _) = set_sig();
        let (t, a, b, c) = consts(ts, set);
        let subset_ab = Tag::param(Tag::prim("subset-elim"), vec![a, b]);
        let subset_cb = Tag::param(Tag::prim("subset-elim"), vec![c, b]);
        let subset_ba = Tag::param(Tag::prim("subset-elim"), vec![b, a]);

        let fresh = EInterface::new();
        assert!(tags_equivalent(&fresh, &Tag::prim("union-elim"), &Tag::prim("union-elim")));
        assert!(!tags_equivalent(&fresh, &Tag::prim("union-elim"), &Tag::prim("union-intro-1")));
        // Frozen from the oracle: parameters must be known for the pointwise
        // equalities to hold, so nothing is equivalent in a fresh interface.
        assert!(!tags_equivalent(&fresh, &subset_ab, &subset_ba));
        assert!(!tags_equivalent(&fresh, &subset_ab, &subset_ab.clone()));

        // With a ~ c and all parameters known, equivalence kicks in.
        let e = EInterface::new().extend(&[
            Literal::equality(a, c),
            Literal::pred(Term::app(member, vec![t, b]), true),
        ]);
        assert!(tags_equivalent(&e, &subset_ab, &subset_cb));
        assert!(!tags_equivalent(&e, &subset_ab, &subset_ba));
    }

    #[test]
    fn monotone_under_extension() {
        let (e, t, a, b, _, member, diff) = example1();
        let extra = Literal::pred(Term::app(member, vec![t, b]), false);
        let bigger = e.extend(&[extra]);
        for q in [
            Term::app(diff, vec![b, a]),
            Term::app(member, vec![t, a]),
            t,
            a,
            b,
        ] {
            assert!(bigger.known(q));
        }
        assert!(bigger.equal(Term::app(diff, vec![b, a]), Term::app(diff, vec![b, a])));
        assert!(bigger.disequal(Term::app(diff, vec![b, a]), b));
    }
}
