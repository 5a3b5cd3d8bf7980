//! Sorted terms, function symbols and the interning layer.
//!
//! Terms are hash-consed into leaked, immutable nodes: handles are `Copy`,
//! equality is pointer equality, and hashes are precomputed. The congruence
//! closure and the match enumerator compare terms constantly, so this has to
//! be cheap. Interned data is never freed; the working sets here are small.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{LazyLock, Mutex};

/// An interned identifier (sort names, function names, variable names).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symbol(&'static str);

static SYMBOLS: LazyLock<Mutex<HashMap<String, &'static str>>> =
    LazyLock::new(Default::default);

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        let mut table = SYMBOLS.lock().unwrap();
        if let Some(s) = table.get(name) {
            return Symbol(s);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        table.insert(name.to_owned(), leaked);
        Symbol(leaked)
    }

    pub fn as_str(&self) -> &'static str {
        self.0
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(other.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// A sort is an atomic identifier. `Bool` is always available; compound-looking
/// names like `SetT` are still atomic identifiers.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sort(pub Symbol);

impl Sort {
    pub fn new(name: &str) -> Sort {
        Sort(Symbol::new(name))
    }

    pub fn bool() -> Sort {
        Sort::new("Bool")
    }

    pub fn name(&self) -> Symbol {
        self.0
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(PartialEq, Eq, Hash)]
struct FuncData {
    name: Symbol,
    arg_sorts: Vec<Sort>,
    result: Sort,
    interpreted: bool,
}

/// A declared function symbol. Arity and sorts are intrinsic to the symbol;
/// two declarations with the same name and signature intern to the same value.
/// Equality is the only interpreted symbol and lives at the literal level, so
/// `interpreted` is false for every symbol built through [`Func::new`].
#[derive(Clone, Copy)]
pub struct Func(&'static FuncData);

static FUNCS: LazyLock<Mutex<HashMap<&'static FuncData, Func>>> =
    LazyLock::new(Default::default);

impl Func {
    pub fn new(name: Symbol, arg_sorts: Vec<Sort>, result: Sort) -> Func {
        Self::intern(FuncData { name, arg_sorts, result, interpreted: false })
    }

    fn intern(data: FuncData) -> Func {
        let mut table = FUNCS.lock().unwrap();
        if let Some(f) = table.get(&data) {
            return *f;
        }
        let leaked: &'static FuncData = Box::leak(Box::new(data));
        let f = Func(leaked);
        table.insert(leaked, f);
        f
    }

    pub fn name(&self) -> Symbol {
        self.0.name
    }

    pub fn arg_sorts(&self) -> &'static [Sort] {
        &self.0.arg_sorts
    }

    pub fn arity(&self) -> usize {
        self.0.arg_sorts.len()
    }

    pub fn result_sort(&self) -> Sort {
        self.0.result
    }

    pub fn interpreted(&self) -> bool {
        self.0.interpreted
    }
}

impl PartialEq for Func {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Func {}

impl Hash for Func {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.0 as *const FuncData as usize).hash(state);
    }
}

impl PartialOrd for Func {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Func {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name()
            .cmp(&other.name())
            .then_with(|| self.arg_sorts().cmp(other.arg_sorts()))
            .then_with(|| self.result_sort().cmp(&other.result_sort()))
    }
}

impl fmt::Debug for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(PartialEq, Eq, Hash)]
enum TermNode {
    Var(Symbol, Sort),
    App(Func, Vec<Term>),
}

struct TermData {
    node: TermNode,
    size: u32,
    ground: bool,
    hash: u64,
}

impl PartialEq for TermData {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl Eq for TermData {}

impl Hash for TermData {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.node.hash(state);
    }
}

/// A hash-consed term: a variable or a well-sorted function application.
#[derive(Clone, Copy)]
pub struct Term(&'static TermData);

static TERMS: LazyLock<Mutex<HashMap<&'static TermData, Term>>> =
    LazyLock::new(Default::default);

impl Term {
    pub fn var(name: Symbol, sort: Sort) -> Term {
        Self::intern(TermNode::Var(name, sort))
    }

    /// Builds an application. Panics if the arguments violate the symbol's
    /// declared signature; the parser reports sort errors before reaching here.
    pub fn app(f: Func, args: Vec<Term>) -> Term {
        assert_eq!(
            f.arity(),
            args.len(),
            "arity mismatch applying {}: expected {}, got {}",
            f.name(),
            f.arity(),
            args.len()
        );
        for (arg, expected) in args.iter().zip(f.arg_sorts()) {
            assert_eq!(
                arg.sort(),
                *expected,
                "sort mismatch in argument {} of {}",
                arg,
                f.name()
            );
        }
        Self::intern(TermNode::App(f, args))
    }

    pub fn constant(f: Func) -> Term {
        Term::app(f, vec![])
    }

    fn intern(node: TermNode) -> Term {
        let mut table = TERMS.lock().unwrap();
        let probe = TermData { hash: 0, size: 0, ground: false, node };
        if let Some(t) = table.get(&probe) {
            return *t;
        }
        let TermData { node, .. } = probe;
        let (size, ground) = match &node {
            TermNode::Var(..) => (1, false),
            TermNode::App(_, args) => (
                1 + args.iter().map(|a| a.size()).sum::<u32>(),
                args.iter().all(|a| a.is_ground()),
            ),
        };
        let hash = stable_node_hash(&node);
        let leaked: &'static TermData = Box::leak(Box::new(TermData { node, size, ground, hash }));
        let t = Term(leaked);
        table.insert(leaked, t);
        t
    }

    pub fn sort(&self) -> Sort {
        match &self.0.node {
            TermNode::Var(_, sort) => *sort,
            TermNode::App(f, _) => f.result_sort(),
        }
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn is_ground(&self) -> bool {
        self.0.ground
    }

    pub fn is_var(&self) -> bool {
        matches!(self.0.node, TermNode::Var(..))
    }

    pub fn as_var(&self) -> Option<(Symbol, Sort)> {
        match &self.0.node {
            TermNode::Var(name, sort) => Some((*name, *sort)),
            TermNode::App(..) => None,
        }
    }

    pub fn as_app(&self) -> Option<(Func, &'static [Term])> {
        match &self.0.node {
            TermNode::Var(..) => None,
            TermNode::App(f, args) => Some((*f, args)),
        }
    }

    /// The distinguished Bool constant encoding truth.
    pub fn truth() -> Term {
        static T: LazyLock<Term> = LazyLock::new(|| {
            Term::constant(Func::new(Symbol::new("true"), vec![], Sort::bool()))
        });
        *T
    }

    /// The distinguished Bool constant encoding falsehood.
    pub fn falsity() -> Term {
        static F: LazyLock<Term> = LazyLock::new(|| {
            Term::constant(Func::new(Symbol::new("false"), vec![], Sort::bool()))
        });
        *F
    }

    /// Free variables, in first-occurrence order.
    pub fn free_vars(&self) -> Vec<(Symbol, Sort)> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<(Symbol, Sort)>) {
        match &self.0.node {
            TermNode::Var(name, sort) => {
                if !out.iter().any(|(n, _)| n == name) {
                    out.push((*name, *sort));
                }
            }
            TermNode::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn contains_var(&self, name: Symbol) -> bool {
        match &self.0.node {
            TermNode::Var(n, _) => *n == name,
            TermNode::App(_, args) => args.iter().any(|a| a.contains_var(name)),
        }
    }

    pub fn substitute(&self, map: &HashMap<Symbol, Term>) -> Term {
        match &self.0.node {
            TermNode::Var(name, _) => map.get(name).copied().unwrap_or(*self),
            TermNode::App(f, args) => {
                if self.is_ground() {
                    return *self;
                }
                Term::app(*f, args.iter().map(|a| a.substitute(map)).collect())
            }
        }
    }

    pub fn subterms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        self.collect_subterms(&mut out);
        out
    }

    fn collect_subterms(&self, out: &mut Vec<Term>) {
        if out.contains(self) {
            return;
        }
        out.push(*self);
        if let TermNode::App(_, args) = &self.0.node {
            for a in args {
                a.collect_subterms(out);
            }
        }
    }

    /// Structural comparison: size first, then variables before applications,
    /// then symbol name, then arguments. Basis representatives are the minima
    /// of their classes under this order, which keeps traces reproducible.
    fn structural_cmp(&self, other: &Self) -> Ordering {
        if std::ptr::eq(self.0, other.0) {
            return Ordering::Equal;
        }
        self.size().cmp(&other.size()).then_with(|| match (&self.0.node, &other.0.node) {
            (TermNode::Var(n1, s1), TermNode::Var(n2, s2)) => n1.cmp(n2).then(s1.cmp(s2)),
            (TermNode::Var(..), TermNode::App(..)) => Ordering::Less,
            (TermNode::App(..), TermNode::Var(..)) => Ordering::Greater,
            (TermNode::App(f1, a1), TermNode::App(f2, a2)) => f1.cmp(f2).then_with(|| {
                for (x, y) in a1.iter().zip(a2.iter()) {
                    match x.structural_cmp(y) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }),
        })
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.structural_cmp(other)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.node {
            TermNode::Var(name, _) => write!(f, "{name}"),
            TermNode::App(func, args) => {
                if args.is_empty() {
                    write!(f, "{}", func.name())
                } else {
                    write!(f, "({}", func.name())?;
                    for a in args {
                        write!(f, " {a}")?;
                    }
                    write!(f, ")")
                }
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn stable_node_hash(node: &TermNode) -> u64 {
    let mut h = crate::digest::Fnv::new();
    match node {
        TermNode::Var(name, sort) => {
            h.write_u8(1);
            h.write_str(name.as_str());
            h.write_str(sort.name().as_str());
        }
        TermNode::App(f, args) => {
            h.write_u8(2);
            h.write_str(f.name().as_str());
            for a in args {
                h.write_u64(a.0.hash);
            }
        }
    }
    h.finish()
}
