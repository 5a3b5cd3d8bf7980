//! The bundled set-theory axiomatisation: 12 uninterpreted functions, four
//! Skolem functions, and 34 tagged axioms in extended CNF with their trigger
//! sets. Axioms whose surface form used implications are stored with the
//! implications eliminated; axioms with unit-clause bodies stay single unit
//! clauses so instantiation routes them straight into the E-interface.

use std::sync::LazyLock;

use crate::formula::{Clause, Ecnf, ExtLiteral, Literal, Tag, TaggedQuantifier, TriggerSet};
use crate::term::{Func, Sort, Symbol, Term};

/// How instantiating a quantifier can affect the match pool.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QuantifierClass {
    /// Yields neither new quantifiers nor new equivalence classes.
    NonGenerative,
    /// May create new Skolem applications, hence new equivalence classes.
    Generative,
    /// Contains an inner quantifier; instantiation introduces quantifiers.
    Nested,
    /// A quantifier introduced by instantiating a nested one.
    Inner,
}

/// One nested-quantifier template: the outer tag, the sorts of its binders
/// (which parameterise the inner tag), and the binder sorts of the inner
/// quantifier.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NestedTemplate {
    pub outer_tag: Symbol,
    pub param_sorts: Vec<Sort>,
    pub inner_var_sorts: Vec<Sort>,
}

pub struct AxiomBundle {
    pub elem_sort: Sort,
    pub set_sort: Sort,
    /// The 12 functions of the signature, in declaration order.
    pub functions: Vec<Func>,
    /// Skolem functions referenced by the generative axioms.
    pub skolems: Vec<Func>,
    pub axioms: Vec<TaggedQuantifier>,
    pub nested: Vec<NestedTemplate>,
}

impl AxiomBundle {
    pub fn axiom(&self, name: &str) -> &TaggedQuantifier {
        let tag = Tag::prim(name);
        self.axioms
            .iter()
            .find(|a| a.tag == tag)
            .unwrap_or_else(|| panic!("no axiom named {name}"))
    }

    pub fn function(&self, name: &str) -> Func {
        let sym = Symbol::new(name);
        self.functions
            .iter()
            .chain(&self.skolems)
            .copied()
            .find(|f| f.name() == sym)
            .unwrap_or_else(|| panic!("no function named {name}"))
    }
}

/// Classifies a quantifier relative to a Skolem signature: parameterised tags
/// mark inner quantifiers, quantifier-bearing bodies mark nested ones,
/// Skolem applications over bound variables mark generative ones.
pub fn classify(q: &TaggedQuantifier, skolems: &[Func]) -> QuantifierClass {
    if q.tag.is_parameterised() {
        return QuantifierClass::Inner;
    }
    let mut has_inner = false;
    let mut has_skolem = false;
    for clause in q.body.clauses() {
        for d in clause.disjuncts() {
            match d {
                ExtLiteral::Quant(_) => has_inner = true,
                ExtLiteral::Lit(l) => {
                    if mentions_skolem(l.lhs(), skolems) || mentions_skolem(l.rhs(), skolems) {
                        has_skolem = true;
                    }
                }
            }
        }
    }
    if has_inner {
        QuantifierClass::Nested
    } else if has_skolem {
        QuantifierClass::Generative
    } else {
        QuantifierClass::NonGenerative
    }
}

fn mentions_skolem(t: Term, skolems: &[Func]) -> bool {
    match t.as_app() {
        None => false,
        Some((f, args)) => {
            skolems.contains(&f) || args.iter().any(|a| mentions_skolem(*a, skolems))
        }
    }
}

/// The bundle, built once.
pub fn bundle() -> &'static AxiomBundle {
    static BUNDLE: LazyLock<AxiomBundle> = LazyLock::new(build);
    &BUNDLE
}

/// The bundle as a problem: the full signature, the tagged axioms, no ground
/// literals, and the matching measure configuration. The shipped
/// `settheory.prob` file parses to exactly this value.
pub fn problem() -> crate::problem::Problem {
    let b = bundle();
    let mut functions: Vec<Func> = b.functions.iter().chain(&b.skolems).copied().collect();
    functions.sort();
    let mut sorts = vec![b.elem_sort, b.set_sort];
    sorts.sort();
    crate::problem::Problem {
        sorts,
        functions,
        axioms: b.axioms.clone(),
        ground_literals: Vec::new(),
        measure: Some(crate::measure::MeasureConfig::settheory()),
    }
}

fn build() -> AxiomBundle {
    let t = Sort::new("T");
    let set = Sort::new("SetT");
    let b = Sort::bool();

    let member = Func::new(Symbol::new("member"), vec![t, set], b);
    let subset = Func::new(Symbol::new("subset"), vec![set, set], b);
    let union = Func::new(Symbol::new("union"), vec![set, set], set);
    let inter = Func::new(Symbol::new("inter"), vec![set, set], set);
    let diff = Func::new(Symbol::new("diff"), vec![set, set], set);
    let add = Func::new(Symbol::new("add"), vec![t, set], set);
    let remove = Func::new(Symbol::new("remove"), vec![t, set], set);
    let is_empty = Func::new(Symbol::new("isEmpty"), vec![set], b);
    let empty = Func::new(Symbol::new("empty"), vec![], set);
    let singleton = Func::new(Symbol::new("singleton"), vec![t], set);
    let disjoint = Func::new(Symbol::new("disjoint"), vec![set, set], b);
    let equal = Func::new(Symbol::new("equal"), vec![set, set], b);

    let sk_ss = Func::new(Symbol::new("Sk_ss"), vec![set, set], t);
    let sk_eq = Func::new(Symbol::new("Sk_eq"), vec![set, set], t);
    let sk_dj = Func::new(Symbol::new("Sk_dj"), vec![set, set], t);
    let sk_ie = Func::new(Symbol::new("Sk_ie"), vec![set], t);

    let x = Term::var(Symbol::new("x"), t);
    let y = Term::var(Symbol::new("y"), t);
    let s = Term::var(Symbol::new("s"), set);
    let s1 = Term::var(Symbol::new("s1"), set);
    let s2 = Term::var(Symbol::new("s2"), set);

    let m = |e: Term, st: Term| Term::app(member, vec![e, st]);
    let pos = |p: Term| ExtLiteral::Lit(Literal::pred(p, true));
    let neg = |p: Term| ExtLiteral::Lit(Literal::pred(p, false));
    let eq = |a: Term, c: Term| ExtLiteral::Lit(Literal::equality(a, c));
    let ne = |a: Term, c: Term| ExtLiteral::Lit(Literal::disequality(a, c));
    let trig = |terms: Vec<Term>| TriggerSet::new(terms);
    let body = |clauses: Vec<Vec<ExtLiteral>>| {
        Ecnf::new(clauses.into_iter().map(Clause::new).collect())
    };
    let ax = |name: &str,
              vars: Vec<(Symbol, Sort)>,
              triggers: Vec<TriggerSet>,
              clauses: Vec<Vec<ExtLiteral>>| TaggedQuantifier {
        tag: Tag::prim(name),
        vars,
        triggers,
        body: body(clauses),
    };
    let vx = (Symbol::new("x"), t);
    let vy = (Symbol::new("y"), t);
    let vs = (Symbol::new("s"), set);
    let vs1 = (Symbol::new("s1"), set);
    let vs2 = (Symbol::new("s2"), set);

    let u12 = Term::app(union, vec![s1, s2]);
    let i12 = Term::app(inter, vec![s1, s2]);
    let d12 = Term::app(diff, vec![s1, s2]);
    let add_xs = Term::app(add, vec![x, s]);
    let rem_xs = Term::app(remove, vec![x, s]);
    let sing_x = Term::app(singleton, vec![x]);
    let empty_t = Term::constant(empty);

    let mut axioms = vec![
        ax(
            "empty",
            vec![vx],
            vec![trig(vec![m(x, empty_t)])],
            vec![vec![neg(m(x, empty_t))]],
        ),
        ax(
            "singleton-intro-1",
            vec![vx],
            vec![trig(vec![sing_x])],
            vec![vec![pos(m(x, sing_x))]],
        ),
        ax(
            "singleton-intro-2",
            vec![vx, vy],
            vec![trig(vec![m(y, sing_x)])],
            vec![vec![pos(m(y, sing_x)), ne(x, y)]],
        ),
        ax(
            "singleton-elim",
            vec![vx, vy],
            vec![trig(vec![m(y, sing_x)])],
            vec![vec![neg(m(y, sing_x)), eq(x, y)]],
        ),
        ax(
            "add-intro-1",
            vec![vs, vx, vy],
            vec![trig(vec![m(y, s), add_xs]), trig(vec![m(y, add_xs)])],
            vec![vec![pos(m(y, add_xs)), neg(m(y, s))]],
        ),
        ax(
            "add-intro-2",
            vec![vs, vx],
            vec![trig(vec![add_xs])],
            vec![vec![pos(m(x, add_xs))]],
        ),
        ax(
            "add-intro-3",
            vec![vs, vx, vy],
            vec![trig(vec![m(y, add_xs)]), trig(vec![m(y, s), add_xs])],
            vec![vec![pos(m(y, add_xs)), ne(y, x)]],
        ),
        ax(
            "add-elim",
            vec![vs, vx, vy],
            vec![trig(vec![m(y, add_xs)]), trig(vec![m(y, s), add_xs])],
            vec![vec![neg(m(y, add_xs)), eq(x, y), pos(m(y, s))]],
        ),
        ax(
            "union-intro-1",
            vec![vs1, vs2, vx],
            vec![trig(vec![u12, m(x, s1)]), trig(vec![m(x, u12)])],
            vec![vec![pos(m(x, u12)), neg(m(x, s1))]],
        ),
        ax(
            "union-intro-2",
            vec![vs1, vs2, vx],
            vec![trig(vec![u12, m(x, s2)]), trig(vec![m(x, u12)])],
            vec![vec![pos(m(x, u12)), neg(m(x, s2))]],
        ),
        ax(
            "union-elim",
            vec![vs1, vs2, vx],
            vec![
                trig(vec![m(x, u12)]),
                trig(vec![u12, m(x, s1)]),
                trig(vec![u12, m(x, s2)]),
            ],
            vec![vec![neg(m(x, u12)), pos(m(x, s1)), pos(m(x, s2))]],
        ),
        ax(
            "union-disjoint",
            vec![vs1, vs2],
            vec![trig(vec![u12])],
            vec![
                vec![
                    neg(Term::app(disjoint, vec![s1, s2])),
                    eq(Term::app(diff, vec![u12, s1]), s2),
                ],
                vec![
                    neg(Term::app(disjoint, vec![s1, s2])),
                    eq(Term::app(diff, vec![u12, s2]), s1),
                ],
            ],
        ),
        ax(
            "inter-intro",
            vec![vs1, vs2, vx],
            vec![
                trig(vec![m(x, s1), i12]),
                trig(vec![m(x, s2), i12]),
                trig(vec![m(x, i12)]),
            ],
            vec![vec![pos(m(x, i12)), neg(m(x, s1)), neg(m(x, s2))]],
        ),
        ax(
            "inter-elim",
            vec![vs1, vs2, vx],
            vec![
                trig(vec![m(x, i12)]),
                trig(vec![i12, m(x, s1)]),
                trig(vec![i12, m(x, s2)]),
            ],
            vec![
                vec![neg(m(x, i12)), pos(m(x, s1))],
                vec![neg(m(x, i12)), pos(m(x, s2))],
            ],
        ),
        ax(
            "union-right",
            vec![vs1, vs2],
            vec![trig(vec![Term::app(union, vec![u12, s2])])],
            vec![vec![eq(Term::app(union, vec![u12, s2]), u12)]],
        ),
        ax(
            "union-left",
            vec![vs1, vs2],
            vec![trig(vec![Term::app(union, vec![s1, u12])])],
            vec![vec![eq(Term::app(union, vec![s1, u12]), u12)]],
        ),
        ax(
            "inter-right",
            vec![vs1, vs2],
            vec![trig(vec![Term::app(inter, vec![i12, s2])])],
            vec![vec![eq(Term::app(inter, vec![i12, s2]), i12)]],
        ),
        ax(
            "inter-left",
            vec![vs1, vs2],
            vec![trig(vec![Term::app(inter, vec![s1, i12])])],
            vec![vec![eq(Term::app(inter, vec![s1, i12]), i12)]],
        ),
        ax(
            "diff-intro",
            vec![vs1, vs2, vx],
            vec![
                trig(vec![m(x, s1), d12]),
                trig(vec![m(x, d12)]),
                trig(vec![m(x, s2), d12]),
            ],
            vec![vec![pos(m(x, d12)), neg(m(x, s1)), pos(m(x, s2))]],
        ),
        ax(
            "diff-elim",
            vec![vs1, vs2, vx],
            vec![
                trig(vec![m(x, d12)]),
                trig(vec![m(x, s2), d12]),
                trig(vec![m(x, s1), d12]),
            ],
            vec![
                vec![neg(m(x, d12)), pos(m(x, s1))],
                vec![neg(m(x, d12)), neg(m(x, s2))],
            ],
        ),
        ax(
            "subset-intro",
            vec![vs1, vs2],
            vec![trig(vec![Term::app(subset, vec![s1, s2])])],
            vec![
                vec![
                    pos(Term::app(subset, vec![s1, s2])),
                    pos(m(Term::app(sk_ss, vec![s1, s2]), s1)),
                ],
                vec![
                    pos(Term::app(subset, vec![s1, s2])),
                    neg(m(Term::app(sk_ss, vec![s1, s2]), s2)),
                ],
            ],
        ),
        ax(
            "subset-elim",
            vec![vs1, vs2],
            vec![trig(vec![Term::app(subset, vec![s1, s2])])],
            vec![vec![
                neg(Term::app(subset, vec![s1, s2])),
                ExtLiteral::Quant(TaggedQuantifier {
                    tag: Tag::param(Tag::prim("subset-elim"), vec![s1, s2]),
                    vars: vec![vx],
                    triggers: vec![trig(vec![m(x, s1)]), trig(vec![m(x, s2)])],
                    body: body(vec![vec![neg(m(x, s1)), pos(m(x, s2))]]),
                }),
            ]],
        ),
        ax(
            "equal-sets-intro",
            vec![vs1, vs2],
            vec![trig(vec![Term::app(equal, vec![s1, s2])])],
            vec![
                vec![
                    pos(Term::app(equal, vec![s1, s2])),
                    pos(m(Term::app(sk_eq, vec![s1, s2]), s1)),
                    pos(m(Term::app(sk_eq, vec![s1, s2]), s2)),
                ],
                vec![
                    pos(Term::app(equal, vec![s1, s2])),
                    neg(m(Term::app(sk_eq, vec![s1, s2]), s1)),
                    neg(m(Term::app(sk_eq, vec![s1, s2]), s2)),
                ],
            ],
        ),
        ax(
            "equal-sets-extensionality",
            vec![vs1, vs2],
            vec![trig(vec![Term::app(equal, vec![s1, s2])])],
            vec![vec![neg(Term::app(equal, vec![s1, s2])), eq(s1, s2)]],
        ),
        ax(
            "disjoint-intro",
            vec![vs1, vs2],
            vec![trig(vec![Term::app(disjoint, vec![s1, s2])])],
            vec![
                vec![
                    pos(Term::app(disjoint, vec![s1, s2])),
                    pos(m(Term::app(sk_dj, vec![s1, s2]), s1)),
                ],
                vec![
                    pos(Term::app(disjoint, vec![s1, s2])),
                    pos(m(Term::app(sk_dj, vec![s1, s2]), s2)),
                ],
            ],
        ),
        ax(
            "disjoint-elim",
            vec![vs1, vs2],
            vec![trig(vec![Term::app(disjoint, vec![s1, s2])])],
            vec![vec![
                neg(Term::app(disjoint, vec![s1, s2])),
                ExtLiteral::Quant(TaggedQuantifier {
                    tag: Tag::param(Tag::prim("disjoint-elim"), vec![s1, s2]),
                    vars: vec![vx],
                    triggers: vec![trig(vec![m(x, s1)]), trig(vec![m(x, s2)])],
                    body: body(vec![vec![neg(m(x, s1)), neg(m(x, s2))]]),
                }),
            ]],
        ),
        ax(
            "remove-intro-1",
            vec![vs, vx, vy],
            vec![trig(vec![m(y, s), rem_xs]), trig(vec![m(y, rem_xs)])],
            vec![vec![eq(y, x), neg(m(y, s)), pos(m(y, rem_xs))]],
        ),
        ax(
            "remove-intro-2",
            vec![vs, vx],
            vec![trig(vec![rem_xs])],
            vec![vec![neg(m(x, rem_xs))]],
        ),
        // The printed binder list omits y; all free variables of the body
        // are bound here.
        ax(
            "remove-intro-3",
            vec![vs, vx, vy],
            vec![trig(vec![m(y, rem_xs)]), trig(vec![m(y, s), rem_xs])],
            vec![vec![neg(m(y, rem_xs)), ne(y, x)]],
        ),
        ax(
            "remove-elim",
            vec![vs, vx, vy],
            vec![trig(vec![m(y, rem_xs)]), trig(vec![m(y, s), rem_xs])],
            vec![
                vec![neg(m(y, rem_xs)), ne(y, x)],
                vec![neg(m(y, rem_xs)), pos(m(y, s))],
            ],
        ),
        ax(
            "isEmpty-intro-1",
            vec![vs],
            vec![trig(vec![Term::app(is_empty, vec![s])])],
            vec![vec![
                pos(Term::app(is_empty, vec![s])),
                pos(m(Term::app(sk_ie, vec![s]), s)),
            ]],
        ),
        ax(
            "isEmpty-intro-2",
            vec![vs],
            vec![
                trig(vec![Term::app(is_empty, vec![s])]),
                trig(vec![Term::app(equal, vec![s, empty_t])]),
            ],
            vec![vec![
                pos(Term::app(is_empty, vec![s])),
                neg(Term::app(equal, vec![s, empty_t])),
            ]],
        ),
        ax(
            "isEmpty-elim-1",
            vec![vs],
            vec![trig(vec![Term::app(is_empty, vec![s])])],
            vec![vec![
                neg(Term::app(is_empty, vec![s])),
                ExtLiteral::Quant(TaggedQuantifier {
                    tag: Tag::param(Tag::prim("isEmpty-elim-1"), vec![s]),
                    vars: vec![vx],
                    triggers: vec![trig(vec![m(x, s)])],
                    body: body(vec![vec![neg(m(x, s))]]),
                }),
            ]],
        ),
        ax(
            "isEmpty-elim-2",
            vec![vs],
            vec![
                trig(vec![Term::app(is_empty, vec![s])]),
                trig(vec![Term::app(equal, vec![s, empty_t])]),
            ],
            vec![vec![
                neg(Term::app(is_empty, vec![s])),
                pos(Term::app(equal, vec![s, empty_t])),
            ]],
        ),
    ];
    axioms.sort();

    AxiomBundle {
        elem_sort: t,
        set_sort: set,
        functions: vec![
            member, subset, union, inter, diff, add, remove, is_empty, empty, singleton,
            disjoint, equal,
        ],
        skolems: vec![sk_ss, sk_eq, sk_dj, sk_ie],
        axioms,
        nested: vec![
            NestedTemplate {
                outer_tag: Symbol::new("subset-elim"),
                param_sorts: vec![set, set],
                inner_var_sorts: vec![t],
            },
            NestedTemplate {
                outer_tag: Symbol::new("disjoint-elim"),
                param_sorts: vec![set, set],
                inner_var_sorts: vec![t],
            },
            NestedTemplate {
                outer_tag: Symbol::new("isEmpty-elim-1"),
                param_sorts: vec![set],
                inner_var_sorts: vec![t],
            },
        ],
    }
}
