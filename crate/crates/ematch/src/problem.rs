//! Problem files: sort and function declarations, tagged axioms with
//! triggers, ground literal assertions, and an optional measure
//! configuration. The surface syntax is s-expression based:
//!
//! ```text
//! (sort SetT)
//! (fun member (T SetT) Bool)
//! (const a SetT)
//! (axiom union-elim
//!   (forall ((s1 SetT) (s2 SetT) (x T))
//!     (:trigger (member x (union s1 s2)))
//!     (:trigger (union s1 s2) (member x s1))
//!     (and (or (not (member x (union s1 s2))) (member x s1) (member x s2)))))
//! (assert (member t a))
//! (measure (set-sort SetT) (elem-sort T)
//!   (skolem Sk_ss (SetT SetT))
//!   (nested subset-elim (SetT SetT)))
//! ```
//!
//! Inner quantifiers carry an `(inner-tag name (outer-vars...))` clause whose
//! variable list must name all enclosing binders. `Bool`, `true` and `false`
//! are predefined.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::digest::digest_str;
use crate::formula::{
    validate_quantifier, Clause, Ecnf, ExtLiteral, Literal, Tag, TaggedQuantifier, TriggerSet,
};
use crate::measure::MeasureConfig;
use crate::settheory::NestedTemplate;
use crate::sexpr::{parse_all, Pos, SExpr};
use crate::term::{Func, Sort, Symbol, Term};
use crate::transitions::{initial_state, SolverState};

#[derive(Debug, Clone, thiserror::Error)]
#[error("{pos}: {msg}")]
pub struct ProblemError {
    pub pos: Pos,
    pub msg: String,
}

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T, ProblemError> {
    Err(ProblemError { pos, msg: msg.into() })
}

/// A parsed and validated problem.
#[derive(Clone, PartialEq, Debug)]
pub struct Problem {
    /// Declared sorts, canonically ordered; `Bool` is implicit.
    pub sorts: Vec<Sort>,
    /// Declared functions (constants included), ordered by name; the `true`
    /// and `false` constants are implicit.
    pub functions: Vec<Func>,
    /// The tagged axioms, canonically ordered.
    pub axioms: Vec<TaggedQuantifier>,
    /// Asserted ground literals, canonically ordered.
    pub ground_literals: Vec<Literal>,
    pub measure: Option<MeasureConfig>,
}

impl Problem {
    pub fn initial(&self) -> SolverState {
        initial_state(&self.axioms, &self.ground_literals)
    }

    pub fn digest(&self) -> String {
        digest_str(&self.to_text())
    }

    pub fn function(&self, name: &str) -> Option<Func> {
        let sym = Symbol::new(name);
        self.functions.iter().copied().find(|f| f.name() == sym)
    }

    /// Non-fatal findings: currently, pairs of axioms that are syntactically
    /// identical up to their tag.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, a) in self.axioms.iter().enumerate() {
            for b in &self.axioms[i + 1..] {
                if a.vars == b.vars && a.triggers == b.triggers && a.body == b.body {
                    out.push(format!(
                        "axioms {} and {} are identical up to their tags",
                        a.tag, b.tag
                    ));
                }
            }
        }
        out
    }

    /// Canonical text rendering; `parse_problem` returns an equal problem.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sorts {
            let _ = writeln!(out, "(sort {s})");
        }
        for f in &self.functions {
            let mut args = String::new();
            for (i, a) in f.arg_sorts().iter().enumerate() {
                if i > 0 {
                    args.push(' ');
                }
                let _ = write!(args, "{a}");
            }
            let _ = writeln!(out, "(fun {} ({}) {})", f.name(), args, f.result_sort());
        }
        for axiom in &self.axioms {
            let _ = writeln!(out, "(axiom {} {})", axiom.tag, print_quantifier(axiom, false));
        }
        for lit in &self.ground_literals {
            let _ = writeln!(out, "(assert {lit})");
        }
        if let Some(m) = &self.measure {
            let _ = write!(out, "(measure (set-sort {}) (elem-sort {})", m.set_sort, m.elem_sort);
            for sk in &m.skolems {
                let mut args = String::new();
                for (i, a) in sk.arg_sorts().iter().enumerate() {
                    if i > 0 {
                        args.push(' ');
                    }
                    let _ = write!(args, "{a}");
                }
                let _ = write!(out, " (skolem {} ({}))", sk.name(), args);
            }
            for tpl in &m.nested {
                let mut args = String::new();
                for (i, a) in tpl.param_sorts.iter().enumerate() {
                    if i > 0 {
                        args.push(' ');
                    }
                    let _ = write!(args, "{a}");
                }
                let _ = write!(out, " (nested {} ({}))", tpl.outer_tag, args);
            }
            let _ = writeln!(out, ")");
        }
        out
    }
}

fn print_quantifier(q: &TaggedQuantifier, inner: bool) -> String {
    let mut out = String::from("(forall (");
    for (i, (name, sort)) in q.vars.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "({name} {sort})");
    }
    out.push(')');
    if inner {
        let Tag::Param(base, params) = &q.tag else {
            unreachable!("inner quantifiers carry parameterised tags")
        };
        let _ = write!(out, " (inner-tag {base} (");
        for (i, p) in params.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{p}");
        }
        out.push_str("))");
    }
    for trigger in &q.triggers {
        out.push_str(" (:trigger");
        for t in trigger.terms() {
            let _ = write!(out, " {t}");
        }
        out.push(')');
    }
    out.push_str(" (and");
    for clause in q.body.clauses() {
        out.push_str(" (or");
        for d in clause.disjuncts() {
            match d {
                ExtLiteral::Lit(l) => {
                    let _ = write!(out, " {l}");
                }
                ExtLiteral::Quant(iq) => {
                    let _ = write!(out, " {}", print_quantifier(iq, true));
                }
            }
        }
        out.push(')');
    }
    out.push_str("))");
    out
}

struct ParseCtx {
    sorts: Vec<Sort>,
    funcs: HashMap<String, Func>,
    func_order: Vec<Func>,
}

impl ParseCtx {
    fn new() -> ParseCtx {
        let mut ctx = ParseCtx { sorts: vec![Sort::bool()], funcs: HashMap::new(), func_order: Vec::new() };
        // Force creation of the interned constants so lookups resolve.
        let truth = Term::truth().as_app().unwrap().0;
        let falsity = Term::falsity().as_app().unwrap().0;
        ctx.funcs.insert("true".into(), truth);
        ctx.funcs.insert("false".into(), falsity);
        ctx
    }

    fn sort(&self, name: &str, pos: Pos) -> Result<Sort, ProblemError> {
        let sort = Sort::new(name);
        if self.sorts.contains(&sort) {
            Ok(sort)
        } else {
            err(pos, format!("unknown sort {name}"))
        }
    }
}

const KEYWORDS: &[&str] = &["and", "or", "not", "=", "forall", "inner-tag", ":trigger"];

/// Parses a problem file, validating sorts, arities, trigger restrictions,
/// tag constraints and groundness. The first error is reported with its
/// position.
pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    let exprs = parse_all(text).map_err(|e| ProblemError { pos: e.pos, msg: e.msg })?;
    let mut ctx = ParseCtx::new();
    let mut axioms: Vec<TaggedQuantifier> = Vec::new();
    let mut ground_literals: Vec<Literal> = Vec::new();
    let mut measure: Option<MeasureConfig> = None;
    let mut inner_bases: Vec<Symbol> = Vec::new();

    for expr in &exprs {
        let items = match expr.as_list() {
            Some(items) if !items.is_empty() => items,
            _ => return err(expr.pos(), "expected a non-empty form"),
        };
        let head = items[0]
            .as_atom()
            .ok_or_else(|| ProblemError { pos: items[0].pos(), msg: "expected a form head".into() })?;
        match head {
            "sort" => {
                let name = expect_atom(items, 1, "sort name")?;
                let sort = Sort::new(name);
                if ctx.sorts.contains(&sort) {
                    return err(items[1].pos(), format!("sort {name} already declared"));
                }
                expect_len(expr, items, 2)?;
                ctx.sorts.push(sort);
            }
            "fun" | "const" => {
                let name = expect_atom(items, 1, "function name")?.to_string();
                if ctx.funcs.contains_key(&name) {
                    return err(items[1].pos(), format!("function {name} already declared"));
                }
                if KEYWORDS.contains(&name.as_str()) {
                    return err(items[1].pos(), format!("{name} is reserved"));
                }
                let (arg_sorts, result) = if head == "fun" {
                    expect_len(expr, items, 4)?;
                    let args = items[2]
                        .as_list()
                        .ok_or_else(|| ProblemError {
                            pos: items[2].pos(),
                            msg: "expected argument sort list".into(),
                        })?
                        .iter()
                        .map(|a| {
                            let name = a.as_atom().ok_or_else(|| ProblemError {
                                pos: a.pos(),
                                msg: "expected a sort name".into(),
                            })?;
                            ctx.sort(name, a.pos())
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let result = ctx.sort(expect_atom(items, 3, "result sort")?, items[3].pos())?;
                    (args, result)
                } else {
                    expect_len(expr, items, 3)?;
                    (Vec::new(), ctx.sort(expect_atom(items, 2, "sort")?, items[2].pos())?)
                };
                let f = Func::new(Symbol::new(&name), arg_sorts, result);
                ctx.funcs.insert(name, f);
                ctx.func_order.push(f);
            }
            "axiom" => {
                expect_len(expr, items, 3)?;
                let tag_name = expect_atom(items, 1, "axiom tag")?;
                let tag = Tag::prim(tag_name);
                if axioms.iter().any(|a| a.tag == tag) {
                    return err(items[1].pos(), format!("duplicate axiom tag {tag_name}"));
                }
                let quantifier =
                    parse_quantifier(&ctx, &items[2], Some(tag), &[], &mut inner_bases)?;
                let violations = validate_quantifier(&quantifier);
                if let Some(v) = violations.first() {
                    return err(items[2].pos(), format!("invalid trigger: {v}"));
                }
                axioms.push(quantifier);
            }
            "assert" => {
                expect_len(expr, items, 2)?;
                let lit = parse_literal_expr(&ctx, &items[1], &HashMap::new())?;
                if !lit.is_ground() {
                    return err(items[1].pos(), "asserted literals must be ground");
                }
                if !ground_literals.contains(&lit) {
                    ground_literals.push(lit);
                }
            }
            "measure" => {
                if measure.is_some() {
                    return err(expr.pos(), "duplicate measure form");
                }
                measure = Some(parse_measure(&ctx, items, &axioms)?);
            }
            other => return err(items[0].pos(), format!("unknown form {other}")),
        }
    }

    axioms.sort();
    ground_literals.sort();
    let mut sorts: Vec<Sort> = ctx.sorts.into_iter().filter(|s| *s != Sort::bool()).collect();
    sorts.sort();
    let mut functions = ctx.func_order;
    functions.sort();
    let problem = Problem { sorts, functions, axioms, ground_literals, measure };
    if let Some(cfg) = &problem.measure {
        cfg.validate(&problem.axioms)
            .map_err(|e| ProblemError { pos: Pos { line: 0, col: 0 }, msg: e.to_string() })?;
    }
    Ok(problem)
}

fn expect_len(expr: &SExpr, items: &[SExpr], n: usize) -> Result<(), ProblemError> {
    if items.len() != n {
        return err(expr.pos(), format!("expected {} items, found {}", n, items.len()));
    }
    Ok(())
}

fn expect_atom<'a>(items: &'a [SExpr], idx: usize, what: &str) -> Result<&'a str, ProblemError> {
    let item = items
        .get(idx)
        .ok_or_else(|| ProblemError { pos: items[0].pos(), msg: format!("missing {what}") })?;
    item.as_atom()
        .ok_or_else(|| ProblemError { pos: item.pos(), msg: format!("expected {what}") })
}

type Scope = HashMap<String, (Symbol, Sort)>;

fn parse_quantifier(
    ctx: &ParseCtx,
    expr: &SExpr,
    outer_tag: Option<Tag>,
    enclosing: &[(Symbol, Sort)],
    inner_bases: &mut Vec<Symbol>,
) -> Result<TaggedQuantifier, ProblemError> {
    let items = expr
        .as_list()
        .filter(|items| items.first().and_then(|h| h.as_atom()) == Some("forall"))
        .ok_or_else(|| ProblemError { pos: expr.pos(), msg: "expected (forall ...)".into() })?;
    if items.len() < 3 {
        return err(expr.pos(), "forall needs binders and a body");
    }

    let binder_list = items[1]
        .as_list()
        .ok_or_else(|| ProblemError { pos: items[1].pos(), msg: "expected binder list".into() })?;
    if binder_list.is_empty() {
        return err(items[1].pos(), "quantifier must bind at least one variable");
    }
    let mut vars: Vec<(Symbol, Sort)> = Vec::new();
    for binder in binder_list {
        let pair = binder
            .as_list()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| ProblemError { pos: binder.pos(), msg: "expected (name Sort)".into() })?;
        let name = pair[0]
            .as_atom()
            .ok_or_else(|| ProblemError { pos: pair[0].pos(), msg: "expected a variable name".into() })?;
        let sort = ctx.sort(
            pair[1].as_atom().ok_or_else(|| ProblemError {
                pos: pair[1].pos(),
                msg: "expected a sort name".into(),
            })?,
            pair[1].pos(),
        )?;
        let sym = Symbol::new(name);
        if vars.iter().any(|(n, _)| *n == sym)
            || enclosing.iter().any(|(n, _)| *n == sym)
        {
            return err(pair[0].pos(), format!("variable {name} shadows an enclosing binder"));
        }
        if ctx.funcs.contains_key(name) {
            return err(pair[0].pos(), format!("variable {name} collides with a function"));
        }
        vars.push((sym, sort));
    }

    let mut scope: Scope = HashMap::new();
    for (n, s) in enclosing.iter().chain(&vars) {
        scope.insert(n.as_str().to_string(), (*n, *s));
    }

    let mut triggers: Vec<TriggerSet> = Vec::new();
    let mut tag = outer_tag;
    let mut body: Option<Ecnf> = None;
    for item in &items[2..] {
        let head = item.as_list().and_then(|l| l.first()).and_then(|h| h.as_atom());
        match head {
            Some(":trigger") => {
                let terms = item.as_list().unwrap()[1..]
                    .iter()
                    .map(|t| parse_term(ctx, t, &scope))
                    .collect::<Result<Vec<_>, _>>()?;
                if terms.is_empty() {
                    return err(item.pos(), "empty trigger set");
                }
                triggers.push(TriggerSet::new(terms));
            }
            Some("inner-tag") => {
                if tag.is_some() {
                    return err(item.pos(), "unexpected inner-tag (already tagged)");
                }
                let parts = item.as_list().unwrap();
                if parts.len() != 3 {
                    return err(item.pos(), "expected (inner-tag name (vars...))");
                }
                let base = parts[1].as_atom().ok_or_else(|| ProblemError {
                    pos: parts[1].pos(),
                    msg: "expected a tag name".into(),
                })?;
                let listed = parts[2]
                    .as_list()
                    .ok_or_else(|| ProblemError {
                        pos: parts[2].pos(),
                        msg: "expected a variable list".into(),
                    })?
                    .iter()
                    .map(|v| {
                        v.as_atom().ok_or_else(|| ProblemError {
                            pos: v.pos(),
                            msg: "expected a variable name".into(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                // The parameters must name all outer-quantified variables.
                let expected: Vec<&str> = enclosing.iter().map(|(n, _)| n.as_str()).collect();
                if listed != expected {
                    return err(
                        parts[2].pos(),
                        format!(
                            "inner tag parameters {listed:?} must list the enclosing binders {expected:?}"
                        ),
                    );
                }
                let base_sym = Symbol::new(base);
                if inner_bases.contains(&base_sym) {
                    return err(parts[1].pos(), format!("duplicate inner tag {base}"));
                }
                inner_bases.push(base_sym);
                let params = enclosing.iter().map(|(n, s)| Term::var(*n, *s)).collect();
                tag = Some(Tag::param(Tag::Prim(base_sym), params));
            }
            _ => {
                if body.is_some() {
                    return err(item.pos(), "multiple quantifier bodies");
                }
                let all_binders: Vec<(Symbol, Sort)> =
                    enclosing.iter().chain(&vars).copied().collect();
                body = Some(parse_body(ctx, item, &scope, &all_binders, inner_bases)?);
            }
        }
    }

    let Some(tag) = tag else {
        return err(expr.pos(), "inner quantifier lacks an (inner-tag ...) clause");
    };
    let Some(body) = body else {
        return err(expr.pos(), "quantifier lacks a body");
    };
    if triggers.is_empty() {
        return err(expr.pos(), "quantifier lacks trigger sets");
    }
    Ok(TaggedQuantifier { tag, vars, triggers, body })
}

fn parse_body(
    ctx: &ParseCtx,
    expr: &SExpr,
    scope: &Scope,
    binders: &[(Symbol, Sort)],
    inner_bases: &mut Vec<Symbol>,
) -> Result<Ecnf, ProblemError> {
    let head = expr.as_list().and_then(|l| l.first()).and_then(|h| h.as_atom());
    let clause_exprs: Vec<&SExpr> = if head == Some("and") {
        expr.as_list().unwrap()[1..].iter().collect()
    } else {
        vec![expr]
    };
    if clause_exprs.is_empty() {
        return err(expr.pos(), "empty conjunction");
    }
    let clauses = clause_exprs
        .into_iter()
        .map(|c| parse_clause(ctx, c, scope, binders, inner_bases))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Ecnf::new(clauses))
}

fn parse_clause(
    ctx: &ParseCtx,
    expr: &SExpr,
    scope: &Scope,
    binders: &[(Symbol, Sort)],
    inner_bases: &mut Vec<Symbol>,
) -> Result<Clause, ProblemError> {
    let head = expr.as_list().and_then(|l| l.first()).and_then(|h| h.as_atom());
    let phi_exprs: Vec<&SExpr> = if head == Some("or") {
        expr.as_list().unwrap()[1..].iter().collect()
    } else {
        vec![expr]
    };
    if phi_exprs.is_empty() {
        return err(expr.pos(), "empty disjunction");
    }
    let disjuncts = phi_exprs
        .into_iter()
        .map(|p| {
            let head = p.as_list().and_then(|l| l.first()).and_then(|h| h.as_atom());
            if head == Some("forall") {
                let inner = parse_quantifier(ctx, p, None, binders, inner_bases)?;
                Ok(ExtLiteral::Quant(inner))
            } else {
                Ok(ExtLiteral::Lit(parse_literal_expr(ctx, p, scope)?))
            }
        })
        .collect::<Result<Vec<_>, ProblemError>>()?;
    Ok(Clause::new(disjuncts))
}

fn parse_literal_expr(
    ctx: &ParseCtx,
    expr: &SExpr,
    scope: &Scope,
) -> Result<Literal, ProblemError> {
    let head = expr.as_list().and_then(|l| l.first()).and_then(|h| h.as_atom());
    match head {
        Some("=") => {
            let items = expr.as_list().unwrap();
            if items.len() != 3 {
                return err(expr.pos(), "expected (= t1 t2)");
            }
            let t1 = parse_term(ctx, &items[1], scope)?;
            let t2 = parse_term(ctx, &items[2], scope)?;
            if t1.sort() != t2.sort() {
                return err(expr.pos(), format!("equality between {} and {}", t1.sort(), t2.sort()));
            }
            Ok(Literal::equality(t1, t2))
        }
        Some("not") => {
            let items = expr.as_list().unwrap();
            if items.len() != 2 {
                return err(expr.pos(), "expected (not ...)");
            }
            let inner_head =
                items[1].as_list().and_then(|l| l.first()).and_then(|h| h.as_atom());
            if inner_head == Some("=") {
                let inner = items[1].as_list().unwrap();
                if inner.len() != 3 {
                    return err(items[1].pos(), "expected (= t1 t2)");
                }
                let t1 = parse_term(ctx, &inner[1], scope)?;
                let t2 = parse_term(ctx, &inner[2], scope)?;
                if t1.sort() != t2.sort() {
                    return err(
                        items[1].pos(),
                        format!("disequality between {} and {}", t1.sort(), t2.sort()),
                    );
                }
                Ok(Literal::disequality(t1, t2))
            } else {
                let p = parse_term(ctx, &items[1], scope)?;
                if p.sort() != Sort::bool() {
                    return err(items[1].pos(), "negated atom must be Bool-sorted");
                }
                Ok(Literal::pred(p, false))
            }
        }
        _ => {
            let p = parse_term(ctx, expr, scope)?;
            if p.sort() != Sort::bool() {
                return err(expr.pos(), format!("atom of sort {} is not Bool", p.sort()));
            }
            Ok(Literal::pred(p, true))
        }
    }
}

fn parse_term(ctx: &ParseCtx, expr: &SExpr, scope: &Scope) -> Result<Term, ProblemError> {
    match expr {
        SExpr::Atom(name, pos) => {
            if let Some((sym, sort)) = scope.get(name) {
                return Ok(Term::var(*sym, *sort));
            }
            match ctx.funcs.get(name) {
                Some(f) if f.arity() == 0 => Ok(Term::constant(*f)),
                Some(f) => err(*pos, format!("{name} expects {} arguments", f.arity())),
                None => err(*pos, format!("unknown symbol {name}")),
            }
        }
        SExpr::List(items, pos) => {
            let Some(head) = items.first().and_then(|h| h.as_atom()) else {
                return err(*pos, "expected a function application");
            };
            if KEYWORDS.contains(&head) {
                return err(*pos, format!("{head} is not allowed inside a term"));
            }
            let Some(f) = ctx.funcs.get(head).copied() else {
                return err(items[0].pos(), format!("unknown symbol {head}"));
            };
            let args = items[1..]
                .iter()
                .map(|a| parse_term(ctx, a, scope))
                .collect::<Result<Vec<_>, _>>()?;
            if args.len() != f.arity() {
                return err(
                    *pos,
                    format!("{head} expects {} arguments, found {}", f.arity(), args.len()),
                );
            }
            for (i, (arg, expected)) in args.iter().zip(f.arg_sorts()).enumerate() {
                if arg.sort() != *expected {
                    return err(
                        items[i + 1].pos(),
                        format!(
                            "argument {} of {head} has sort {}, expected {}",
                            i + 1,
                            arg.sort(),
                            expected
                        ),
                    );
                }
            }
            Ok(Term::app(f, args))
        }
    }
}

fn parse_measure(
    ctx: &ParseCtx,
    items: &[SExpr],
    axioms: &[TaggedQuantifier],
) -> Result<MeasureConfig, ProblemError> {
    let mut set_sort = None;
    let mut elem_sort = None;
    let mut skolems = Vec::new();
    let mut nested = Vec::new();
    for item in &items[1..] {
        let parts = item
            .as_list()
            .ok_or_else(|| ProblemError { pos: item.pos(), msg: "expected a measure clause".into() })?;
        let head = parts
            .first()
            .and_then(|h| h.as_atom())
            .ok_or_else(|| ProblemError { pos: item.pos(), msg: "expected a clause head".into() })?;
        match head {
            "set-sort" => {
                set_sort = Some(ctx.sort(expect_atom(parts, 1, "sort")?, parts[1].pos())?);
            }
            "elem-sort" => {
                elem_sort = Some(ctx.sort(expect_atom(parts, 1, "sort")?, parts[1].pos())?);
            }
            "skolem" => {
                let name = expect_atom(parts, 1, "skolem name")?;
                let Some(f) = ctx.funcs.get(name).copied() else {
                    return err(parts[1].pos(), format!("unknown function {name}"));
                };
                let listed = sort_list(ctx, &parts[2])?;
                if f.arg_sorts() != listed.as_slice() {
                    return err(parts[2].pos(), format!("{name} signature mismatch"));
                }
                skolems.push(f);
            }
            "nested" => {
                let name = expect_atom(parts, 1, "axiom tag")?;
                let tag = Tag::prim(name);
                let Some(outer) = axioms.iter().find(|a| a.tag == tag) else {
                    return err(parts[1].pos(), format!("nested template {name} names no axiom"));
                };
                let listed = sort_list(ctx, &parts[2])?;
                let Some(inner) = outer
                    .body
                    .clauses()
                    .iter()
                    .flat_map(|c| c.disjuncts())
                    .find_map(|d| d.as_quantifier())
                else {
                    return err(parts[1].pos(), format!("axiom {name} has no inner quantifier"));
                };
                nested.push(NestedTemplate {
                    outer_tag: Symbol::new(name),
                    param_sorts: listed,
                    inner_var_sorts: inner.var_sorts(),
                });
            }
            other => return err(item.pos(), format!("unknown measure clause {other}")),
        }
    }
    let Some(set_sort) = set_sort else {
        return err(items[0].pos(), "measure lacks (set-sort ...)");
    };
    let Some(elem_sort) = elem_sort else {
        return err(items[0].pos(), "measure lacks (elem-sort ...)");
    };
    Ok(MeasureConfig { set_sort, elem_sort, skolems, nested })
}

fn sort_list(ctx: &ParseCtx, expr: &SExpr) -> Result<Vec<Sort>, ProblemError> {
    expr.as_list()
        .ok_or_else(|| ProblemError { pos: expr.pos(), msg: "expected a sort list".into() })?
        .iter()
        .map(|s| {
            let name = s
                .as_atom()
                .ok_or_else(|| ProblemError { pos: s.pos(), msg: "expected a sort name".into() })?;
            ctx.sort(name, s.pos())
        })
        .collect()
}

/// Parses one ground literal in the context of a problem's declarations;
/// used for command-line assertions.
pub fn parse_ground_literal(problem: &Problem, text: &str) -> Result<Literal, ProblemError> {
    let exprs = parse_all(text).map_err(|e| ProblemError { pos: e.pos, msg: e.msg })?;
    if exprs.len() != 1 {
        return err(Pos { line: 1, col: 1 }, "expected exactly one literal");
    }
    let mut ctx = ParseCtx::new();
    for s in &problem.sorts {
        ctx.sorts.push(*s);
    }
    for f in &problem.functions {
        ctx.funcs.insert(f.name().as_str().to_string(), *f);
    }
    let lit = parse_literal_expr(&ctx, &exprs[0], &HashMap::new())?;
    if !lit.is_ground() {
        return err(exprs[0].pos(), "asserted literals must be ground");
    }
    Ok(lit)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "\
(sort T)
(sort SetT)
(fun member (T SetT) Bool)
(fun diff (SetT SetT) SetT)
(const t T)
(const a SetT)
(const b SetT)
(axiom diff-notin
  (forall ((s1 SetT) (s2 SetT) (x T))
    (:trigger (member x s1) (member x s2))
    (or (not (member x s2)) (not (member x (diff s1 s2))))))
(assert (member t a))
(assert (member t b))
(measure (set-sort SetT) (elem-sort T))
";

    #[test]
    fn parses_the_tiny_problem() {
        let p = parse_problem(TINY).unwrap();
        assert_eq!(p.sorts.len(), 2);
        assert_eq!(p.functions.len(), 5);
        assert_eq!(p.axioms.len(), 1);
        assert_eq!(p.ground_literals.len(), 2);
        assert!(p.measure.is_some());
        assert!(p.warnings().is_empty());
    }

    #[test]
    fn empty_input_gives_the_empty_problem() {
        let p = parse_problem("").unwrap();
        assert!(p.sorts.is_empty());
        assert!(p.functions.is_empty());
        assert!(p.axioms.is_empty());
        assert!(p.ground_literals.is_empty());
    }

    #[test]
    fn unknown_symbol_is_reported_with_position() {
        let text = "(sort T)\n(assert (= undeclared undeclared))";
        let e = parse_problem(text).unwrap_err();
        assert_eq!(e.pos.line, 2);
        assert!(e.msg.contains("unknown symbol undeclared"), "{}", e.msg);
    }

    #[test]
    fn bad_trigger_is_rejected() {
        let text = "\
(sort T)
(fun p (T) Bool)
(axiom q (forall ((x T)) (:trigger x) (or (not (p x)) (p x))))";
        let e = parse_problem(text).unwrap_err();
        assert!(e.msg.contains("invalid trigger"), "{}", e.msg);
    }

    #[test]
    fn duplicate_tags_are_rejected() {
        let text = "\
(sort T)
(fun p (T) Bool)
(axiom q (forall ((x T)) (:trigger (p x)) (or (p x) (not (p x)))))
(axiom q (forall ((x T)) (:trigger (p x)) (or (p x) (not (p x)))))";
        let e = parse_problem(text).unwrap_err();
        assert!(e.msg.contains("duplicate axiom tag"), "{}", e.msg);
    }

    #[test]
    fn shadowing_is_rejected() {
        let text = "\
(sort T)
(sort SetT)
(fun member (T SetT) Bool)
(fun subset (SetT SetT) Bool)
(axiom subset-elim
  (forall ((s1 SetT) (s2 SetT))
    (:trigger (subset s1 s2))
    (or (not (subset s1 s2))
        (forall ((s1 SetT)) (inner-tag se (s1 s2)) (:trigger (member s1 s1))
          (not (member s1 s1))))))";
        let e = parse_problem(text).unwrap_err();
        assert!(e.msg.contains("shadows"), "{}", e.msg);
    }

    #[test]
    fn inner_tag_must_cover_enclosing_binders() {
        let text = "\
(sort T)
(sort SetT)
(fun member (T SetT) Bool)
(fun subset (SetT SetT) Bool)
(axiom subset-elim
  (forall ((s1 SetT) (s2 SetT))
    (:trigger (subset s1 s2))
    (or (not (subset s1 s2))
        (forall ((x T)) (inner-tag se (s1)) (:trigger (member x s1))
          (or (not (member x s1)) (member x s2))))))";
        let e = parse_problem(text).unwrap_err();
        assert!(e.msg.contains("must list the enclosing binders"), "{}", e.msg);
    }

    #[test]
    fn print_parse_round_trip() {
        let p = parse_problem(TINY).unwrap();
        let printed = p.to_text();
        let reparsed = parse_problem(&printed).unwrap();
        assert_eq!(p, reparsed);
        assert_eq!(p.digest(), reparsed.digest());
    }

    #[test]
    fn ground_literal_helper_matches_file_syntax() {
        let p = parse_problem(TINY).unwrap();
        let l1 = parse_ground_literal(&p, "(member t a)").unwrap();
        let l2 = parse_ground_literal(&p, "(= (member t a) true)").unwrap();
        assert_eq!(l1, l2);
        assert!(parse_ground_literal(&p, "(member x a)").is_err());
    }
}
