//! Seeded random ground-literal instances for termination sweeps. Literal
//! shapes mirror what theory clients assert: positive and negative
//! membership facts, and (dis)equalities between set terms built from fresh
//! constants and one layer of the declared set operations.

use std::str::FromStr;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::formula::Literal;
use crate::problem::Problem;
use crate::term::{Func, Sort, Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenBounds {
    pub set_consts: usize,
    pub elem_consts: usize,
    pub literals: usize,
}

impl Default for GenBounds {
    fn default() -> Self {
        GenBounds { set_consts: 3, elem_consts: 3, literals: 6 }
    }
}

impl FromStr for GenBounds {
    type Err = String;

    /// Accepts `sets=3,elems=3,lits=6` (any subset, defaults elsewhere).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bounds = GenBounds::default();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value in {part:?}"))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("invalid number in {part:?}"))?;
            match key.trim() {
                "sets" => bounds.set_consts = value,
                "elems" => bounds.elem_consts = value,
                "lits" => bounds.literals = value,
                other => return Err(format!("unknown bound {other:?}")),
            }
        }
        Ok(bounds)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("problem has no measure configuration; sort roles are unknown")]
    NoMeasure,
}

/// Extends a base problem with fresh constants and a seeded random literal
/// set. The base problem's measure configuration supplies the sort roles.
pub fn generate_instance(
    base: &Problem,
    bounds: &GenBounds,
    seed: u64,
) -> Result<Problem, GenError> {
    let cfg = base.measure.as_ref().ok_or(GenError::NoMeasure)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let set_consts: Vec<Term> = (0..bounds.set_consts.max(1))
        .map(|i| fresh_const(&format!("gs{i}"), cfg.set_sort))
        .collect();
    let elem_consts: Vec<Term> = (0..bounds.elem_consts.max(1))
        .map(|i| fresh_const(&format!("ge{i}"), cfg.elem_sort))
        .collect();

    // One layer of set-building applications over the fresh constants.
    let mut set_terms: Vec<Term> = set_consts.clone();
    for f in &base.functions {
        if f.result_sort() != cfg.set_sort || f.arity() == 0 || cfg.skolems.contains(f) {
            continue;
        }
        let pools: Option<Vec<&[Term]>> = f
            .arg_sorts()
            .iter()
            .map(|s| {
                if *s == cfg.set_sort {
                    Some(set_consts.as_slice())
                } else if *s == cfg.elem_sort {
                    Some(elem_consts.as_slice())
                } else {
                    None
                }
            })
            .collect();
        let Some(pools) = pools else { continue };
        for _ in 0..2 {
            let args: Vec<Term> = pools.iter().map(|p| *p.choose(&mut rng).unwrap()).collect();
            let t = Term::app(*f, args);
            if !set_terms.contains(&t) {
                set_terms.push(t);
            }
        }
    }

    let membership: Option<Func> = base.functions.iter().copied().find(|f| {
        f.result_sort() == Sort::bool() && f.arg_sorts() == [cfg.elem_sort, cfg.set_sort]
    });

    let mut literals: Vec<Literal> = Vec::new();
    for _ in 0..bounds.literals {
        let lit = match (membership, rng.gen_range(0..10)) {
            (Some(member), k) if k < 7 => {
                let e = *elem_consts.choose(&mut rng).unwrap();
                let s = *set_terms.choose(&mut rng).unwrap();
                Literal::pred(Term::app(member, vec![e, s]), rng.gen_bool(0.5))
            }
            _ => {
                let s1 = *set_terms.choose(&mut rng).unwrap();
                let s2 = *set_terms.choose(&mut rng).unwrap();
                if rng.gen_bool(0.5) {
                    Literal::equality(s1, s2)
                } else {
                    Literal::disequality(s1, s2)
                }
            }
        };
        if !literals.contains(&lit) {
            literals.push(lit);
        }
    }
    literals.sort();

    let mut problem = base.clone();
    for t in set_consts.iter().chain(&elem_consts) {
        problem.functions.push(t.as_app().unwrap().0);
    }
    problem.functions.sort();
    problem.ground_literals = literals;
    Ok(problem)
}

fn fresh_const(name: &str, sort: Sort) -> Term {
    Term::constant(Func::new(Symbol::new(name), vec![], sort))
}
