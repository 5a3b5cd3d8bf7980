//! An executable small-step semantics for E-matching-based quantifier
//! instantiation, plus the termination-analysis layer (progress measure,
//! basis overapproximation, invariant monitors) used to check instantiation
//! termination of trigger-annotated axiomatisations empirically.
//!
//! The crate is organised around the semantics:
//!
//! - [`term`] and [`formula`]: sorted terms, literals, tags, triggers,
//!   tagged quantifiers and extended CNF;
//! - [`einterface`]: decidable congruence-closure judgements over ground
//!   (dis)equalities, basis extraction and tag equivalence;
//! - [`matching`]: E-histories and the enumeration of enabled E-matches;
//! - [`transitions`] and [`run`]: solver states, the four-rule transition
//!   relation, schedulers and exhaustive exploration;
//! - [`settheory`]: the bundled set-theory axiomatisation;
//! - [`measure`] and [`invariants`]: the termination monitors;
//! - [`problem`], [`trace`], [`generator`]: the file formats and the sweep
//!   instance generator.

pub mod digest;
pub mod einterface;
pub mod formula;
pub mod generator;
pub mod invariants;
pub mod matching;
pub mod measure;
pub mod problem;
pub mod run;
pub mod settheory;
pub mod sexpr;
pub mod term;
pub mod trace;
pub mod transitions;

pub use einterface::{tags_equivalent, ClassId, EInterface, Inconsistent};
pub use formula::{
    partition_extended, substitute, validate_quantifier, Clause, Ecnf, ExtLiteral, Literal,
    SubstError, Tag, TaggedQuantifier, TriggerSet, TriggerViolation, ViolationKind,
};
pub use generator::{generate_instance, GenBounds};
pub use invariants::{check_invariants, InvariantReport, InvariantViolation, Suite};
pub use matching::{enabled_matches, history_enables, EHistory, EMatch, EState, MatchMode};
pub use measure::{
    check_descent, measure, overapprox_basis, p_estimation, sigma, theta, DescentReport,
    MeasureConfig, MeasureValue,
};
pub use problem::{parse_ground_literal, parse_problem, Problem, ProblemError};
pub use run::{explore, run, state_digest, Limits, RunOutcome, Scheduler, Terminal};
pub use settheory::{bundle, classify, AxiomBundle, QuantifierClass};
pub use term::{Func, Sort, Symbol, Term};
pub use trace::{build_document, parse_trace, serialize_trace, TraceDocument};
pub use transitions::{
    apply_choice, available_choices, classify_terminal, initial_state, step_inst, step_split,
    unverified_count, update_quantifiers, verify_clause, ActiveState, Modes, SolverState,
    SplitSelection, StepChoice, StepError, TerminalRule, Trace,
};
