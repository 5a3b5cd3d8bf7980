//! Drivers over the transition relation: single-trace schedulers resolving
//! the nondeterminism, and depth-bounded exhaustive exploration of the
//! canonical choice space with state deduplication.

use std::collections::HashMap;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::digest::digest_str;
use crate::formula::{Clause, Tag};
use crate::transitions::{
    apply_choice, available_choices, classify_terminal, ActiveState, Modes, SolverState,
    StepChoice, TerminalRule, Trace,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Scheduler {
    Exhaustive,
    Random,
    InstFirst,
    SplitFirst,
    LoopSeeking,
}

impl Scheduler {
    pub fn name(&self) -> &'static str {
        match self {
            Scheduler::Exhaustive => "exhaustive",
            Scheduler::Random => "random",
            Scheduler::InstFirst => "inst-first",
            Scheduler::SplitFirst => "split-first",
            Scheduler::LoopSeeking => "loop-seeking",
        }
    }
}

impl FromStr for Scheduler {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(Scheduler::Exhaustive),
            "random" => Ok(Scheduler::Random),
            "inst-first" => Ok(Scheduler::InstFirst),
            "split-first" => Ok(Scheduler::SplitFirst),
            "loop-seeking" => Ok(Scheduler::LoopSeeking),
            other => Err(format!("unknown scheduler {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_steps: usize,
    pub max_traces: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_steps: 10_000, max_traces: 1 }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Terminal {
    Saturated,
    Inconsistent,
    BudgetExhausted,
}

impl Terminal {
    pub fn name(&self) -> &'static str {
        match self {
            Terminal::Saturated => "saturated",
            Terminal::Inconsistent => "inconsistent",
            Terminal::BudgetExhausted => "budget-exhausted",
        }
    }

    pub fn of(trace: &Trace) -> Terminal {
        match trace.final_state() {
            SolverState::Saturated => Terminal::Saturated,
            SolverState::Inconsistent => Terminal::Inconsistent,
            SolverState::Active(_) => Terminal::BudgetExhausted,
        }
    }
}

impl FromStr for Terminal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "saturated" => Ok(Terminal::Saturated),
            "inconsistent" => Ok(Terminal::Inconsistent),
            "budget-exhausted" => Ok(Terminal::BudgetExhausted),
            other => Err(format!("unknown terminal {other:?}")),
        }
    }
}

/// Summary of an exhaustive exploration.
#[derive(Clone, Debug, Default)]
pub struct ExplorationSummary {
    pub states_visited: usize,
    pub saturated_reached: bool,
    pub inconsistent_reached: bool,
    /// Active states with no terminal rule and no available choice. The
    /// transition rules make these impossible; any hit is an engine defect.
    pub stuck_states: usize,
    /// Path revisits a state: a genuinely non-terminating prefix.
    pub cycles_detected: usize,
    /// Some path was cut off by the depth bound before reaching a terminal.
    pub depth_exhausted: bool,
}

pub struct RunOutcome {
    pub traces: Vec<Trace>,
    pub exploration: Option<ExplorationSummary>,
}

/// Canonical digest of a solver state, stable across runs.
pub fn state_digest(s: &SolverState) -> String {
    digest_str(&s.to_string())
}

/// Runs one scheduler from an initial state. The terminal rules are applied
/// eagerly; budget exhaustion leaves the trace ending in an active state.
pub fn run(
    initial: SolverState,
    scheduler: Scheduler,
    seed: u64,
    modes: Modes,
    limits: Limits,
) -> RunOutcome {
    match scheduler {
        Scheduler::Exhaustive => {
            let (summary, traces) = explore(initial, modes, limits);
            RunOutcome { traces, exploration: Some(summary) }
        }
        Scheduler::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let trace = drive(initial, modes, limits.max_steps, |choices, _| {
                let idx: usize = (0..choices.len()).collect::<Vec<_>>()
                    .choose(&mut rng)
                    .copied()
                    .unwrap();
                idx
            });
            RunOutcome { traces: vec![trace], exploration: None }
        }
        Scheduler::InstFirst => {
            let trace = drive(initial, modes, limits.max_steps, |choices, _| {
                choices
                    .iter()
                    .position(|c| matches!(c, StepChoice::Inst(_)))
                    .unwrap_or(0)
            });
            RunOutcome { traces: vec![trace], exploration: None }
        }
        Scheduler::SplitFirst => {
            let trace = drive(initial, modes, limits.max_steps, |choices, _| {
                choices
                    .iter()
                    .position(|c| matches!(c, StepChoice::Split(_)))
                    .unwrap_or(0)
            });
            RunOutcome { traces: vec![trace], exploration: None }
        }
        Scheduler::LoopSeeking => {
            let trace = drive_loop_seeking(initial, modes, limits.max_steps);
            RunOutcome { traces: vec![trace], exploration: None }
        }
    }
}

fn drive(
    initial: SolverState,
    modes: Modes,
    max_steps: usize,
    mut pick: impl FnMut(&[StepChoice], &ActiveState) -> usize,
) -> Trace {
    let mut trace = Trace { initial, steps: Vec::new() };
    while trace.steps.len() < max_steps {
        let state = trace.final_state().clone();
        let SolverState::Active(active) = state else { break };
        let choice = match classify_terminal(&active, modes) {
            TerminalRule::Bot => StepChoice::Bot,
            TerminalRule::Sat => StepChoice::Sat,
            TerminalRule::None => {
                let choices = available_choices(&active, modes);
                assert!(!choices.is_empty(), "stuck active state");
                let idx = pick(&choices, &active);
                choices.into_iter().nth(idx).unwrap()
            }
        };
        let next = apply_choice(&active, &choice, modes).expect("scheduler choice applies");
        trace.steps.push((choice, next));
    }
    trace
}

/// The loop-seeking policy: after an instantiation, split the clause it just
/// produced, preferring the disjunct that introduces the most unknown terms;
/// otherwise instantiate, preferring the most recently instantiated tag. On
/// the permissive-trigger problems this reproduces the indefinite
/// instantiate/case-split alternation of a matching loop.
fn drive_loop_seeking(initial: SolverState, modes: Modes, max_steps: usize) -> Trace {
    let mut last_tag: Option<Tag> = None;
    let mut produced: Vec<Clause> = Vec::new();
    let mut trace = Trace { initial, steps: Vec::new() };
    while trace.steps.len() < max_steps {
        let state = trace.final_state().clone();
        let SolverState::Active(active) = state else { break };
        let choice = match classify_terminal(&active, modes) {
            TerminalRule::Bot => StepChoice::Bot,
            TerminalRule::Sat => StepChoice::Sat,
            TerminalRule::None => {
                let choices = available_choices(&active, modes);
                assert!(!choices.is_empty(), "stuck active state");
                let idx = pick_loop_seeking(&choices, &active, &last_tag, &produced);
                choices.into_iter().nth(idx).unwrap()
            }
        };
        match &choice {
            StepChoice::Inst(m) => {
                last_tag = Some(m.quantifier.tag.clone());
            }
            _ => {}
        }
        let next = apply_choice(&active, &choice, modes).expect("scheduler choice applies");
        if let (StepChoice::Inst(_), SolverState::Active(after)) = (&choice, &next) {
            produced = after
                .clauses
                .iter()
                .filter(|c| !active.clauses.contains(c))
                .cloned()
                .collect();
        }
        trace.steps.push((choice, next));
    }
    trace
}

fn pick_loop_seeking(
    choices: &[StepChoice],
    active: &ActiveState,
    last_tag: &Option<Tag>,
    produced: &[Clause],
) -> usize {
    // Split a clause produced by the previous instantiation, choosing the
    // disjunct whose literal mentions the most unknown subterms.
    let mut best: Option<(usize, usize)> = None;
    for (i, choice) in choices.iter().enumerate() {
        if let StepChoice::Split(sel) = choice {
            if sel.len() == 1 && produced.contains(&sel[0].clause) {
                let score = unknown_subterms(&sel[0], active);
                if best.map(|(s, _)| score > s).unwrap_or(true) {
                    best = Some((score, i));
                }
            }
        }
    }
    if let Some((_, i)) = best {
        return i;
    }
    if let Some(tag) = last_tag {
        if let Some(i) = choices.iter().position(
            |c| matches!(c, StepChoice::Inst(m) if &m.quantifier.tag == tag),
        ) {
            return i;
        }
    }
    choices
        .iter()
        .position(|c| matches!(c, StepChoice::Inst(_)))
        .unwrap_or(0)
}

fn unknown_subterms(sel: &crate::transitions::SplitSelection, active: &ActiveState) -> usize {
    match &sel.disjunct {
        crate::formula::ExtLiteral::Lit(l) => [l.lhs(), l.rhs()]
            .iter()
            .flat_map(|t| t.subterms())
            .filter(|t| !active.estate.interface.known(*t))
            .count(),
        crate::formula::ExtLiteral::Quant(_) => 0,
    }
}

/// Depth-bounded DFS over the canonical choice space (every enabled match,
/// every singleton split), deduplicating states by digest. Complete traces
/// are materialised up to the trace limit; the summary covers the full
/// exploration.
pub fn explore(initial: SolverState, modes: Modes, limits: Limits) -> (ExplorationSummary, Vec<Trace>) {
    let mut summary = ExplorationSummary::default();
    let mut traces = Vec::new();
    // Digest -> remaining depth it was explored with; re-explore only deeper.
    let mut visited: HashMap<String, usize> = HashMap::new();
    let mut path: Vec<(StepChoice, SolverState)> = Vec::new();
    let mut path_digests = vec![state_digest(&initial)];
    dfs(
        &initial,
        initial.clone(),
        modes,
        limits.max_steps,
        limits.max_traces,
        &mut visited,
        &mut path,
        &mut path_digests,
        &mut summary,
        &mut traces,
    );
    (summary, traces)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    initial: &SolverState,
    state: SolverState,
    modes: Modes,
    remaining: usize,
    max_traces: usize,
    visited: &mut HashMap<String, usize>,
    path: &mut Vec<(StepChoice, SolverState)>,
    path_digests: &mut Vec<String>,
    summary: &mut ExplorationSummary,
    traces: &mut Vec<Trace>,
) {
    let digest = path_digests.last().cloned().unwrap();
    match visited.get(&digest) {
        Some(explored) if *explored >= remaining => return,
        _ => {
            if !visited.contains_key(&digest) {
                summary.states_visited += 1;
            }
            visited.insert(digest, remaining);
        }
    }

    let active = match &state {
        SolverState::Saturated => {
            summary.saturated_reached = true;
            record_trace(initial, path, max_traces, traces);
            return;
        }
        SolverState::Inconsistent => {
            summary.inconsistent_reached = true;
            record_trace(initial, path, max_traces, traces);
            return;
        }
        SolverState::Active(a) => a.clone(),
    };
    if remaining == 0 {
        summary.depth_exhausted = true;
        record_trace(initial, path, max_traces, traces);
        return;
    }

    let choices = match classify_terminal(&active, modes) {
        TerminalRule::Bot => vec![StepChoice::Bot],
        TerminalRule::Sat => vec![StepChoice::Sat],
        TerminalRule::None => {
            let choices = available_choices(&active, modes);
            if choices.is_empty() {
                summary.stuck_states += 1;
                record_trace(initial, path, max_traces, traces);
                return;
            }
            choices
        }
    };

    for choice in choices {
        let next = apply_choice(&active, &choice, modes).expect("exhaustive choice applies");
        let next_digest = state_digest(&next);
        if path_digests.contains(&next_digest) {
            summary.cycles_detected += 1;
            continue;
        }
        path.push((choice, next.clone()));
        path_digests.push(next_digest);
        dfs(
            initial,
            next,
            modes,
            remaining - 1,
            max_traces,
            visited,
            path,
            path_digests,
            summary,
            traces,
        );
        path.pop();
        path_digests.pop();
    }
}

fn record_trace(
    initial: &SolverState,
    path: &[(StepChoice, SolverState)],
    max_traces: usize,
    traces: &mut Vec<Trace>,
) {
    if traces.len() < max_traces {
        traces.push(Trace { initial: initial.clone(), steps: path.to_vec() });
    }
}
