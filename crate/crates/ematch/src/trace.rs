//! Trace documents: a line-delimited record stream with a header, one record
//! per step, and a final record. Digests are stable 64-bit hashes of
//! canonicalised states, so identical runs serialize byte-identically and
//! consecutive records chain (each step's after-digest is the next one's
//! before-digest).

use serde::{Deserialize, Serialize};

use crate::measure::{measure, MeasureConfig, MeasureValue};
use crate::run::{state_digest, Terminal};
use crate::transitions::{StepChoice, Trace};

pub const TRACE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceHeader {
    pub version: u32,
    pub problem_digest: String,
    pub scheduler: String,
    pub seed: u64,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SelectionRecord {
    pub clause: String,
    pub disjunct: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChoicePayload {
    Split { selections: Vec<SelectionRecord> },
    Inst { tag: String, terms: Vec<String>, trigger_index: usize },
    Bot,
    Sat,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub rule: String,
    pub choice: ChoicePayload,
    pub digest_before: String,
    pub digest_after: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub measure_before: Option<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub measure_after: Option<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub invariants_ok: Option<bool>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FinalRecord {
    pub terminal: String,
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub final_measure: Option<(i64, i64)>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceDocument {
    pub header: TraceHeader,
    pub steps: Vec<StepRecord>,
    pub finale: FinalRecord,
}

fn choice_payload(choice: &StepChoice) -> ChoicePayload {
    match choice {
        StepChoice::Split(selections) => ChoicePayload::Split {
            selections: selections
                .iter()
                .map(|s| SelectionRecord {
                    clause: s.clause.to_string(),
                    disjunct: s.disjunct.to_string(),
                })
                .collect(),
        },
        StepChoice::Inst(m) => ChoicePayload::Inst {
            tag: m.quantifier.tag.to_string(),
            terms: m.terms.iter().map(|t| t.to_string()).collect(),
            trigger_index: m.trigger_index,
        },
        StepChoice::Bot => ChoicePayload::Bot,
        StepChoice::Sat => ChoicePayload::Sat,
    }
}

/// Builds the document for a finished trace. Measures are included when a
/// configuration is supplied; per-step invariant verdicts when provided
/// (entry `i` covers the state after step `i`).
pub fn build_document(
    trace: &Trace,
    problem_digest: &str,
    scheduler: &str,
    seed: u64,
    cfg: Option<&MeasureConfig>,
    invariants_ok: Option<&[bool]>,
) -> TraceDocument {
    let digests: Vec<String> = trace.states().map(state_digest).collect();
    let measures: Option<Vec<MeasureValue>> =
        cfg.map(|cfg| trace.states().map(|s| measure(s, cfg)).collect());
    let as_pair = |m: &MeasureValue| (m.sigma, m.theta);

    let steps = trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, (choice, _))| StepRecord {
            step: i,
            rule: choice.rule_name().to_string(),
            choice: choice_payload(choice),
            digest_before: digests[i].clone(),
            digest_after: digests[i + 1].clone(),
            measure_before: measures.as_ref().map(|m| as_pair(&m[i])),
            measure_after: measures.as_ref().map(|m| as_pair(&m[i + 1])),
            invariants_ok: invariants_ok.and_then(|v| v.get(i).copied()),
        })
        .collect();

    TraceDocument {
        header: TraceHeader {
            version: TRACE_FORMAT_VERSION,
            problem_digest: problem_digest.to_string(),
            scheduler: scheduler.to_string(),
            seed,
        },
        steps,
        finale: FinalRecord {
            terminal: Terminal::of(trace).name().to_string(),
            steps: trace.steps.len(),
            final_measure: measures.as_ref().map(|m| as_pair(m.last().unwrap())),
        },
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TraceFormatError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("missing {0} record")]
    Missing(&'static str),
    #[error("unsupported version {0}")]
    Version(u32),
}

/// One JSON record per line: header, then steps, then the final record.
pub fn serialize_trace(doc: &TraceDocument) -> String {
    let mut out = String::new();
    out.push_str(&serde_json::to_string(&doc.header).unwrap());
    out.push('\n');
    for step in &doc.steps {
        out.push_str(&serde_json::to_string(step).unwrap());
        out.push('\n');
    }
    out.push_str(&serde_json::to_string(&doc.finale).unwrap());
    out.push('\n');
    out
}

pub fn parse_trace(text: &str) -> Result<TraceDocument, TraceFormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (line, header) = lines.next().ok_or(TraceFormatError::Missing("header"))?;
    let header: TraceHeader = serde_json::from_str(header)
        .map_err(|source| TraceFormatError::Json { line: line + 1, source })?;
    if header.version != TRACE_FORMAT_VERSION {
        return Err(TraceFormatError::Version(header.version));
    }
    let rest: Vec<(usize, &str)> = lines.collect();
    let Some(((final_line, final_text), step_lines)) = rest.split_last() else {
        return Err(TraceFormatError::Missing("final"));
    };
    let steps = step_lines
        .iter()
        .map(|(line, text)| {
            serde_json::from_str(text)
                .map_err(|source| TraceFormatError::Json { line: line + 1, source })
        })
        .collect::<Result<Vec<StepRecord>, _>>()?;
    let finale: FinalRecord = serde_json::from_str(final_text)
        .map_err(|source| TraceFormatError::Json { line: final_line + 1, source })?;
    Ok(TraceDocument { header, steps, finale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Literal;
    use crate::run::{run, Limits, Scheduler};
    use crate::settheory::bundle;
    use crate::term::{Func, Sort, Symbol, Term};
    use crate::transitions::{initial_state, Modes};

    fn cst(name: &str, sort: Sort) -> Term {
        Term::constant(Func::new(Symbol::new(name), vec![], sort))
    }

    #[test]
    fn empty_trace_serializes_as_saturated() {
        let initial = initial_state(&[], &[]);
        let outcome = run(initial, Scheduler::InstFirst, 0, Modes::default(), Limits::default());
        let doc = build_document(&outcome.traces[0], "deadbeef", "inst-first", 0, None, None);
        // The (sat) transition itself is one step.
        assert_eq!(doc.finale.terminal, "saturated");
        assert_eq!(doc.steps.len(), 1);
        assert_eq!(doc.steps[0].rule, "sat");
        let round = parse_trace(&serialize_trace(&doc)).unwrap();
        assert_eq!(round, doc);
    }

    #[test]
    fn one_step_bot_trace() {
        let set = Sort::new("SetT");
        let (x, y) = (cst("x", set), cst("y", set));
        let initial = initial_state(&[], &[Literal::equality(x, y), Literal::disequality(x, y)]);
        let outcome = run(initial, Scheduler::Random, 3, Modes::default(), Limits::default());
        let doc = build_document(&outcome.traces[0], "d", "random", 3, None, None);
        assert_eq!(doc.finale.terminal, "inconsistent");
        assert_eq!(doc.steps.len(), 1);
        assert_eq!(doc.steps[0].choice, ChoicePayload::Bot);
    }

    #[test]
    fn digests_chain_and_round_trip_preserves_measures() {
        let b = bundle();
        let member = b.function("member");
        let t0 = cst("t0", b.elem_sort);
        let a = cst("a", b.set_sort);
        let initial = initial_state(
            &b.axioms,
            &[Literal::pred(Term::app(member, vec![t0, a]), true)],
        );
        let outcome = run(initial, Scheduler::InstFirst, 0, Modes::default(), Limits::default());
        let cfg = crate::measure::MeasureConfig::settheory();
        let doc = build_document(&outcome.traces[0], "p", "inst-first", 0, Some(&cfg), None);
        for pair in doc.steps.windows(2) {
            assert_eq!(pair[0].digest_after, pair[1].digest_before);
        }
        assert!(doc.steps.iter().all(|s| s.measure_before.is_some()));
        assert_eq!(doc.finale.final_measure, Some((-1, -1)));
        let round = parse_trace(&serialize_trace(&doc)).unwrap();
        assert_eq!(round, doc);
    }

    #[test]
    fn serialization_is_deterministic() {
        let initial = initial_state(&[], &[]);
        let outcome = run(initial, Scheduler::InstFirst, 0, Modes::default(), Limits::default());
        let doc = build_document(&outcome.traces[0], "deadbeef", "inst-first", 0, None, None);
        assert_eq!(serialize_trace(&doc), serialize_trace(&doc));
    }
}
