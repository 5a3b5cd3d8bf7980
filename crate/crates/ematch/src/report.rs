//! Structured check reports: one record per finding, serialised as JSON
//! lines, with a summary consumed by the command-line frontend.

use serde::{Deserialize, Serialize};

use crate::invariants::InvariantViolation;
use crate::measure::{DescentReport, DescentViolation};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReportRecord {
    pub trace_id: usize,
    /// State index for invariant findings, step index for descent findings.
    pub step_index: usize,
    pub check: String,
    pub status: String,
    pub detail: String,
}

impl ReportRecord {
    pub fn from_invariant(trace_id: usize, v: &InvariantViolation) -> ReportRecord {
        ReportRecord {
            trace_id,
            step_index: v.state,
            check: v.check.to_string(),
            status: "violated".into(),
            detail: v.detail.clone(),
        }
    }

    pub fn from_descent(trace_id: usize, v: &DescentViolation) -> ReportRecord {
        ReportRecord {
            trace_id,
            step_index: v.step,
            check: format!("descent:{}", v.kind),
            status: "violated".into(),
            detail: format!("{} step: before {} after {}", v.rule, v.before, v.after),
        }
    }

    pub fn from_descent_report(trace_id: usize, report: &DescentReport) -> Vec<ReportRecord> {
        report
            .violations
            .iter()
            .map(|v| ReportRecord::from_descent(trace_id, v))
            .collect()
    }
}

pub fn to_jsonl(records: &[ReportRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).unwrap());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_serialize_one_per_line() {
        let records = vec![
            ReportRecord {
                trace_id: 0,
                step_index: 3,
                check: "IG:NA".into(),
                status: "violated".into(),
                detail: "unit clause".into(),
            },
            ReportRecord {
                trace_id: 1,
                step_index: 0,
                check: "descent:sigma-increased-at-split".into(),
                status: "violated".into(),
                detail: "split step".into(),
            },
        ];
        let text = to_jsonl(&records);
        assert_eq!(text.lines().count(), 2);
        let parsed: ReportRecord = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(parsed, records[0]);
    }
}
