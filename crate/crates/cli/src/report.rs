use serde::Serialize;

use distcalc::verify::CheckResult;
use distcalc::{Bindings, ReductionTrace, ValuePoly};

#[derive(Debug, Serialize)]
pub struct TraceRecord {
    pub rule: String,
    pub before: String,
    pub after: String,
}

pub fn trace_records(trace: &ReductionTrace) -> Vec<TraceRecord> {
    trace
        .steps
        .iter()
        .map(|s| TraceRecord {
            rule: s.rule.name().to_string(),
            before: s.before.to_string(),
            after: s.after.to_string(),
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceRecord>>,
}

/// Renders a value, substituting `ω` when a value is given.
pub fn show(v: &ValuePoly, omega: Option<&Bindings>) -> String {
    match omega {
        Some(b) => v.substitute(b).map(|x| x.to_string()).unwrap_or_else(|e| e.to_string()),
        None => v.to_string(),
    }
}

impl CheckRecord {
    pub fn new(check: &CheckResult, with_trace: bool, omega: Option<&Bindings>) -> Self {
        CheckRecord {
            name: check.name.clone(),
            expected: show(&check.expected, omega),
            actual: show(&check.actual, omega),
            passed: check.passed,
            trace: if with_trace {
                check.trace.as_ref().map(trace_records)
            } else {
                None
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReduceRecord {
    pub expression: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceRecord>>,
}

#[derive(Debug, Serialize)]
pub struct DiagramRecord {
    pub class: String,
    pub prefactor: String,
    pub coefficient: String,
    pub diagram: String,
    pub contractions: usize,
    pub vanishes: bool,
}

#[derive(Debug, Serialize)]
pub struct ClassSumRecord {
    pub class: String,
    pub reduced: String,
}

#[derive(Debug, Serialize)]
pub struct DiagramReport {
    pub order: u32,
    pub diagrams: Vec<DiagramRecord>,
    pub class_sums: Vec<ClassSumRecord>,
    pub total: String,
}
