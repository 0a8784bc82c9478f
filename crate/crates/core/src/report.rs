use serde::{Deserialize, Serialize};

use crate::outcome::{SolveOutcome, Verdict};

/// Machine-readable summary of one solver run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<i64>>,
    pub solver: String,
    /// Which exit declared the system infeasible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub lifts: u64,
    pub recursion_nodes: u64,
    pub memo_hits: u64,
    pub assignment_calls: u64,
    pub guard_trips: u64,
    pub micros: u64,
}

impl RunReport {
    pub fn new(solver: impl Into<String>, outcome: &SolveOutcome) -> Self {
        let s = &outcome.stats;
        let (verdict, solution) = match &outcome.verdict {
            Verdict::Feasible(x) => ("feasible", Some(x.as_slice().to_vec())),
            Verdict::Infeasible => ("infeasible", None),
        };
        Self {
            verdict: verdict.to_string(),
            solution,
            solver: solver.into(),
            reason: s.infeasible_reason.as_ref().map(ToString::to_string),
            lifts: s.lifts,
            recursion_nodes: s.recursion_nodes,
            memo_hits: s.memo_hits,
            assignment_calls: s.assignment_calls,
            guard_trips: s.guard_trips,
            micros: s.micros,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
