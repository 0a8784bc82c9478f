use std::fmt;

use serde::{Deserialize, Serialize};

use crate::matrix::SolutionVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "solution", rename_all = "lowercase")]
pub enum Verdict {
    Feasible(SolutionVector),
    Infeasible,
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible(_))
    }

    pub fn solution(&self) -> Option<&SolutionVector> {
        match self {
            Verdict::Feasible(x) => Some(x),
            Verdict::Infeasible => None,
        }
    }
}

/// Why a solver gave up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfeasibleReason {
    /// Every column has been lifted at least once.
    AllColumnsTouched,
    /// The lifting closure swallowed every column.
    LiftImpossible,
    /// A cumulative column addition exceeded the guard bound.
    GuardBound,
    /// The system has a single column, so every row has a strict minimum.
    SingleColumn,
    /// Square system whose optimal assignment is unique.
    Nonsingular,
    /// Some row subsystem is infeasible.
    SubsystemInfeasible,
}

impl fmt::Display for InfeasibleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InfeasibleReason::AllColumnsTouched => "all-columns-touched",
            InfeasibleReason::LiftImpossible => "lift-impossible",
            InfeasibleReason::GuardBound => "guard-bound",
            InfeasibleReason::SingleColumn => "single-column",
            InfeasibleReason::Nonsingular => "nonsingular",
            InfeasibleReason::SubsystemInfeasible => "subsystem-infeasible",
        };
        f.write_str(s)
    }
}

/// Counters collected during a solve.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub lifts: u64,
    pub touched_columns: usize,
    pub guard_trips: u64,
    pub recursion_nodes: u64,
    pub memo_hits: u64,
    pub memo_entries: u64,
    pub assignment_calls: u64,
    pub fallbacks: u64,
    pub micros: u64,
    pub infeasible_reason: Option<InfeasibleReason>,
    /// Internal-error diagnostics raised and recovered from during the solve.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl SolveStats {
    pub(crate) fn absorb(&mut self, other: &SolveStats) {
        self.lifts += other.lifts;
        self.guard_trips += other.guard_trips;
        self.recursion_nodes += other.recursion_nodes;
        self.memo_hits += other.memo_hits;
        self.assignment_calls += other.assignment_calls;
        self.fallbacks += other.fallbacks;
        self.diagnostics.extend(other.diagnostics.iter().cloned());
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub fn feasible(x: SolutionVector, stats: SolveStats) -> Self {
        Self {
            verdict: Verdict::Feasible(x),
            stats,
        }
    }

    pub fn infeasible(reason: InfeasibleReason, mut stats: SolveStats) -> Self {
        stats.infeasible_reason = Some(reason);
        Self {
            verdict: Verdict::Infeasible,
            stats,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.verdict.is_feasible()
    }

    pub fn solution(&self) -> Option<&SolutionVector> {
        self.verdict.solution()
    }
}
