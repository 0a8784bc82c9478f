//! Lifting solvers.
//!
//! All strategies share one loop: while some row of `A + additions` has a
//! strict minimum and some column has never been lifted, ask the strategy for
//! a nonnegative per-column increment and add it. Every strategy here only
//! ever proposes increments that keep `additions` below the componentwise
//! smallest nonnegative solution, so the loop ends exactly on that solution
//! when the system is feasible. A feasible system's smallest solution has a
//! zero coordinate, which is why lifting every column certifies infeasibility.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TropError};
use crate::matrix::{profile_unchecked, RowMin, SolutionVector, TropMatrix};
use crate::outcome::{InfeasibleReason, SolveOutcome, SolveStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Grigoriev's row-by-row recursion with the closure seeded by the
    /// current row's strict minimum.
    GrigorievOriginal,
    /// No recursion; the closure absorbs every strict-minimum column at once.
    GrigorievOptimized,
    /// Akian–Gaubert–Guterman: lift strict-minimum columns just enough to
    /// break the tie.
    Agg,
    /// Per-column maximum of the optimized Grigoriev and AGG increments.
    CombinedMax,
    /// Per-column minimum of the two increments.
    CombinedMin,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::GrigorievOriginal,
        Strategy::GrigorievOptimized,
        Strategy::Agg,
        Strategy::CombinedMax,
        Strategy::CombinedMin,
    ];

    /// Short name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Strategy::GrigorievOriginal => "original",
            Strategy::GrigorievOptimized => "optimized",
            Strategy::Agg => "agg",
            Strategy::CombinedMax => "combined-max",
            Strategy::CombinedMin => "combined-min",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "original" | "grigoriev-original" => Strategy::GrigorievOriginal,
            "optimized" | "grigoriev-optimized" => Strategy::GrigorievOptimized,
            "agg" => Strategy::Agg,
            "combined-max" | "combined" => Strategy::CombinedMax,
            "combined-min" => Strategy::CombinedMin,
            other => return Err(format!("unknown lifting strategy `{other}`")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    Max,
    Min,
}

/// Running state of the scheme. `additions` is the current candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftState {
    additions: Vec<i64>,
    touched: Vec<bool>,
    lifts: u64,
}

impl LiftState {
    pub fn new(cols: usize) -> Self {
        Self {
            additions: vec![0; cols],
            touched: vec![false; cols],
            lifts: 0,
        }
    }

    /// Starts from given cumulative additions; columns with a positive
    /// addition count as touched.
    pub fn with_additions(additions: Vec<i64>) -> Self {
        let touched = additions.iter().map(|&v| v > 0).collect();
        Self {
            additions,
            touched,
            lifts: 0,
        }
    }

    pub fn additions(&self) -> &[i64] {
        &self.additions
    }

    pub fn is_touched(&self, j: usize) -> bool {
        self.touched[j]
    }

    pub fn touched_count(&self) -> usize {
        self.touched.iter().filter(|&&t| t).count()
    }

    pub fn all_touched(&self) -> bool {
        self.touched.iter().all(|&t| t)
    }

    pub fn lifts(&self) -> u64 {
        self.lifts
    }

    pub fn apply(&mut self, increment: &[i64]) {
        debug_assert_eq!(increment.len(), self.additions.len());
        for (j, &inc) in increment.iter().enumerate() {
            debug_assert!(inc >= 0);
            if inc > 0 {
                self.additions[j] += inc;
                self.touched[j] = true;
            }
        }
        self.lifts += 1;
    }

    fn profile(&self, a: &TropMatrix) -> Vec<RowMin> {
        profile_unchecked(a, &self.additions)
    }
}

/// Outcome of a single lifting step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lift {
    Increment(Vec<i64>),
    /// No safe lift exists: the system is infeasible.
    Impossible,
}

fn check_state(a: &TropMatrix, state: &LiftState) -> Result<()> {
    if state.additions.len() != a.cols() {
        return Err(TropError::DimensionMismatch {
            expected: a.cols(),
            found: state.additions.len(),
        });
    }
    Ok(())
}

/// Grows `in_j` until no row in `rows` has exactly one minimum position
/// outside it. Rows are scanned in order, repeatedly.
fn close(profile: &[RowMin], rows: Range<usize>, in_j: &mut [bool]) {
    loop {
        let mut changed = false;
        for p in &profile[rows.clone()] {
            let mut outside = p.argmin.iter().filter(|&&j| !in_j[j]);
            if let (Some(&j), None) = (outside.next(), outside.next()) {
                in_j[j] = true;
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

fn mask(n: usize, seed: &[usize]) -> Vec<bool> {
    let mut in_j = vec![false; n];
    for &j in seed {
        in_j[j] = true;
    }
    in_j
}

/// Smallest set of columns containing `seed` such that no row of the offset
/// matrix has exactly one minimum position outside it.
pub fn closure_j(a: &TropMatrix, state: &LiftState, seed: &[usize]) -> Result<BTreeSet<usize>> {
    check_state(a, state)?;
    if let Some(&bad) = seed.iter().find(|&&j| j >= a.cols()) {
        return Err(TropError::IndexOutOfRange {
            row: 0,
            col: bad,
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let profile = state.profile(a);
    let mut in_j = mask(a.cols(), seed);
    close(&profile, 0..a.rows(), &mut in_j);
    Ok(in_j
        .iter()
        .enumerate()
        .filter_map(|(j, &b)| b.then_some(j))
        .collect())
}

/// Lift by the largest `a` that keeps every row's minimum positions minimal
/// after adding `a` to the columns in `in_j`.
fn grigoriev_step(
    a: &TropMatrix,
    state: &LiftState,
    profile: &[RowMin],
    rows: Range<usize>,
    in_j: &[bool],
) -> Result<Lift> {
    if in_j.iter().all(|&b| b) {
        return Ok(Lift::Impossible);
    }
    if !in_j.iter().any(|&b| b) {
        return Err(TropError::Precondition(
            "lifting requires a row with a strict minimum",
        ));
    }
    let mut amount = i64::MAX;
    for i in rows {
        let p = &profile[i];
        // Rows with minima outside J keep them; only fully-inside rows bound the lift.
        if p.argmin.iter().any(|&j| !in_j[j]) {
            continue;
        }
        let outside_min = a
            .row(i)
            .iter()
            .zip(&state.additions)
            .zip(in_j)
            .filter(|&(_, &inside)| !inside)
            .map(|((&v, &add), _)| v + add)
            .min()
            .expect("J is a proper subset");
        amount = amount.min(outside_min - p.min);
    }
    debug_assert!((1..i64::MAX).contains(&amount));
    Ok(Lift::Increment(
        in_j.iter().map(|&b| if b { amount } else { 0 }).collect(),
    ))
}

/// Optimized Grigoriev lifting: `J` starts empty and absorbs every column
/// that is the single outside minimum of some row.
pub fn lift_grigoriev_optimized(a: &TropMatrix, state: &LiftState) -> Result<Lift> {
    check_state(a, state)?;
    let profile = state.profile(a);
    let mut in_j = vec![false; a.cols()];
    close(&profile, 0..a.rows(), &mut in_j);
    grigoriev_step(a, state, &profile, 0..a.rows(), &in_j)
}

/// Original Grigoriev lifting for row `strict_row`. Only rows from
/// `strict_row` downwards are in play, matching the recursion that solves the
/// lower rows first.
pub fn lift_grigoriev_original(
    a: &TropMatrix,
    state: &LiftState,
    strict_row: usize,
) -> Result<Lift> {
    check_state(a, state)?;
    if strict_row >= a.rows() {
        return Err(TropError::IndexOutOfRange {
            row: strict_row,
            col: 0,
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let profile = state.profile(a);
    original_step(a, state, &profile, strict_row)
}

fn original_step(
    a: &TropMatrix,
    state: &LiftState,
    profile: &[RowMin],
    strict_row: usize,
) -> Result<Lift> {
    let p = &profile[strict_row];
    if !p.is_strict() {
        return Err(TropError::Precondition(
            "the lifted row must have a strict minimum",
        ));
    }
    let scope = strict_row..a.rows();
    let mut in_j = mask(a.cols(), &p.argmin);
    close(profile, scope.clone(), &mut in_j);
    grigoriev_step(a, state, profile, scope, &in_j)
}

/// Akian–Gaubert–Guterman lifting: each strict-minimum column is raised by
/// the largest gap among the rows whose strict minimum sits there.
///
/// Impossible only for single-column systems, where no row can ever tie.
pub fn lift_agg(a: &TropMatrix, state: &LiftState) -> Result<Lift> {
    check_state(a, state)?;
    agg_step(a.cols(), &state.profile(a))
}

fn agg_step(cols: usize, profile: &[RowMin]) -> Result<Lift> {
    let mut inc = vec![0i64; cols];
    let mut any = false;
    for p in profile.iter().filter(|p| p.is_strict()) {
        let Some(gap) = p.gap() else {
            return Ok(Lift::Impossible);
        };
        let j = p.argmin[0];
        inc[j] = inc[j].max(gap);
        any = true;
    }
    if !any {
        return Err(TropError::Precondition(
            "lifting requires a row with a strict minimum",
        ));
    }
    Ok(Lift::Increment(inc))
}

/// Per-column max (or min) of the optimized Grigoriev and AGG increments.
/// A Grigoriev `Impossible` is final in both modes.
pub fn lift_combined(a: &TropMatrix, state: &LiftState, mode: CombineMode) -> Result<Lift> {
    check_state(a, state)?;
    let profile = state.profile(a);
    combined_step(a, state, &profile, mode)
}

fn combined_step(
    a: &TropMatrix,
    state: &LiftState,
    profile: &[RowMin],
    mode: CombineMode,
) -> Result<Lift> {
    let mut in_j = vec![false; a.cols()];
    close(profile, 0..a.rows(), &mut in_j);
    let Lift::Increment(g) = grigoriev_step(a, state, profile, 0..a.rows(), &in_j)? else {
        return Ok(Lift::Impossible);
    };
    let Lift::Increment(v) = agg_step(a.cols(), profile)? else {
        return Ok(Lift::Impossible);
    };
    let pick = match mode {
        CombineMode::Max => i64::max,
        CombineMode::Min => i64::min,
    };
    Ok(Lift::Increment(
        g.iter().zip(&v).map(|(&x, &y)| pick(x, y)).collect(),
    ))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SchemeOptions {
    /// Cap on any cumulative column addition; `None` uses
    /// [`default_guard_bound`].
    pub guard_bound: Option<i64>,
}

/// `(n - 1) * M + 1` for a nonnegative matrix. The smallest nonnegative
/// solution of a feasible system never exceeds `(n - 1) * M` in any
/// coordinate: sorted, its consecutive gaps are at most `M`.
pub fn default_guard_bound(a: &TropMatrix) -> i64 {
    (a.cols() as i64 - 1) * a.max_entry().max(0) + 1
}

/// Runs the lifting loop on a nonnegative matrix.
pub fn solve_general_scheme(
    a: &TropMatrix,
    strategy: Strategy,
    opts: &SchemeOptions,
) -> Result<SolveOutcome> {
    solve_general_scheme_observed(a, strategy, opts, |_| {})
}

/// [`solve_general_scheme`], calling `observe` after every lift.
pub fn solve_general_scheme_observed(
    a: &TropMatrix,
    strategy: Strategy,
    opts: &SchemeOptions,
    mut observe: impl FnMut(&LiftState),
) -> Result<SolveOutcome> {
    if !a.is_nonnegative() {
        return Err(TropError::Precondition(
            "the lifting scheme expects a nonnegative matrix",
        ));
    }
    let start = Instant::now();
    let guard = opts.guard_bound.unwrap_or_else(|| default_guard_bound(a));
    let mut state = LiftState::new(a.cols());
    let mut stats = SolveStats::default();

    let result = if a.cols() == 1 {
        Err(InfeasibleReason::SingleColumn)
    } else if strategy == Strategy::GrigorievOriginal {
        run_original(a, &mut state, guard, &mut stats, &mut observe)?
    } else {
        run_flat(a, strategy, &mut state, guard, &mut stats, &mut observe)?
    };

    stats.lifts = state.lifts;
    stats.touched_columns = state.touched_count();
    stats.micros = start.elapsed().as_micros() as u64;
    Ok(match result {
        Ok(()) => {
            let x = SolutionVector::new(state.additions);
            debug_assert!(crate::matrix::is_solution_unchecked(a, x.as_slice()));
            SolveOutcome::feasible(x, stats)
        }
        Err(reason) => SolveOutcome::infeasible(reason, stats),
    })
}

type Step = std::result::Result<(), InfeasibleReason>;

fn apply_guarded(
    state: &mut LiftState,
    inc: &[i64],
    guard: i64,
    stats: &mut SolveStats,
    observe: &mut impl FnMut(&LiftState),
) -> Step {
    state.apply(inc);
    observe(state);
    if state.additions.iter().any(|&v| v > guard) {
        stats.guard_trips += 1;
        return Err(InfeasibleReason::GuardBound);
    }
    Ok(())
}

fn run_flat(
    a: &TropMatrix,
    strategy: Strategy,
    state: &mut LiftState,
    guard: i64,
    stats: &mut SolveStats,
    observe: &mut impl FnMut(&LiftState),
) -> Result<Step> {
    loop {
        let profile = state.profile(a);
        if !profile.iter().any(RowMin::is_strict) {
            return Ok(Ok(()));
        }
        if state.all_touched() {
            return Ok(Err(InfeasibleReason::AllColumnsTouched));
        }
        let lift = match strategy {
            Strategy::GrigorievOptimized => {
                let mut in_j = vec![false; a.cols()];
                close(&profile, 0..a.rows(), &mut in_j);
                grigoriev_step(a, state, &profile, 0..a.rows(), &in_j)?
            }
            Strategy::Agg => agg_step(a.cols(), &profile)?,
            Strategy::CombinedMax => combined_step(a, state, &profile, CombineMode::Max)?,
            Strategy::CombinedMin => combined_step(a, state, &profile, CombineMode::Min)?,
            Strategy::GrigorievOriginal => unreachable!("handled by run_original"),
        };
        let Lift::Increment(inc) = lift else {
            return Ok(Err(InfeasibleReason::LiftImpossible));
        };
        if let Err(reason) = apply_guarded(state, &inc, guard, stats, observe) {
            return Ok(Err(reason));
        }
    }
}

/// Bottom row first; each new row is lifted until its minimum ties, while
/// the rows below it stay tied.
fn run_original(
    a: &TropMatrix,
    state: &mut LiftState,
    guard: i64,
    stats: &mut SolveStats,
    observe: &mut impl FnMut(&LiftState),
) -> Result<Step> {
    for r in (0..a.rows()).rev() {
        loop {
            let profile = state.profile(a);
            debug_assert!(profile[r + 1..].iter().all(|p| !p.is_strict()));
            if !profile[r].is_strict() {
                break;
            }
            if state.all_touched() {
                return Ok(Err(InfeasibleReason::AllColumnsTouched));
            }
            let Lift::Increment(inc) = original_step(a, state, &profile, r)? else {
                return Ok(Err(InfeasibleReason::LiftImpossible));
            };
            if let Err(reason) = apply_guarded(state, &inc, guard, stats, observe) {
                return Ok(Err(reason));
            }
        }
    }
    Ok(Ok(()))
}
