//! Shape-directed exact solvers.
//!
//! * square systems are feasible iff the optimal assignment is not unique; a
//!   solution comes from dropping a row that meets two optimal matchings and
//!   applying Cramer's rule to the rest;
//! * systems with fewer rows than columns are always feasible (Cramer's rule);
//! * taller systems are split into `n + 1` row subsets covering every row at
//!   least `n` times. Solutions `s_i` of the subsets are glued together with a
//!   solution `alpha` of the underdetermined system `S^T`:
//!   `x = min_i (s_i + alpha_i)`. Subproblems are memoized by row set.

use std::collections::HashMap;
use std::time::Instant;

use crate::assignment::{cramer_unchecked, OptimalAssignment};
use crate::error::{Result, TropError};
use crate::lifting::{solve_general_scheme, SchemeOptions, Strategy};
use crate::matrix::{
    is_solution_unchecked, normalize_nonnegative, tropical_row_sum, SolutionVector, TropMatrix,
};
use crate::outcome::{InfeasibleReason, SolveOutcome, SolveStats, Verdict};

/// `n + 1` row subsets of an `m x n` system, each row covered at least `n`
/// times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCover {
    subsets: Vec<Vec<usize>>,
}

impl RowCover {
    pub fn new(mut subsets: Vec<Vec<usize>>, rows: usize, cols: usize) -> Result<Self> {
        if subsets.len() != cols + 1 {
            return Err(TropError::InvalidCover(format!(
                "expected {} subsets, got {}",
                cols + 1,
                subsets.len()
            )));
        }
        let mut coverage = vec![0usize; rows];
        for s in &mut subsets {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(TropError::InvalidCover("empty subset".into()));
            }
            for &i in s.iter() {
                if i >= rows {
                    return Err(TropError::InvalidCover(format!("row {i} out of range")));
                }
                coverage[i] += 1;
            }
        }
        if let Some((i, &c)) = coverage.iter().enumerate().find(|&(_, &c)| c < cols) {
            return Err(TropError::InvalidCover(format!(
                "row {i} covered {c} times, need {cols}"
            )));
        }
        Ok(Self { subsets })
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }
}

/// The first `n` rows, then every row but the first, every row but the
/// second, ..., every row but the `n`-th.
pub fn default_row_cover(rows: usize, cols: usize) -> Result<RowCover> {
    if rows <= cols {
        return Err(TropError::WrongShape {
            expected: "more rows than columns",
            rows,
            cols,
        });
    }
    let all: Vec<usize> = (0..rows).collect();
    Ok(RowCover {
        subsets: cover_of(&all, cols),
    })
}

fn cover_of(rows: &[usize], cols: usize) -> Vec<Vec<usize>> {
    let mut subsets = Vec::with_capacity(cols + 1);
    subsets.push(rows[..cols].to_vec());
    for skip in 0..cols {
        subsets.push(
            rows.iter()
                .enumerate()
                .filter(|&(p, _)| p != skip)
                .map(|(_, &r)| r)
                .collect(),
        );
    }
    subsets
}

/// Subproblem results keyed by the sorted row indices of the root matrix.
#[derive(Debug, Default)]
pub struct MemoStore {
    map: HashMap<Vec<usize>, Verdict>,
    disabled: bool,
}

impl MemoStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// A store that never remembers anything; every subproblem is recomputed.
    pub fn disabled() -> Self {
        Self {
            map: HashMap::new(),
            disabled: true,
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, rows: &[usize]) -> Option<&Verdict> {
        self.map.get(rows)
    }

    fn insert(&mut self, rows: Vec<usize>, verdict: Verdict) {
        if !self.disabled {
            self.map.insert(rows, verdict);
        }
    }
}

fn lifting_fallback(a: &TropMatrix, stats: &mut SolveStats, why: String) -> Result<SolveOutcome> {
    stats.diagnostics.push(why);
    stats.fallbacks += 1;
    let norm = normalize_nonnegative(a)?;
    let out = solve_general_scheme(
        &norm.matrix,
        Strategy::GrigorievOptimized,
        &SchemeOptions::default(),
    )?;
    stats.absorb(&out.stats);
    Ok(SolveOutcome {
        verdict: out.verdict,
        stats: std::mem::take(stats),
    })
}

/// Square systems: feasible iff tropically singular.
pub fn solve_square(a: &TropMatrix) -> Result<SolveOutcome> {
    if !a.is_square() {
        return Err(TropError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let start = Instant::now();
    let mut stats = SolveStats {
        assignment_calls: 1,
        ..Default::default()
    };
    let opt = OptimalAssignment::solve(a)?;
    let Some(col) = opt.column_on_tight_cycle() else {
        stats.micros = start.elapsed().as_micros() as u64;
        return Ok(SolveOutcome::infeasible(
            InfeasibleReason::Nonsingular,
            stats,
        ));
    };
    // The row matched to a column on a tight cycle meets two optimal
    // matchings. Its forced values minus its own entries are the Cramer
    // vector of the remaining rows.
    let drop = opt.row_of(col);
    let forced = opt.forced_row(drop);
    debug_assert!(forced.iter().filter(|&&f| f == opt.value()).count() >= 2);
    let x = SolutionVector::new(
        forced
            .iter()
            .zip(a.row(drop))
            .map(|(&f, &v)| f - v)
            .collect(),
    )
    .normalized();
    let out = if is_solution_unchecked(a, x.as_slice()) {
        SolveOutcome::feasible(x, stats)
    } else {
        lifting_fallback(
            a,
            &mut stats,
            format!("square solve produced non-solution {x:?} for {a:?}"),
        )?
    };
    Ok(with_time(out, start))
}

fn with_time(mut out: SolveOutcome, start: Instant) -> SolveOutcome {
    out.stats.micros = start.elapsed().as_micros() as u64;
    out
}

/// Systems with fewer rows than columns; always feasible. Rows are padded by
/// repeating the first one until there are `n - 1`, then Cramer's rule.
pub fn solve_underdetermined(a: &TropMatrix) -> Result<SolveOutcome> {
    let (m, n) = (a.rows(), a.cols());
    if m >= n {
        return Err(TropError::WrongShape {
            expected: "fewer rows than columns",
            rows: m,
            cols: n,
        });
    }
    let start = Instant::now();
    let mut stats = SolveStats {
        assignment_calls: 1,
        ..Default::default()
    };
    let mut padded = a.clone();
    while padded.rows() + 1 < n {
        padded = padded.with_row_appended(a.row(0));
    }
    let x = cramer_unchecked(&padded)?.normalized();
    let out = if is_solution_unchecked(a, x.as_slice()) {
        SolveOutcome::feasible(x, stats)
    } else {
        lifting_fallback(
            a,
            &mut stats,
            format!("Cramer vector {x:?} does not solve {a:?}"),
        )?
    };
    Ok(with_time(out, start))
}

/// Glues solutions of the `n + 1` subsets of a row cover into a solution of
/// `a`.
pub fn combine_subset_solutions(
    solutions: &[SolutionVector],
    a: &TropMatrix,
) -> Result<SolutionVector> {
    let n = a.cols();
    if solutions.len() != n + 1 {
        return Err(TropError::DimensionMismatch {
            expected: n + 1,
            found: solutions.len(),
        });
    }
    if let Some(bad) = solutions.iter().find(|s| s.len() != n) {
        return Err(TropError::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    let shifted: Vec<SolutionVector> = solutions.iter().map(SolutionVector::normalized).collect();
    // S^T: one row per column of `a`, one column per subset.
    let mut data = Vec::with_capacity(n * (n + 1));
    for j in 0..n {
        data.extend(shifted.iter().map(|s| s[j]));
    }
    let s_t = TropMatrix::new(n, n + 1, data)?;
    let alpha = cramer_unchecked(&s_t)?;
    if !is_solution_unchecked(&s_t, alpha.as_slice()) {
        return Err(TropError::Internal(format!(
            "Cramer vector {alpha:?} does not solve S^T = {s_t:?}"
        )));
    }
    let scaled: Vec<SolutionVector> = shifted
        .iter()
        .zip(alpha.as_slice())
        .map(|(s, &k)| s.shifted(k))
        .collect();
    let x = tropical_row_sum(&scaled)?.normalized();
    if !is_solution_unchecked(a, x.as_slice()) {
        return Err(TropError::Internal(format!(
            "combined vector {x:?} does not solve {a:?}; are the subset solutions valid?"
        )));
    }
    Ok(x)
}

struct Recursion<'a> {
    a: &'a TropMatrix,
    memo: &'a mut MemoStore,
    stats: SolveStats,
}

impl Recursion<'_> {
    fn node(&mut self, rows: &[usize], cover: Option<&RowCover>) -> Result<Verdict> {
        if let Some(v) = self.memo.get(rows) {
            self.stats.memo_hits += 1;
            return Ok(v.clone());
        }
        self.stats.recursion_nodes += 1;
        let n = self.a.cols();
        let verdict = if rows.len() <= n {
            let sub = self.a.select_rows(rows);
            let out = if rows.len() == n {
                solve_square(&sub)?
            } else {
                solve_underdetermined(&sub)?
            };
            self.stats.absorb(&out.stats);
            out.verdict
        } else {
            let subsets = match cover {
                Some(c) => c.subsets().to_vec(),
                None => cover_of(rows, n),
            };
            let mut solutions = Vec::with_capacity(n + 1);
            for s in &subsets {
                match self.node(s, None)? {
                    Verdict::Feasible(x) => solutions.push(x),
                    Verdict::Infeasible => break,
                }
            }
            if solutions.len() == subsets.len() {
                self.stats.assignment_calls += 1;
                let sub = self.a.select_rows(rows);
                Verdict::Feasible(combine_subset_solutions(&solutions, &sub)?)
            } else {
                Verdict::Infeasible
            }
        };
        self.memo.insert(rows.to_vec(), verdict.clone());
        Ok(verdict)
    }
}

/// Exact solver for `m > n`, using the default cover at every level.
pub fn solve_overdetermined(a: &TropMatrix, memo: &mut MemoStore) -> Result<SolveOutcome> {
    run_overdetermined(a, None, memo)
}

/// As [`solve_overdetermined`], with a caller-chosen cover at the top level.
pub fn solve_overdetermined_with_cover(
    a: &TropMatrix,
    cover: &RowCover,
    memo: &mut MemoStore,
) -> Result<SolveOutcome> {
    run_overdetermined(a, Some(cover), memo)
}

fn run_overdetermined(
    a: &TropMatrix,
    cover: Option<&RowCover>,
    memo: &mut MemoStore,
) -> Result<SolveOutcome> {
    if a.rows() <= a.cols() {
        return Err(TropError::WrongShape {
            expected: "more rows than columns",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let start = Instant::now();
    let all: Vec<usize> = (0..a.rows()).collect();
    let mut rec = Recursion {
        a,
        memo,
        stats: SolveStats::default(),
    };
    let verdict = rec.node(&all, cover)?;
    let mut stats = rec.stats;
    stats.memo_entries = memo.len() as u64;
    stats.micros = start.elapsed().as_micros() as u64;
    Ok(match verdict {
        Verdict::Feasible(x) => SolveOutcome::feasible(x, stats),
        Verdict::Infeasible => {
            SolveOutcome::infeasible(InfeasibleReason::SubsystemInfeasible, stats)
        }
    })
}

/// Exact solver for any shape.
pub fn solve_exact(a: &TropMatrix, memo: &mut MemoStore) -> Result<SolveOutcome> {
    use std::cmp::Ordering;
    match a.rows().cmp(&a.cols()) {
        Ordering::Less => solve_underdetermined(a),
        Ordering::Equal => solve_square(a),
        Ordering::Greater => solve_overdetermined(a, memo),
    }
}
