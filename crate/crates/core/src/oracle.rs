//! Brute-force ground truth for desk-scale instances.
//!
//! Nothing in here calls into the solvers: feasibility is decided by walking
//! every integer vector in a box and checking each row directly, and the
//! permanent by visiting every permutation.

use crate::error::{Result, TropError};
use crate::matrix::{SolutionVector, TropMatrix};
use crate::outcome::Verdict;

/// Default cap on the number of grid points `oracle_solve` will visit:
/// five coordinates ranging over `0..=20`.
pub const DEFAULT_GRID_BUDGET: u128 = 21u128.pow(5);

/// Largest matrix order `oracle_permanent` accepts.
pub const MAX_PERMANENT_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Upper end of the search box for every coordinate. `None` means
    /// `(n - 1) * M` of the row-normalized matrix.
    pub max_coordinate: Option<i64>,
    /// Refuse to search more grid points than this.
    pub budget: u128,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_coordinate: None,
            budget: DEFAULT_GRID_BUDGET,
        }
    }
}

fn row_normalized(a: &TropMatrix) -> Vec<Vec<i64>> {
    a.row_iter()
        .map(|row| {
            let lo = *row.iter().min().unwrap();
            row.iter().map(|&v| v - lo).collect()
        })
        .collect()
}

fn ties(row: &[i64], x: &[i64]) -> bool {
    let lo = row.iter().zip(x).map(|(a, b)| a + b).min().unwrap();
    row.iter().zip(x).filter(|&(a, b)| a + b == lo).count() >= 2
}

/// The search box bound used when none is configured.
pub fn default_max_coordinate(a: &TropMatrix) -> i64 {
    let rows = row_normalized(a);
    let max = rows.iter().flatten().copied().max().unwrap_or(0);
    (a.cols() as i64 - 1) * max
}

/// Searches `{0..=bound}^n` for solutions. Returns the componentwise minimum
/// of all of them (itself a solution) or `Infeasible` if there are none.
pub fn oracle_solve(a: &TropMatrix, cfg: &OracleConfig) -> Result<Verdict> {
    let n = a.cols();
    let bound = cfg
        .max_coordinate
        .unwrap_or_else(|| default_max_coordinate(a));
    if bound < 0 {
        return Err(TropError::Precondition("search bound must be nonnegative"));
    }
    let side = bound as u128 + 1;
    let points = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(side));
    match points {
        Some(p) if p <= cfg.budget => {}
        _ => {
            return Err(TropError::OracleBudget {
                points: points.unwrap_or(u128::MAX),
                budget: cfg.budget,
            })
        }
    }

    let rows = row_normalized(a);
    let mut x = vec![0i64; n];
    let mut best: Option<Vec<i64>> = None;
    loop {
        if rows.iter().all(|r| ties(r, &x)) {
            best = Some(match best {
                None => x.clone(),
                Some(b) => b.iter().zip(&x).map(|(&p, &q)| p.min(q)).collect(),
            });
        }
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == n {
                return Ok(match best {
                    Some(b) => Verdict::Feasible(SolutionVector::new(b)),
                    None => Verdict::Infeasible,
                });
            }
            if x[k] < bound {
                x[k] += 1;
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

/// Minimum diagonal sum over all permutations and how many permutations
/// attain it.
pub fn oracle_permanent(a: &TropMatrix) -> Result<(i64, usize)> {
    if !a.is_square() {
        return Err(TropError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n > MAX_PERMANENT_ORDER {
        let fact = |k: usize| (1..=k as u128).product::<u128>();
        return Err(TropError::OracleBudget {
            points: fact(n),
            budget: fact(MAX_PERMANENT_ORDER),
        });
    }
    let mut best = (i64::MAX, 0usize);
    let mut used = vec![false; n];
    visit(a, 0, 0, &mut used, &mut best);
    Ok(best)
}

fn visit(a: &TropMatrix, row: usize, acc: i64, used: &mut [bool], best: &mut (i64, usize)) {
    if row == a.rows() {
        if acc < best.0 {
            *best = (acc, 1);
        } else if acc == best.0 {
            best.1 += 1;
        }
        return;
    }
    for col in 0..a.cols() {
        if !used[col] {
            used[col] = true;
            visit(a, row + 1, acc + a.get(row, col), used, best);
            used[col] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> TropMatrix {
        TropMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn solve_examples() {
        // Grid 0..=2 in three coordinates; by hand, (1,0,1) is the least solution.
        let v = oracle_solve(&m(&[&[1, 2, 3], &[3, 2, 1]]), &OracleConfig::default()).unwrap();
        assert_eq!(v, Verdict::Feasible(SolutionVector::new(vec![1, 0, 1])));
        let v = oracle_solve(&m(&[&[1, 2], &[3, 2]]), &OracleConfig::default()).unwrap();
        assert_eq!(v, Verdict::Infeasible);
        let v = oracle_solve(&m(&[&[0, 0]]), &OracleConfig::default()).unwrap();
        assert_eq!(v, Verdict::Feasible(SolutionVector::new(vec![0, 0])));
    }

    #[test]
    fn solve_refuses_large_grids() {
        let a = TropMatrix::new(1, 6, vec![0, 20, 20, 20, 20, 20]).unwrap();
        assert!(matches!(
            oracle_solve(&a, &OracleConfig::default()),
            Err(TropError::OracleBudget { .. })
        ));
    }

    #[test]
    fn permanent_examples() {
        assert_eq!(oracle_permanent(&m(&[&[1, 2], &[2, 3]])).unwrap(), (4, 2));
        assert_eq!(oracle_permanent(&m(&[&[1, 2], &[3, 2]])).unwrap(), (3, 1));
        assert_eq!(oracle_permanent(&m(&[&[-7]])).unwrap(), (-7, 1));
        let big = TropMatrix::new(9, 9, vec![0; 81]).unwrap();
        assert!(oracle_permanent(&big).is_err());
    }
}
