//! Minimum-weight perfect matchings on square matrices: the tropical
//! permanent, singularity, forced-cell values and tropical Cramer's rule.
//!
//! Everything here is driven by a single Hungarian-method solve that also
//! yields dual potentials `u`, `v` with `A[i][j] - u[i] - v[j] >= 0`, tight on
//! the optimal matching. Reduced costs answer the follow-up questions in
//! `O(n^2)`:
//!
//! * another optimal matching exists iff the tight-edge graph has an
//!   alternating cycle;
//! * the best matching through cell `(i, j)` costs the optimum plus the
//!   reduced cost of `(i, j)` plus the shortest alternating path closing the
//!   cycle back to row `i`'s matched column.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TropError};
use crate::matrix::{is_solution_unchecked, SolutionVector, TropMatrix};

const INF: i64 = i64::MAX / 4;

/// Minimum total weight together with one permutation attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentResult {
    pub value: i64,
    /// `matching[i]` is the column assigned to row `i`.
    pub matching: Vec<usize>,
}

/// Optimal assignment with its dual certificate.
#[derive(Clone, Debug)]
pub(crate) struct OptimalAssignment<'a> {
    cost: &'a TropMatrix,
    value: i64,
    row_to_col: Vec<usize>,
    col_to_row: Vec<usize>,
    u: Vec<i64>,
    v: Vec<i64>,
}

impl<'a> OptimalAssignment<'a> {
    /// Hungarian method with potentials, `O(n^3)`.
    pub(crate) fn solve(cost: &'a TropMatrix) -> Result<Self> {
        if !cost.is_square() {
            return Err(TropError::NotSquare {
                rows: cost.rows(),
                cols: cost.cols(),
            });
        }
        let n = cost.rows();
        // 1-based, slot 0 is the virtual column used to grow augmenting paths.
        let mut u = vec![0i64; n + 1];
        let mut v = vec![0i64; n + 1];
        let mut p = vec![0usize; n + 1];
        let mut way = vec![0usize; n + 1];
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];

        for i in 1..=n {
            p[0] = i;
            let mut j0 = 0usize;
            minv.fill(INF);
            used.fill(false);
            loop {
                used[j0] = true;
                let i0 = p[j0];
                let row = cost.row(i0 - 1);
                let mut delta = INF;
                let mut j1 = 0usize;
                for j in 1..=n {
                    if used[j] {
                        continue;
                    }
                    let cur = row[j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
                for j in 0..=n {
                    if used[j] {
                        u[p[j]] += delta;
                        v[j] -= delta;
                    } else {
                        minv[j] -= delta;
                    }
                }
                j0 = j1;
                if p[j0] == 0 {
                    break;
                }
            }
            loop {
                let j1 = way[j0];
                p[j0] = p[j1];
                j0 = j1;
                if j0 == 0 {
                    break;
                }
            }
        }

        let mut row_to_col = vec![0usize; n];
        let mut col_to_row = vec![0usize; n];
        for j in 1..=n {
            row_to_col[p[j] - 1] = j - 1;
            col_to_row[j - 1] = p[j] - 1;
        }
        let value = row_to_col
            .iter()
            .enumerate()
            .map(|(i, &j)| cost.get(i, j))
            .sum();
        Ok(Self {
            cost,
            value,
            row_to_col,
            col_to_row,
            u: u[1..].to_vec(),
            v: v[1..].to_vec(),
        })
    }

    pub(crate) fn value(&self) -> i64 {
        self.value
    }

    pub(crate) fn into_result(self) -> AssignmentResult {
        AssignmentResult {
            value: self.value,
            matching: self.row_to_col,
        }
    }

    #[inline]
    fn reduced(&self, i: usize, j: usize) -> i64 {
        self.cost.get(i, j) - self.u[i] - self.v[j]
    }

    /// A column lying on an alternating cycle of zero reduced cost, if any.
    /// Such a cycle exists iff the optimum is attained by two permutations.
    pub(crate) fn column_on_tight_cycle(&self) -> Option<usize> {
        let n = self.row_to_col.len();
        // Column graph: c -> c' when the row matched to c has a tight edge to c'.
        let succ = |c: usize| {
            let r = self.col_to_row[c];
            (0..n).filter(move |&d| d != c && self.reduced(r, d) == 0)
        };
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Open,
            Done,
        }
        let mut mark = vec![Mark::New; n];
        for start in 0..n {
            if mark[start] != Mark::New {
                continue;
            }
            let mut stack: Vec<(usize, Box<dyn Iterator<Item = usize> + '_>)> = Vec::new();
            mark[start] = Mark::Open;
            stack.push((start, Box::new(succ(start))));
            while let Some((c, it)) = stack.last_mut() {
                let c = *c;
                match it.next() {
                    Some(d) => match mark[d] {
                        Mark::Open => return Some(d),
                        Mark::New => {
                            mark[d] = Mark::Open;
                            stack.push((d, Box::new(succ(d))));
                        }
                        Mark::Done => {}
                    },
                    None => {
                        mark[c] = Mark::Done;
                        stack.pop();
                    }
                }
            }
        }
        None
    }

    /// Row matched to column `c`.
    pub(crate) fn row_of(&self, c: usize) -> usize {
        self.col_to_row[c]
    }

    /// For every column `j`, the minimum weight of a perfect matching that
    /// assigns row `i` to `j`.
    pub(crate) fn forced_row(&self, i: usize) -> Vec<i64> {
        let n = self.row_to_col.len();
        let target = self.row_to_col[i];
        // dist[c]: cheapest alternating path from column c back to `target`,
        // via c -> row_of(c) -> c' at cost reduced(row_of(c), c').
        let mut dist = vec![INF; n];
        let mut done = vec![false; n];
        dist[target] = 0;
        for _ in 0..n {
            let Some(next) = (0..n)
                .filter(|&c| !done[c] && dist[c] < INF)
                .min_by_key(|&c| dist[c])
            else {
                break;
            };
            done[next] = true;
            for c in 0..n {
                if done[c] {
                    continue;
                }
                let cand = self.reduced(self.col_to_row[c], next) + dist[next];
                if cand < dist[c] {
                    dist[c] = cand;
                }
            }
        }
        (0..n)
            .map(|j| {
                if j == target {
                    self.value
                } else {
                    self.value + self.reduced(i, j) + dist[j]
                }
            })
            .collect()
    }
}

fn require_square(a: &TropMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(TropError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        })
    }
}

/// Minimum over all permutations of the diagonal sum, with a witness.
pub fn tropical_permanent(a: &TropMatrix) -> Result<AssignmentResult> {
    Ok(OptimalAssignment::solve(a)?.into_result())
}

/// Minimum assignment weight among permutations sending row `i` to column `j`,
/// i.e. `A[i][j]` plus the permanent of the complementary minor.
pub fn forced_value(a: &TropMatrix, i: usize, j: usize) -> Result<i64> {
    require_square(a)?;
    if i >= a.rows() || j >= a.cols() {
        return Err(TropError::IndexOutOfRange {
            row: i,
            col: j,
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let rest = match a.minor(i, j) {
        Some(minor) => tropical_permanent(&minor)?.value,
        None => 0,
    };
    Ok(a.get(i, j) + rest)
}

/// [`forced_value`] for every cell of row `i`, from one assignment solve.
pub fn forced_values_row(a: &TropMatrix, i: usize) -> Result<Vec<i64>> {
    require_square(a)?;
    if i >= a.rows() {
        return Err(TropError::IndexOutOfRange {
            row: i,
            col: 0,
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(OptimalAssignment::solve(a)?.forced_row(i))
}

/// True iff at least two distinct permutations attain the permanent.
pub fn is_singular(a: &TropMatrix) -> Result<bool> {
    Ok(OptimalAssignment::solve(a)?
        .column_on_tight_cycle()
        .is_some())
}

/// Tropical Cramer's rule for an `(n-1) x n` system: `x[j]` is the permanent
/// of the matrix with column `j` deleted.
pub fn cramer_solve(a: &TropMatrix) -> Result<SolutionVector> {
    let n = a.cols();
    if n < 2 || a.rows() + 1 != n {
        return Err(TropError::WrongShape {
            expected: "an (n-1) x n matrix with n >= 2",
            rows: a.rows(),
            cols: n,
        });
    }
    let x = cramer_unchecked(a)?;
    if !is_solution_unchecked(a, x.as_slice()) {
        return Err(TropError::Internal(format!(
            "Cramer vector {x:?} does not solve {a:?}"
        )));
    }
    Ok(x)
}

/// Permanents of the column-deleted minors: append a zero row and read off
/// the forced values of that row.
pub(crate) fn cramer_unchecked(a: &TropMatrix) -> Result<SolutionVector> {
    let padded = a.with_row_appended(&vec![0; a.cols()]);
    let opt = OptimalAssignment::solve(&padded)?;
    Ok(SolutionVector::new(opt.forced_row(a.rows())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> TropMatrix {
        TropMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn permanent_examples() {
        assert_eq!(tropical_permanent(&m(&[&[0]])).unwrap().value, 0);
        let r = tropical_permanent(&m(&[&[1, 2], &[3, 2]])).unwrap();
        assert_eq!(
            r,
            AssignmentResult {
                value: 3,
                matching: vec![0, 1]
            }
        );
        assert_eq!(
            tropical_permanent(&m(&[&[1, 2], &[2, 3]])).unwrap().value,
            4
        );
        assert!(matches!(
            tropical_permanent(&m(&[&[1, 2]])),
            Err(TropError::NotSquare { rows: 1, cols: 2 })
        ));
    }

    #[test]
    fn permanent_handles_negative_entries() {
        let a = m(&[&[-5, 3, 0], &[2, -1, 4], &[0, 0, -7]]);
        assert_eq!(tropical_permanent(&a).unwrap().value, -13);
    }

    #[test]
    fn forced_examples() {
        let a = m(&[&[1, 2], &[3, 2]]);
        assert_eq!(forced_value(&a, 0, 0).unwrap(), 3);
        assert_eq!(forced_value(&a, 0, 1).unwrap(), 5);
        assert_eq!(forced_value(&m(&[&[7]]), 0, 0).unwrap(), 7);
        assert!(matches!(
            forced_value(&a, 2, 0),
            Err(TropError::IndexOutOfRange { .. })
        ));
        assert_eq!(forced_values_row(&a, 0).unwrap(), vec![3, 5]);
        assert_eq!(forced_values_row(&a, 1).unwrap(), vec![5, 3]);
    }

    #[test]
    fn singular_examples() {
        assert!(is_singular(&m(&[&[1, 2], &[2, 3]])).unwrap());
        assert!(!is_singular(&m(&[&[1, 2], &[3, 2]])).unwrap());
        assert!(!is_singular(&m(&[&[0]])).unwrap());
        assert!(is_singular(&m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]])).unwrap());
    }

    #[test]
    fn cramer_examples() {
        let x = cramer_solve(&m(&[&[1, 2, 3], &[1, 2, 1]])).unwrap();
        assert_eq!(x.as_slice(), &[3, 2, 3]);
        let x = cramer_solve(&m(&[&[1, 2, 3], &[3, 2, 1]])).unwrap();
        assert_eq!(x.as_slice(), &[3, 2, 3]);
        let x = cramer_solve(&m(&[&[0, 0]])).unwrap();
        assert_eq!(x.as_slice(), &[0, 0]);
        assert!(matches!(
            cramer_solve(&m(&[&[1, 2], &[3, 4]])),
            Err(TropError::WrongShape { .. })
        ));
        assert!(matches!(
            cramer_solve(&m(&[&[1]])),
            Err(TropError::WrongShape { .. })
        ));
    }

    #[test]
    fn cramer_matches_minor_permanents() {
        let a = m(&[&[4, 0, 7, 1], &[2, 9, 3, 3], &[5, 5, 0, 8]]);
        let x = cramer_solve(&a).unwrap();
        for j in 0..4 {
            let minor = a.drop_column(j).unwrap();
            assert_eq!(x[j], tropical_permanent(&minor).unwrap().value);
        }
    }
}
