//! Integer matrices over the min-plus semiring and the solution notion used
//! throughout the crate.
//!
//! A vector `x` solves the system `A` when, after adding `x[j]` to every entry
//! of column `j`, each row attains its minimum at least twice. Adding a
//! constant to a whole row or a whole column never changes whether the system
//! is feasible; row additions do not even change the solution set.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TropError};

/// Largest admissible magnitude of a matrix entry.
///
/// With entries bounded by `2^40`, any sum of up to a few hundred thousand
/// entries stays exact in `i64`.
pub const MAX_ENTRY: i64 = 1 << 40;

/// Tropical sum: the minimum.
#[inline]
pub fn trop_add(a: i64, b: i64) -> i64 {
    a.min(b)
}

/// Tropical product: ordinary addition.
#[inline]
pub fn trop_mul(a: i64, b: i64) -> i64 {
    a + b
}

fn check_entry(value: i128) -> Result<i64> {
    if value.unsigned_abs() > MAX_ENTRY as u128 {
        return Err(TropError::EntryOutOfRange {
            value,
            cap: MAX_ENTRY,
        });
    }
    Ok(value as i64)
}

/// Dense row-major `m x n` matrix of finite integers.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct TropMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl TropMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(TropError::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(TropError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        for &v in &data {
            check_entry(v as i128)?;
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(m * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(TropError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(m, n, data)
    }

    /// Number of rows, `m(A)`.
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns, `n(A)`.
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `n(A) - m(A)`; negative for overdetermined systems.
    pub fn excess(&self) -> isize {
        self.cols as isize - self.rows as isize
    }

    /// Largest entry, `M(A)`.
    pub fn max_entry(&self) -> i64 {
        self.data
            .iter()
            .copied()
            .max()
            .expect("matrix is non-empty")
    }

    pub fn min_entry(&self) -> i64 {
        self.data
            .iter()
            .copied()
            .min()
            .expect("matrix is non-empty")
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[i64]> + '_ {
        self.data.chunks_exact(self.cols)
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.row_iter().map(<[i64]>::to_vec).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0)
    }

    /// Submatrix made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> TropMatrix {
        assert!(!rows.is_empty(), "row selection must be non-empty");
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        TropMatrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> TropMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        TropMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// The matrix with row `i` and column `j` removed. `None` for 1-wide or
    /// 1-high matrices.
    pub fn minor(&self, i: usize, j: usize) -> Option<TropMatrix> {
        if self.rows < 2 || self.cols < 2 {
            return None;
        }
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for (r, row) in self.row_iter().enumerate() {
            if r == i {
                continue;
            }
            data.extend(
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &v)| v),
            );
        }
        Some(TropMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        })
    }

    /// The matrix with column `j` removed.
    pub fn drop_column(&self, j: usize) -> Option<TropMatrix> {
        if self.cols < 2 {
            return None;
        }
        let data = self
            .row_iter()
            .flat_map(|row| {
                row.iter()
                    .enumerate()
                    .filter(move |&(c, _)| c != j)
                    .map(|(_, &v)| v)
            })
            .collect();
        Some(TropMatrix {
            rows: self.rows,
            cols: self.cols - 1,
            data,
        })
    }

    /// Appends `row` at the bottom.
    pub(crate) fn with_row_appended(&self, row: &[i64]) -> TropMatrix {
        debug_assert_eq!(row.len(), self.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(row);
        TropMatrix {
            rows: self.rows + 1,
            cols: self.cols,
            data,
        }
    }
}

impl TryFrom<Vec<Vec<i64>>> for TropMatrix {
    type Error = TropError;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

impl From<TropMatrix> for Vec<Vec<i64>> {
    fn from(m: TropMatrix) -> Self {
        m.to_rows()
    }
}

impl fmt::Debug for TropMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_iter()).finish()
    }
}

/// A candidate solution: one offset per column.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SolutionVector(Vec<i64>);

impl SolutionVector {
    pub fn new(values: Vec<i64>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    /// Tropical scaling: the same vector with `c` added to every component.
    pub fn shifted(&self, c: i64) -> Self {
        Self(self.0.iter().map(|&v| v + c).collect())
    }

    /// The same vector shifted so that its smallest component is zero.
    pub fn normalized(&self) -> Self {
        match self.0.iter().min() {
            Some(&lo) => self.shifted(-lo),
            None => self.clone(),
        }
    }
}

impl Index<usize> for SolutionVector {
    type Output = i64;

    fn index(&self, j: usize) -> &i64 {
        &self.0[j]
    }
}

impl From<Vec<i64>> for SolutionVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Debug for SolutionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for SolutionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_len(a: &TropMatrix, x: &[i64]) -> Result<()> {
    if x.len() != a.cols() {
        return Err(TropError::DimensionMismatch {
            expected: a.cols(),
            found: x.len(),
        });
    }
    Ok(())
}

/// True iff the minimum of every row of `A + x` is attained at least twice.
pub fn verify_solution(a: &TropMatrix, x: &SolutionVector) -> Result<bool> {
    check_len(a, x.as_slice())?;
    Ok(is_solution_unchecked(a, x.as_slice()))
}

pub(crate) fn is_solution_unchecked(a: &TropMatrix, x: &[i64]) -> bool {
    a.row_iter().all(|row| {
        let mut best = i128::MAX;
        let mut count = 0usize;
        for (&v, &o) in row.iter().zip(x) {
            let s = v as i128 + o as i128;
            if s < best {
                best = s;
                count = 1;
            } else if s == best {
                count += 1;
            }
        }
        count >= 2
    })
}

/// Minimum bookkeeping for one row of an offset matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowMin {
    pub min: i64,
    /// Columns attaining the minimum, ascending.
    pub argmin: Vec<usize>,
    /// Smallest entry strictly above the minimum, if the row has one.
    pub second: Option<i64>,
}

impl RowMin {
    pub fn of(row: impl IntoIterator<Item = i64>) -> Self {
        let mut min = i64::MAX;
        let mut argmin = Vec::new();
        let mut second: Option<i64> = None;
        for (j, v) in row.into_iter().enumerate() {
            if v < min {
                if !argmin.is_empty() {
                    second = Some(min);
                }
                min = v;
                argmin.clear();
                argmin.push(j);
            } else if v == min {
                argmin.push(j);
            } else if second.is_none_or(|s| v < s) {
                second = Some(v);
            }
        }
        Self {
            min,
            argmin,
            second,
        }
    }

    #[inline]
    pub fn multiplicity(&self) -> usize {
        self.argmin.len()
    }

    #[inline]
    pub fn is_strict(&self) -> bool {
        self.argmin.len() == 1
    }

    /// Distance from the minimum to the next level up.
    pub fn gap(&self) -> Option<i64> {
        self.second.map(|s| s - self.min)
    }
}

/// Per-row minimum data of `A + x`.
pub fn row_min_profile(a: &TropMatrix, x: &SolutionVector) -> Result<Vec<RowMin>> {
    check_len(a, x.as_slice())?;
    Ok(profile_unchecked(a, x.as_slice()))
}

pub(crate) fn profile_unchecked(a: &TropMatrix, x: &[i64]) -> Vec<RowMin> {
    a.row_iter()
        .map(|row| RowMin::of(row.iter().zip(x).map(|(&v, &o)| v + o)))
        .collect()
}

/// `A'[i][j] = A[i][j] + row_adds[i] + col_adds[j]`.
pub fn apply_transform(a: &TropMatrix, row_adds: &[i64], col_adds: &[i64]) -> Result<TropMatrix> {
    if row_adds.len() != a.rows() {
        return Err(TropError::DimensionMismatch {
            expected: a.rows(),
            found: row_adds.len(),
        });
    }
    check_len(a, col_adds)?;
    let mut data = Vec::with_capacity(a.rows() * a.cols());
    for (row, &r) in a.row_iter().zip(row_adds) {
        for (&v, &c) in row.iter().zip(col_adds) {
            data.push(check_entry(v as i128 + r as i128 + c as i128)?);
        }
    }
    TropMatrix::new(a.rows(), a.cols(), data)
}

/// Result of [`normalize_nonnegative`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub matrix: TropMatrix,
    pub row_adds: Vec<i64>,
    pub col_adds: Vec<i64>,
}

/// Subtracts each row's minimum from that row. The result is nonnegative with
/// a zero in every row and has exactly the same solutions as the input.
///
/// Fails only when a row spans more than [`MAX_ENTRY`].
pub fn normalize_nonnegative(a: &TropMatrix) -> Result<Normalized> {
    let row_adds: Vec<i64> = a
        .row_iter()
        .map(|row| -row.iter().copied().min().expect("non-empty row"))
        .collect();
    let col_adds = vec![0; a.cols()];
    let matrix = apply_transform(a, &row_adds, &col_adds)?;
    Ok(Normalized {
        matrix,
        row_adds,
        col_adds,
    })
}

/// Maps a solution of the column-transformed system back to the original one.
pub fn recover_solution(
    x_transformed: &SolutionVector,
    col_adds: &[i64],
) -> Result<SolutionVector> {
    if x_transformed.len() != col_adds.len() {
        return Err(TropError::DimensionMismatch {
            expected: col_adds.len(),
            found: x_transformed.len(),
        });
    }
    Ok(SolutionVector(
        x_transformed
            .as_slice()
            .iter()
            .zip(col_adds)
            .map(|(&x, &c)| x + c)
            .collect(),
    ))
}

/// Entrywise minimum of a non-empty list of equal-length vectors.
pub fn tropical_row_sum(rows: &[SolutionVector]) -> Result<SolutionVector> {
    let first = rows
        .first()
        .ok_or(TropError::EmptyInput("tropical sum of no rows"))?;
    let mut acc = first.0.clone();
    for r in &rows[1..] {
        if r.len() != acc.len() {
            return Err(TropError::DimensionMismatch {
                expected: acc.len(),
                found: r.len(),
            });
        }
        for (a, &b) in acc.iter_mut().zip(&r.0) {
            *a = trop_add(*a, b);
        }
    }
    Ok(SolutionVector(acc))
}
