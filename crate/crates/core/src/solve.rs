//! One entry point for every solver path.

use std::fmt;
use std::time::Instant;

use crate::error::{Result, TropError};
use crate::exact::{solve_exact, MemoStore};
use crate::lifting::{solve_general_scheme, SchemeOptions, Strategy};
use crate::matrix::{is_solution_unchecked, normalize_nonnegative, recover_solution, TropMatrix};
use crate::outcome::{SolveOutcome, Verdict};

/// `Auto` uses the exact solver unless the memo table could grow past this
/// many entries, in which case it falls back to combined lifting.
pub const AUTO_EXACT_LIMIT: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    Lifting(Strategy),
    Exact,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Auto => f.write_str("auto"),
            Method::Lifting(s) => write!(f, "lifting:{s}"),
            Method::Exact => f.write_str("exact"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub method: Method,
    pub guard_bound: Option<i64>,
    pub memoize: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            method: Method::Auto,
            guard_bound: None,
            memoize: true,
        }
    }
}

impl SolveOptions {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

/// The concrete method `Auto` resolves to for this matrix.
pub fn resolve_method(a: &TropMatrix, method: Method) -> Method {
    match method {
        Method::Auto => {
            let (m, n) = (a.rows(), a.cols());
            if m <= n || binomial(m, n).saturating_mul(m as u128) <= AUTO_EXACT_LIMIT {
                Method::Exact
            } else {
                Method::Lifting(Strategy::CombinedMax)
            }
        }
        other => other,
    }
}

/// Normalizes, dispatches, maps the solution back to the input's coordinates
/// and checks it against the input before returning.
pub fn solve(a: &TropMatrix, opts: &SolveOptions) -> Result<SolveOutcome> {
    let start = Instant::now();
    let norm = normalize_nonnegative(a)?;
    let mut out = match resolve_method(a, opts.method) {
        Method::Lifting(strategy) => solve_general_scheme(
            &norm.matrix,
            strategy,
            &SchemeOptions {
                guard_bound: opts.guard_bound,
            },
        )?,
        _ => {
            let mut memo = if opts.memoize {
                MemoStore::new()
            } else {
                MemoStore::disabled()
            };
            solve_exact(&norm.matrix, &mut memo)?
        }
    };
    if let Verdict::Feasible(x) = &out.verdict {
        let x = recover_solution(x, &norm.col_adds)?;
        if !is_solution_unchecked(a, x.as_slice()) {
            return Err(TropError::Internal(format!(
                "{} returned {x:?}, which does not solve {a:?}",
                opts.method
            )));
        }
        out.verdict = Verdict::Feasible(x);
    }
    out.stats.micros = start.elapsed().as_micros() as u64;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(42, 40), 861);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn auto_resolution() {
        let tall = TropMatrix::new(200, 3, vec![0; 600]).unwrap();
        assert_eq!(
            resolve_method(&tall, Method::Auto),
            Method::Lifting(Strategy::CombinedMax)
        );
        let small = TropMatrix::new(5, 3, vec![0; 15]).unwrap();
        assert_eq!(resolve_method(&small, Method::Auto), Method::Exact);
        assert_eq!(resolve_method(&small, Method::Exact), Method::Exact);
    }

    #[test]
    fn solution_is_in_input_coordinates() {
        let a = TropMatrix::from_rows(&[[-5, -4, -3], [10, 9, 8]]).unwrap();
        for method in [Method::Exact, Method::Lifting(Strategy::Agg)] {
            let out = solve(&a, &SolveOptions::with_method(method)).unwrap();
            assert!(is_solution_unchecked(
                &a,
                out.solution().unwrap().as_slice()
            ));
        }
    }
}
