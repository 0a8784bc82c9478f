//! Solvers for tropical (min-plus) linear systems.
//!
//! An `m x n` integer matrix `A` defines a system; a vector `x` solves it when
//! every row of `A + x` (adding `x[j]` down column `j`) attains its minimum at
//! least twice. This crate provides
//!
//! * [`lifting`]: a family of pseudopolynomial solvers that raise columns
//!   until no row has a strict minimum, returning the smallest nonnegative
//!   solution;
//! * [`exact`]: assignment-based solvers for square and wide systems, and a
//!   memoized subset-cover recursion for tall ones;
//! * [`oracle`]: brute-force references used by the tests;
//! * [`solve()`]: a single entry point dispatching to the above.
//!
//! ```
//! use troplin::{solve, SolveOptions, TropMatrix};
//!
//! let a = TropMatrix::from_rows(&[[1, 2, 3], [3, 2, 1]]).unwrap();
//! let out = solve(&a, &SolveOptions::default()).unwrap();
//! assert!(out.is_feasible());
//! ```

pub mod assignment;
pub mod cli;
pub mod error;
pub mod exact;
pub mod instance;
pub mod lifting;
pub mod matrix;
pub mod oracle;
pub mod outcome;
pub mod report;
pub mod solve;

pub use error::{Result, TropError};
pub use lifting::Strategy;
pub use matrix::{verify_solution, SolutionVector, TropMatrix};
pub use outcome::{InfeasibleReason, SolveOutcome, SolveStats, Verdict};
pub use solve::{solve, Method, SolveOptions};
