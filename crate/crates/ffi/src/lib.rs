//! C ABI for `troplin`.
//!
//! Matrices and solve outcomes are opaque heap handles created and destroyed
//! through this API. Every fallible call returns a [`TroplinStatus`]; on
//! failure a human-readable message is kept per thread and can be fetched
//! with [`troplin_last_error_message`]. Panics never cross the boundary.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use troplin::assignment::{is_singular, tropical_permanent};
use troplin::instance::parse_instance;
use troplin::{
    solve, Method, SolutionVector, SolveOptions, SolveOutcome, Strategy, TropError, TropMatrix,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TroplinStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    OutOfRange = 4,
    Parse = 5,
    Internal = 6,
    Panic = 7,
}

pub const TROPLIN_METHOD_AUTO: u32 = 0;
pub const TROPLIN_METHOD_EXACT: u32 = 1;
pub const TROPLIN_METHOD_LIFTING: u32 = 2;

pub const TROPLIN_STRATEGY_ORIGINAL: u32 = 0;
pub const TROPLIN_STRATEGY_OPTIMIZED: u32 = 1;
pub const TROPLIN_STRATEGY_AGG: u32 = 2;
pub const TROPLIN_STRATEGY_COMBINED_MAX: u32 = 3;
pub const TROPLIN_STRATEGY_COMBINED_MIN: u32 = 4;

/// Opaque matrix handle.
pub struct TroplinMatrix(TropMatrix);

/// Opaque solve result handle.
pub struct TroplinOutcome(SolveOutcome);

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct TroplinSolveOptions {
    /// One of the `TROPLIN_METHOD_*` constants.
    pub method: u32,
    /// One of the `TROPLIN_STRATEGY_*` constants; used by the lifting method.
    pub strategy: u32,
    /// Guard bound for lifting; values `<= 0` select the default.
    pub guard_bound: i64,
    pub memoize: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct TroplinStats {
    pub lifts: u64,
    pub touched_columns: u64,
    pub guard_trips: u64,
    pub recursion_nodes: u64,
    pub memo_hits: u64,
    pub assignment_calls: u64,
    pub micros: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &TropError) -> TroplinStatus {
    match err {
        TropError::DimensionMismatch { .. }
        | TropError::NotSquare { .. }
        | TropError::WrongShape { .. } => TroplinStatus::DimensionMismatch,
        TropError::EntryOutOfRange { .. } | TropError::IndexOutOfRange { .. } => {
            TroplinStatus::OutOfRange
        }
        TropError::Parse { .. } => TroplinStatus::Parse,
        TropError::Internal(_) => TroplinStatus::Internal,
        _ => TroplinStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (TroplinStatus, String)>) -> TroplinStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TroplinStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside troplin");
            TroplinStatus::Panic
        }
    }
}

fn trop(err: TropError) -> (TroplinStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (TroplinStatus, String) {
    (TroplinStatus::NullPointer, format!("{what} is null"))
}

unsafe fn matrix_ref<'a>(
    m: *const TroplinMatrix,
) -> Result<&'a TropMatrix, (TroplinStatus, String)> {
    m.as_ref().map(|m| &m.0).ok_or_else(|| null("matrix"))
}

/// Default options: automatic method, combined-max lifting, default guard,
/// memoization on.
#[no_mangle]
pub extern "C" fn troplin_default_solve_options() -> TroplinSolveOptions {
    TroplinSolveOptions {
        method: TROPLIN_METHOD_AUTO,
        strategy: TROPLIN_STRATEGY_COMBINED_MAX,
        guard_bound: 0,
        memoize: true,
    }
}

/// Builds a `rows x cols` matrix from row-major `data`.
#[no_mangle]
pub unsafe extern "C" fn troplin_matrix_new(
    rows: usize,
    cols: usize,
    data: *const i64,
    out: *mut *mut TroplinMatrix,
) -> TroplinStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if data.is_null() {
            return Err(null("data"));
        }
        let len = rows.checked_mul(cols).ok_or_else(|| {
            (
                TroplinStatus::InvalidArgument,
                "dimensions overflow".to_string(),
            )
        })?;
        let values = std::slice::from_raw_parts(data, len).to_vec();
        let m = TropMatrix::new(rows, cols, values).map_err(trop)?;
        *out = Box::into_raw(Box::new(TroplinMatrix(m)));
        Ok(())
    })
}

/// Parses the text instance format (`m n` header, then `m` rows).
#[no_mangle]
pub unsafe extern "C" fn troplin_matrix_parse(
    text: *const c_char,
    out: *mut *mut TroplinMatrix,
) -> TroplinStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (TroplinStatus::Parse, e.to_string()))?;
        let m = parse_instance(s).map_err(trop)?;
        *out = Box::into_raw(Box::new(TroplinMatrix(m)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn troplin_matrix_free(m: *mut TroplinMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of rows, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn troplin_matrix_rows(m: *const TroplinMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// Number of columns, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn troplin_matrix_cols(m: *const TroplinMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// Checks whether `x` (length `len`) solves the system.
#[no_mangle]
pub unsafe extern "C" fn troplin_verify_solution(
    m: *const TroplinMatrix,
    x: *const i64,
    len: usize,
    out: *mut bool,
) -> TroplinStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        if x.is_null() && len > 0 {
            return Err(null("x"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let values = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(x, len).to_vec()
        };
        *out = troplin::verify_solution(a, &SolutionVector::new(values)).map_err(trop)?;
        Ok(())
    })
}

fn strategy_of(code: u32) -> Option<Strategy> {
    Some(match code {
        TROPLIN_STRATEGY_ORIGINAL => Strategy::GrigorievOriginal,
        TROPLIN_STRATEGY_OPTIMIZED => Strategy::GrigorievOptimized,
        TROPLIN_STRATEGY_AGG => Strategy::Agg,
        TROPLIN_STRATEGY_COMBINED_MAX => Strategy::CombinedMax,
        TROPLIN_STRATEGY_COMBINED_MIN => Strategy::CombinedMin,
        _ => return None,
    })
}

fn options_of(o: &TroplinSolveOptions) -> Result<SolveOptions, (TroplinStatus, String)> {
    let bad = |what: &str, v: u32| {
        (
            TroplinStatus::InvalidArgument,
            format!("unknown {what} {v}"),
        )
    };
    let method = match o.method {
        TROPLIN_METHOD_AUTO => Method::Auto,
        TROPLIN_METHOD_EXACT => Method::Exact,
        TROPLIN_METHOD_LIFTING => {
            Method::Lifting(strategy_of(o.strategy).ok_or_else(|| bad("strategy", o.strategy))?)
        }
        other => return Err(bad("method", other)),
    };
    Ok(SolveOptions {
        method,
        guard_bound: (o.guard_bound > 0).then_some(o.guard_bound),
        memoize: o.memoize,
    })
}

/// Solves the system. `opts` may be null for defaults. The outcome handle
/// must be released with [`troplin_outcome_free`].
#[no_mangle]
pub unsafe extern "C" fn troplin_solve(
    m: *const TroplinMatrix,
    opts: *const TroplinSolveOptions,
    out: *mut *mut TroplinOutcome,
) -> TroplinStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = match opts.as_ref() {
            Some(o) => options_of(o)?,
            None => SolveOptions::default(),
        };
        let outcome = solve(a, &opts).map_err(trop)?;
        *out = Box::into_raw(Box::new(TroplinOutcome(outcome)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn troplin_outcome_free(o: *mut TroplinOutcome) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// False for infeasible outcomes and null handles.
#[no_mangle]
pub unsafe extern "C" fn troplin_outcome_is_feasible(o: *const TroplinOutcome) -> bool {
    o.as_ref().is_some_and(|o| o.0.is_feasible())
}

/// Length of the solution vector; 0 when infeasible.
#[no_mangle]
pub unsafe extern "C" fn troplin_outcome_solution_len(o: *const TroplinOutcome) -> usize {
    o.as_ref()
        .and_then(|o| o.0.solution())
        .map_or(0, SolutionVector::len)
}

/// Copies the solution into `buf`, which must hold at least
/// [`troplin_outcome_solution_len`] values.
#[no_mangle]
pub unsafe extern "C" fn troplin_outcome_copy_solution(
    o: *const TroplinOutcome,
    buf: *mut i64,
    len: usize,
) -> TroplinStatus {
    guard(|| {
        let o = o.as_ref().ok_or_else(|| null("outcome"))?;
        let x = o.0.solution().ok_or_else(|| {
            (
                TroplinStatus::InvalidArgument,
                "outcome is infeasible".to_string(),
            )
        })?;
        if len < x.len() {
            return Err((
                TroplinStatus::DimensionMismatch,
                format!("buffer holds {len} values, solution has {}", x.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(x.as_slice().as_ptr(), buf, x.len());
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn troplin_outcome_stats(
    o: *const TroplinOutcome,
    out: *mut TroplinStats,
) -> TroplinStatus {
    guard(|| {
        let o = o.as_ref().ok_or_else(|| null("outcome"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = &o.0.stats;
        *out = TroplinStats {
            lifts: s.lifts,
            touched_columns: s.touched_columns as u64,
            guard_trips: s.guard_trips,
            recursion_nodes: s.recursion_nodes,
            memo_hits: s.memo_hits,
            assignment_calls: s.assignment_calls,
            micros: s.micros,
        };
        Ok(())
    })
}

/// Minimum-weight perfect matching value of a square matrix.
#[no_mangle]
pub unsafe extern "C" fn troplin_tropical_permanent(
    m: *const TroplinMatrix,
    out: *mut i64,
) -> TroplinStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = tropical_permanent(a).map_err(trop)?.value;
        Ok(())
    })
}

/// Whether the optimal matching of a square matrix is attained twice.
#[no_mangle]
pub unsafe extern "C" fn troplin_is_singular(
    m: *const TroplinMatrix,
    out: *mut bool,
) -> TroplinStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = is_singular(a).map_err(trop)?;
        Ok(())
    })
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes). Returns the full message length in bytes.
#[no_mangle]
pub unsafe extern "C" fn troplin_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            ptr::copy_nonoverlapping(e.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn troplin_status_string(status: TroplinStatus) -> *const c_char {
    let s: &'static CStr = match status {
        TroplinStatus::Ok => c"ok",
        TroplinStatus::NullPointer => c"null pointer",
        TroplinStatus::InvalidArgument => c"invalid argument",
        TroplinStatus::DimensionMismatch => c"dimension mismatch",
        TroplinStatus::OutOfRange => c"value out of range",
        TroplinStatus::Parse => c"parse error",
        TroplinStatus::Internal => c"internal error",
        TroplinStatus::Panic => c"panic",
    };
    s.as_ptr()
}
