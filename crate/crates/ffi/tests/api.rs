use std::ffi::{c_char, CStr};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use troplin_ffi::*;

fn matrix(rows: usize, cols: usize, data: &[i64]) -> *mut TroplinMatrix {
    let mut m = ptr::null_mut();
    let s = unsafe { troplin_matrix_new(rows, cols, data.as_ptr(), &mut m) };
    assert_eq!(s, TroplinStatus::Ok);
    m
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        troplin_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn solve_with(m: *const TroplinMatrix, opts: Option<TroplinSolveOptions>) -> *mut TroplinOutcome {
    let mut o = ptr::null_mut();
    let p = opts.as_ref().map_or(ptr::null(), |o| o as *const _);
    assert_eq!(unsafe { troplin_solve(m, p, &mut o) }, TroplinStatus::Ok);
    o
}

#[test]
fn solves_both_examples_through_every_method() {
    let ex1 = matrix(2, 3, &[1, 2, 3, 3, 2, 1]);
    let ex2 = matrix(2, 2, &[1, 2, 3, 2]);
    let mut configs = vec![None];
    for method in [TROPLIN_METHOD_AUTO, TROPLIN_METHOD_EXACT] {
        configs.push(Some(TroplinSolveOptions {
            method,
            ..troplin_default_solve_options()
        }));
    }
    for strategy in 0..=TROPLIN_STRATEGY_COMBINED_MIN {
        configs.push(Some(TroplinSolveOptions {
            method: TROPLIN_METHOD_LIFTING,
            strategy,
            ..troplin_default_solve_options()
        }));
    }
    unsafe {
        for cfg in configs {
            let o = solve_with(ex1, cfg);
            assert!(troplin_outcome_is_feasible(o));
            assert_eq!(troplin_outcome_solution_len(o), 3);
            let mut x = [0i64; 3];
            assert_eq!(
                troplin_outcome_copy_solution(o, x.as_mut_ptr(), 3),
                TroplinStatus::Ok
            );
            assert_eq!(x, [1, 0, 1]);
            let mut ok = false;
            assert_eq!(
                troplin_verify_solution(ex1, x.as_ptr(), 3, &mut ok),
                TroplinStatus::Ok
            );
            assert!(ok);
            troplin_outcome_free(o);

            let o = solve_with(ex2, cfg);
            assert!(!troplin_outcome_is_feasible(o));
            assert_eq!(troplin_outcome_solution_len(o), 0);
            let mut x = [0i64; 2];
            assert_eq!(
                troplin_outcome_copy_solution(o, x.as_mut_ptr(), 2),
                TroplinStatus::InvalidArgument
            );
            troplin_outcome_free(o);
        }
        troplin_matrix_free(ex1);
        troplin_matrix_free(ex2);
    }
}

#[test]
fn stats_and_square_helpers() {
    let a = matrix(4, 3, &[1, 2, 3, 1, 2, 1, 1, 2, 5, 2, 3, 1]);
    let o = solve_with(
        a,
        Some(TroplinSolveOptions {
            method: TROPLIN_METHOD_EXACT,
            ..troplin_default_solve_options()
        }),
    );
    let mut stats = TroplinStats::default();
    unsafe {
        assert_eq!(troplin_outcome_stats(o, &mut stats), TroplinStatus::Ok);
        assert!(stats.recursion_nodes >= 1);
        troplin_outcome_free(o);
        troplin_matrix_free(a);
    }

    let sq = matrix(2, 2, &[1, 2, 2, 3]);
    let (mut perm, mut sing) = (0i64, false);
    unsafe {
        assert_eq!(troplin_tropical_permanent(sq, &mut perm), TroplinStatus::Ok);
        assert_eq!(troplin_is_singular(sq, &mut sing), TroplinStatus::Ok);
        troplin_matrix_free(sq);
    }
    assert_eq!((perm, sing), (4, true));
}

#[test]
fn errors_are_reported_by_code_and_message() {
    unsafe {
        let mut m = ptr::null_mut();
        let s = troplin_matrix_parse(c"2 2\n1 2\n".as_ptr(), &mut m);
        assert_eq!(s, TroplinStatus::Parse);
        assert!(m.is_null());
        assert!(!last_error().is_empty());

        let big = [1i64 << 50];
        assert_eq!(
            troplin_matrix_new(1, 1, big.as_ptr(), &mut m),
            TroplinStatus::OutOfRange
        );

        let data = [0i64; 4];
        assert_eq!(
            troplin_matrix_new(2, 2, data.as_ptr(), ptr::null_mut()),
            TroplinStatus::NullPointer
        );
        assert_eq!(
            troplin_matrix_new(0, 2, data.as_ptr(), &mut m),
            TroplinStatus::InvalidArgument
        );

        let a = matrix(2, 2, &data);
        let bad = TroplinSolveOptions {
            method: 99,
            ..troplin_default_solve_options()
        };
        let mut o = ptr::null_mut();
        assert_eq!(
            troplin_solve(a, &bad, &mut o),
            TroplinStatus::InvalidArgument
        );
        assert!(last_error().contains("99"));

        let x = [0i64; 3];
        let mut ok = false;
        assert_eq!(
            troplin_verify_solution(a, x.as_ptr(), 3, &mut ok),
            TroplinStatus::DimensionMismatch
        );

        let rect = matrix(1, 2, &[0, 0]);
        let mut perm = 0;
        assert_ne!(
            troplin_tropical_permanent(rect, &mut perm),
            TroplinStatus::Ok
        );
        troplin_matrix_free(rect);
        troplin_matrix_free(a);

        assert_eq!(troplin_matrix_rows(ptr::null()), 0);
        troplin_matrix_free(ptr::null_mut());
        troplin_outcome_free(ptr::null_mut());
        let s = CStr::from_ptr(troplin_status_string(TroplinStatus::Parse));
        assert_eq!(s.to_str().unwrap(), "parse error");
    }
}

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/api-<hash>
    std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

#[test]
fn c_program_links_against_the_header() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libtroplin_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let out = tempfile_path("troplin_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let text = String::from_utf8(run.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("1 0 1"));
    assert!(lines.next().unwrap().starts_with("parse error: "));
}

fn tempfile_path(stem: &str) -> PathBuf {
    std::env::temp_dir().join(format!("{stem}-{}", std::process::id()))
}
