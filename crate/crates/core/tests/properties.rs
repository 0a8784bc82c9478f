//! Property tests: every solver against the brute-force oracle, plus the
//! algebraic invariants of the solution set.

use proptest::prelude::*;
use troplin::assignment::{
    cramer_solve, forced_value, forced_values_row, is_singular, tropical_permanent,
};
use troplin::exact::{
    combine_subset_solutions, default_row_cover, solve_exact, solve_overdetermined,
    solve_overdetermined_with_cover, MemoStore, RowCover,
};
use troplin::instance::{emit_instance, parse_instance};
use troplin::lifting::{solve_general_scheme_observed, SchemeOptions, Strategy as Lift};
use troplin::matrix::{
    apply_transform, normalize_nonnegative, recover_solution, tropical_row_sum, verify_solution,
    SolutionVector, TropMatrix,
};
use troplin::oracle::{default_max_coordinate, oracle_permanent, oracle_solve, OracleConfig};
use troplin::{solve, Method, SolveOptions, Verdict};

type Dim = std::ops::RangeInclusive<usize>;

fn matrix(rows: Dim, cols: Dim, lo: i64, hi: i64) -> impl Strategy<Value = TropMatrix> {
    (rows, cols).prop_flat_map(move |(m, n)| {
        prop::collection::vec(lo..=hi, m * n)
            .prop_map(move |data| TropMatrix::new(m, n, data).unwrap())
    })
}

fn square(max_n: usize, lo: i64, hi: i64) -> impl Strategy<Value = TropMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(lo..=hi, n * n).prop_map(move |d| TropMatrix::new(n, n, d).unwrap())
    })
}

/// All solutions in the oracle's search box, by direct enumeration.
fn grid_solutions(a: &TropMatrix) -> Vec<SolutionVector> {
    let bound = default_max_coordinate(a);
    let n = a.cols();
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    loop {
        let v = SolutionVector::new(x.clone());
        if verify_solution(a, &v).unwrap() {
            out.push(v);
        }
        let mut k = 0;
        while k < n && x[k] == bound {
            x[k] = 0;
            k += 1;
        }
        if k == n {
            return out;
        }
        x[k] += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solution_set_is_closed_under_min_and_shift(a in matrix(1..=3, 2..=3, 0, 3), c in -5i64..5) {
        let sols = grid_solutions(&a);
        for x in sols.iter().take(6) {
            prop_assert!(verify_solution(&a, &x.shifted(c)).unwrap());
            for y in sols.iter().take(6) {
                let z = tropical_row_sum(&[x.clone(), y.clone()]).unwrap();
                prop_assert!(verify_solution(&a, &z).unwrap());
            }
        }
    }

    #[test]
    fn transform_equivariance(
        (a, r, c, x) in matrix(1..=4, 1..=4, -20, 20).prop_flat_map(|a| {
            let (m, n) = (a.rows(), a.cols());
            (Just(a),
             prop::collection::vec(-10i64..10, m),
             prop::collection::vec(-10i64..10, n),
             prop::collection::vec(-10i64..10, n))
        })
    ) {
        let t = apply_transform(&a, &r, &c).unwrap();
        let x = SolutionVector::new(x);
        prop_assert_eq!(
            verify_solution(&t, &x).unwrap(),
            verify_solution(&a, &recover_solution(&x, &c).unwrap()).unwrap()
        );
    }

    #[test]
    fn normalization_is_idempotent(a in matrix(1..=5, 1..=5, -50, 50)) {
        let once = normalize_nonnegative(&a).unwrap().matrix;
        prop_assert!(once.is_nonnegative());
        prop_assert!(once.row_iter().all(|r| r.contains(&0)));
        prop_assert_eq!(normalize_nonnegative(&once).unwrap().matrix, once);
    }

    #[test]
    fn recover_after_column_transform_round_trips(
        (a, c) in matrix(1..=4, 2..=4, 0, 4).prop_flat_map(|a| {
            let n = a.cols();
            (Just(a), prop::collection::vec(-6i64..6, n))
        })
    ) {
        let zeros = vec![0; a.rows()];
        let t = apply_transform(&a, &zeros, &c).unwrap();
        let out = solve(&t, &SolveOptions::with_method(Method::Exact)).unwrap();
        prop_assert_eq!(out.is_feasible(), solve(&a, &SolveOptions::default()).unwrap().is_feasible());
        if let Some(x) = out.solution() {
            prop_assert!(verify_solution(&a, &recover_solution(x, &c).unwrap()).unwrap());
        }
    }

    #[test]
    fn permanent_matches_enumeration(a in square(7, -9, 9)) {
        let (value, count) = oracle_permanent(&a).unwrap();
        let r = tropical_permanent(&a).unwrap();
        prop_assert_eq!(r.value, value);
        let mut cols = r.matching.clone();
        cols.sort_unstable();
        prop_assert_eq!(cols, (0..a.cols()).collect::<Vec<_>>());
        let witnessed: i64 = r.matching.iter().enumerate().map(|(i, &j)| a.get(i, j)).sum();
        prop_assert_eq!(witnessed, value);
        prop_assert_eq!(is_singular(&a).unwrap(), count >= 2);
    }

    #[test]
    fn singularity_on_low_range_entries(a in square(7, 0, 2)) {
        // Narrow ranges produce many ties; the interesting regime for uniqueness.
        let (_, count) = oracle_permanent(&a).unwrap();
        prop_assert_eq!(is_singular(&a).unwrap(), count >= 2);
    }

    #[test]
    fn forced_values_two_routes_agree(a in square(6, -5, 5)) {
        let perm = tropical_permanent(&a).unwrap().value;
        for i in 0..a.rows() {
            let row = forced_values_row(&a, i).unwrap();
            for (j, &f) in row.iter().enumerate() {
                prop_assert_eq!(f, forced_value(&a, i, j).unwrap());
                prop_assert!(f >= perm);
            }
        }
    }

    #[test]
    fn column_shift_shifts_permanent(a in square(6, 0, 9), j in 0usize..6, c in -5i64..5) {
        let j = j % a.cols();
        let mut adds = vec![0; a.cols()];
        adds[j] = c;
        let b = apply_transform(&a, &vec![0; a.rows()], &adds).unwrap();
        prop_assert_eq!(tropical_permanent(&b).unwrap().value, tropical_permanent(&a).unwrap().value + c);
        prop_assert_eq!(is_singular(&b).unwrap(), is_singular(&a).unwrap());
    }

    #[test]
    fn cramer_always_solves(
        a in (2usize..=7).prop_flat_map(|n| {
            prop::collection::vec(-20i64..=20, (n - 1) * n)
                .prop_map(move |d| TropMatrix::new(n - 1, n, d).unwrap())
        })
    ) {
        let x = cramer_solve(&a).unwrap();
        prop_assert!(verify_solution(&a, &x).unwrap());
        for j in 0..a.cols() {
            prop_assert_eq!(x[j], tropical_permanent(&a.drop_column(j).unwrap()).unwrap().value);
        }
    }

    #[test]
    fn lifting_finds_oracle_minimum_and_stays_below_it(a in matrix(1..=5, 1..=4, 0, 4)) {
        let a = normalize_nonnegative(&a).unwrap().matrix;
        let truth = oracle_solve(&a, &OracleConfig::default()).unwrap();
        for s in Lift::ALL {
            let mut safe = true;
            let out = solve_general_scheme_observed(&a, s, &SchemeOptions::default(), |st| {
                if let Verdict::Feasible(min) = &truth {
                    safe &= st.additions().iter().zip(min.as_slice()).all(|(x, y)| x <= y);
                }
            }).unwrap();
            prop_assert!(safe, "{} overshot the minimal solution on {:?}", s, a);
            prop_assert_eq!(&out.verdict, &truth, "{} on {:?}", s, a);
            if out.is_feasible() {
                prop_assert!(out.stats.touched_columns < a.cols());
            }
        }
    }

    #[test]
    fn exact_matches_oracle(a in matrix(1..=6, 1..=4, 0, 4)) {
        let truth = oracle_solve(&a, &OracleConfig::default()).unwrap();
        let out = solve_exact(&normalize_nonnegative(&a).unwrap().matrix, &mut MemoStore::new()).unwrap();
        prop_assert_eq!(out.is_feasible(), truth.is_feasible(), "{:?}", a);
        if let Some(x) = out.solution() {
            prop_assert!(verify_solution(&a, x).unwrap());
        }
        prop_assert!(out.stats.diagnostics.is_empty(), "{:?}", out.stats.diagnostics);
    }

    #[test]
    fn feasibility_is_monotone_under_row_deletion(a in matrix(2..=6, 2..=4, 0, 4), drop in 0usize..6) {
        let full = solve(&a, &SolveOptions::default()).unwrap();
        if full.is_feasible() {
            let keep: Vec<usize> = (0..a.rows()).filter(|&i| i != drop % a.rows()).collect();
            let sub = a.select_rows(&keep);
            prop_assert!(solve(&sub, &SolveOptions::default()).unwrap().is_feasible());
            prop_assert!(verify_solution(&sub, full.solution().unwrap()).unwrap());
        }
    }

    #[test]
    fn instance_text_round_trips(a in matrix(1..=6, 1..=6, -1_000_000, 1_000_000)) {
        prop_assert_eq!(parse_instance(&emit_instance(&a)).unwrap(), a);
    }

    #[test]
    fn oracle_box_is_large_enough(a in matrix(1..=4, 2..=4, 0, 3)) {
        // Widening the box by one never changes the answer and the minimum
        // never lands on the widened edge.
        let bound = default_max_coordinate(&a);
        let narrow = oracle_solve(&a, &OracleConfig::default()).unwrap();
        let wide = oracle_solve(&a, &OracleConfig { max_coordinate: Some(bound + 1), ..Default::default() }).unwrap();
        prop_assert_eq!(&narrow, &wide);
        if let Verdict::Feasible(x) = &wide {
            prop_assert!(x.as_slice().iter().all(|&v| v <= bound));
        }
    }

    #[test]
    fn every_combining_term_is_redundant(a in matrix(3..=5, 2..=3, 0, 3)) {
        prop_assume!(a.rows() > a.cols());
        let cover = default_row_cover(a.rows(), a.cols()).unwrap();
        let mut sols = Vec::new();
        for rows in cover.subsets() {
            match oracle_solve(&a.select_rows(rows), &OracleConfig::default()).unwrap() {
                Verdict::Feasible(s) => sols.push(s.normalized()),
                Verdict::Infeasible => return Ok(()),
            }
        }
        let x = combine_subset_solutions(&sols, &a).unwrap();
        prop_assert!(verify_solution(&a, &x).unwrap());

        let n = a.cols();
        let data = (0..n).flat_map(|j| sols.iter().map(move |s| s[j])).collect();
        let alpha = cramer_solve(&TropMatrix::new(n, n + 1, data).unwrap()).unwrap();
        let terms: Vec<SolutionVector> =
            sols.iter().zip(alpha.as_slice()).map(|(s, &k)| s.shifted(k)).collect();
        let full = tropical_row_sum(&terms).unwrap();
        prop_assert_eq!(full.normalized(), x);
        for i in 0..terms.len() {
            let mut rest = terms.clone();
            rest.remove(i);
            prop_assert_eq!(&tropical_row_sum(&rest).unwrap(), &full);
        }
    }

    #[test]
    fn any_valid_cover_gives_the_same_verdict(a in matrix(4..=5, 2..=3, 0, 3), rot in 0usize..5) {
        prop_assume!(a.rows() > a.cols());
        // Rotate the default cover's row labels to get a different valid cover.
        let m = a.rows();
        let subsets: Vec<Vec<usize>> = default_row_cover(m, a.cols())
            .unwrap()
            .subsets()
            .iter()
            .map(|s| s.iter().map(|&r| (r + rot) % m).collect())
            .collect();
        let cover = RowCover::new(subsets, m, a.cols()).unwrap();
        let norm = normalize_nonnegative(&a).unwrap().matrix;
        let out = solve_overdetermined_with_cover(&norm, &cover, &mut MemoStore::new()).unwrap();
        let truth = oracle_solve(&a, &OracleConfig::default()).unwrap();
        prop_assert_eq!(out.is_feasible(), truth.is_feasible());
        if let Some(x) = out.solution() {
            prop_assert!(verify_solution(&a, x).unwrap());
        }
    }
}

#[test]
fn node_count_without_memo_follows_recurrence() {
    // All-zero matrices are feasible for n >= 2, so nothing short-circuits.
    for n in 2..=5usize {
        for k in 1..=3usize {
            let a = TropMatrix::new(n + k, n, vec![0; (n + k) * n]).unwrap();
            let out = solve_overdetermined(&a, &mut MemoStore::disabled()).unwrap();
            let mut expected = 1u64; // k = 0: one square leaf
            for _ in 0..k {
                // one square child, n children one row shorter, plus the node itself
                expected = 1 + 1 + n as u64 * expected;
            }
            assert_eq!(out.stats.recursion_nodes, expected, "n={n} k={k}");
            assert!(expected <= 2 * (n as u64 + 1).pow(k as u32));
        }
    }
}
