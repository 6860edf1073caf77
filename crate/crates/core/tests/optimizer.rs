mod common;

use common::*;
use proptest::prelude::*;

use expurgated_jscc::kernel::{bhattacharyya_matrix, e0_gallager, e_s, e_x};
use expurgated_jscc::optimizer::{
    baseline_random_coding, exponent_report, max_over_q, single_class_exponent,
    single_class_fixed_q, two_class_exponent_fixed_pair, two_class_exponent_optimal,
};
use expurgated_jscc::partition::gamma_zero;
use expurgated_jscc::simplex::SolverConfig;
use expurgated_jscc::types::{ChannelSpec, ProblemSpec, RhoGrid, SourceSpec};

#[test]
fn ternary_argmax_at_one_matches_exhaustive_grid() {
    let db = bhattacharyya_matrix(&ternary());
    let steps = 1000;
    let mut best = (f64::NEG_INFINITY, [0.0; 3]);
    for i in 0..=steps {
        for j in 0..=steps - i {
            let v = [i as f64 / steps as f64, j as f64 / steps as f64, (steps - i - j) as f64 / steps as f64];
            let val = e_x(&q(&v), 1.0, &db).unwrap();
            if val > best.0 {
                best = (val, v);
            }
        }
    }
    let found = max_over_q(1.0, &db, &SolverConfig::default()).unwrap();
    assert!(found.value >= best.0 - 1e-12);
    for (a, b) in found.q.pmf().iter().zip(best.1) {
        assert!((a - b).abs() <= 2e-3, "{:?} vs {:?}", found.q.pmf(), best.1);
    }
}

#[test]
fn single_class_optimum_matches_printed_distribution() {
    // The published optimal Q1 is the maximizer at the optimal ρ, not at ρ = 1.
    let problem = ternary_problem(0.75, 0.025);
    let r = single_class_exponent(&problem, &RhoGrid::default(), &SolverConfig::default()).unwrap();
    for (a, b) in r.q.pmf().iter().zip([0.4489, 0.4489, 0.1021]) {
        assert!((a - b).abs() <= 2e-3, "{:?}", r.q.pmf());
    }
    let db = bhattacharyya_matrix(problem.channel());
    let at_one = max_over_q(1.0, &db, &SolverConfig::default()).unwrap();
    assert!((at_one.q.pmf()[2] - 0.1021).abs() > 0.05);
}

#[test]
fn identical_rows_give_zero_everywhere() {
    let w = ChannelSpec::new(vec![vec![0.3, 0.7], vec![0.3, 0.7]]).unwrap();
    let db = bhattacharyya_matrix(&w);
    let found = max_over_q(2.0, &db, &SolverConfig::default()).unwrap();
    assert_eq!(found.value, 0.0);
    assert!((found.q.pmf().iter().sum::<f64>() - 1.0).abs() < 1e-12);

    let problem = ProblemSpec::new(w, SourceSpec::new(vec![0.4, 0.6]).unwrap(), 1.0).unwrap();
    let grid = RhoGrid::default().with_points(100).unwrap();
    let r = two_class_exponent_optimal(&problem, &grid, &SolverConfig::default()).unwrap();
    assert_eq!(r.single_class_value, 0.0);
    assert_eq!(r.two_class_value, 0.0);
}

#[test]
fn fixed_q_value_matches_dense_scan() {
    let problem = ternary_problem(0.75, 0.025);
    let q1 = q(&[0.4, 0.4, 0.2]);
    let db = bhattacharyya_matrix(problem.channel());
    let dense = (0..=200_000)
        .map(|i| 1.0 + 99.0 * i as f64 / 200_000.0)
        .map(|r| e_x(&q1, r, &db).unwrap() - 0.75 * e_s(r, problem.source()))
        .fold(f64::NEG_INFINITY, f64::max);
    let got = single_class_fixed_q(&q1, &problem, &RhoGrid::default()).unwrap();
    assert!((got.value - dense).abs() < 1e-8, "{} vs {dense}", got.value);
}

#[test]
fn optimized_pair_beats_configured_pair_and_single_class() {
    let problem = ternary_problem(0.75, 0.025);
    let grid = RhoGrid::default().with_points(500).unwrap();
    let config = SolverConfig::default();
    let fixed = two_class_exponent_fixed_pair(&pair(&[0.4, 0.4, 0.2], &[0.5, 0.5, 0.0]), &problem, &grid).unwrap();
    let r = two_class_exponent_optimal(&problem, &grid, &config).unwrap();
    let single = single_class_exponent(&problem, &grid, &config).unwrap();
    assert!(r.two_class_value >= fixed.value);
    assert!(r.two_class_value >= single.value - 1e-9);
    assert!(r.pair_search_value.unwrap() <= r.two_class_value + 1e-12);
    let again = two_class_exponent_optimal(&problem, &grid, &config).unwrap();
    assert_eq!(r.to_toml(), again.to_toml());
}

#[test]
fn mixing_threshold_equalizes_both_sides() {
    let problem = ternary_problem(0.75, 0.025);
    let grid = RhoGrid::default().with_points(2000).unwrap();
    let set = pair(&[0.4, 0.4, 0.2], &[0.5, 0.5, 0.0]);
    let ex = two_class_exponent_fixed_pair(&set, &problem, &grid).unwrap();
    let s = &ex.split;
    assert!(s.mixing);
    assert!(s.gamma > 0.0 && s.gamma < 1.0);
    assert!(s.rho1 < ex.rho && ex.rho < s.rho2);

    let db = bhattacharyya_matrix(problem.channel());
    let ex1 = e_x(&set.members()[s.class1_member], s.rho1, &db).unwrap();
    let ex2 = e_x(&set.members()[s.class2_member], s.rho2, &db).unwrap();
    let g = gamma_zero(ex1, s.rho1, ex2, s.rho2, ex.rho, &problem).unwrap();
    let lhs = 0.75 * (e_s(ex.rho, problem.source()) - g.gamma_prime.ln()) / (1.0 + ex.rho);
    let rhs = (ex2 - ex1) / (s.rho2 - s.rho1);
    assert!((lhs - rhs).abs() < 1e-12);
}

#[test]
fn baseline_edge_cases() {
    let useless = ChannelSpec::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
    let det = ProblemSpec::new(useless, SourceSpec::new(vec![1.0, 0.0]).unwrap(), 1.0).unwrap();
    let b = baseline_random_coding(&det, &RhoGrid::unit_interval(101).unwrap(), &SolverConfig::default()).unwrap();
    assert_eq!(b.value, 0.0);

    // Binary symmetric channel: uniform input, so the maximum is an explicit scan.
    let bsc = ChannelSpec::binary_symmetric(0.05).unwrap();
    let problem = ProblemSpec::new(bsc.clone(), SourceSpec::binary(0.1).unwrap(), 0.5).unwrap();
    let b = baseline_random_coding(&problem, &RhoGrid::unit_interval(101).unwrap(), &SolverConfig::default()).unwrap();
    let uniform = q(&[0.5, 0.5]);
    let scan = (0..=100)
        .map(|i| i as f64 / 100.0)
        .map(|r| e0_gallager(&uniform, r, &bsc).unwrap() - 0.5 * e_s(r, problem.source()))
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(b.value >= scan - 1e-9);
    assert!(b.value <= scan + 1e-4);
}

#[test]
fn fixed_pair_reports_are_canonical() {
    let problem = ternary_problem(0.75, 0.025);
    let grid = RhoGrid::default().with_points(300).unwrap();
    let ab = pair(&[0.5, 0.5, 0.0], &[0.4, 0.4, 0.2]);
    let r = exponent_report(&problem, Some(&ab), &grid, &SolverConfig::default(), false).unwrap();
    assert_eq!(r.two_class_pair[0], vec![0.4, 0.4, 0.2]);
    assert!(r.baseline_random_coding.is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn collapsed_pair_equals_fixed_q(
        (w, qa) in (2usize..4, 2usize..4).prop_flat_map(|(n, m)| (dense_channel(n, m), dense_pmf(n))),
        p in dense_pmf(2),
        t in 0.1f64..2.0,
    ) {
        let problem = ProblemSpec::new(w, SourceSpec::new(p).unwrap(), t).unwrap();
        let grid = RhoGrid::default().with_points(200).unwrap();
        let a = q(&qa);
        let two = two_class_exponent_fixed_pair(&pair(&qa, &qa), &problem, &grid).unwrap();
        let one = single_class_fixed_q(&a, &problem, &grid).unwrap();
        prop_assert!(close(two.value, one.value, 1e-12), "{} vs {}", two.value, one.value);
    }

    #[test]
    fn two_class_dominates_single_class(
        (w, p) in (2usize..4, 2usize..4, 2usize..4).prop_flat_map(|(n, m, v)| (channel(n, m), pmf(v))),
        t in 0.1f64..2.0,
    ) {
        let problem = ProblemSpec::new(w, SourceSpec::new(p).unwrap(), t).unwrap();
        let grid = RhoGrid::default().with_points(100).unwrap();
        let config = SolverConfig { starts: 4, search_grid_points: 50, ..SolverConfig::default() };
        let r = two_class_exponent_optimal(&problem, &grid, &config).unwrap();
        prop_assert!(r.single_class_value >= 0.0 && r.two_class_value >= 0.0);
        prop_assert!(r.two_class_value >= r.single_class_value - 1e-9);
        if let Some(v) = r.pair_search_value {
            prop_assert!(v <= r.two_class_value + 1e-12);
        }
    }

    #[test]
    fn binary_inputs_prefer_uniform(w in dense_channel(2, 3), rho in 1.0f64..20.0) {
        prop_assume!(!w.is_useless());
        let found = max_over_q(rho, &bhattacharyya_matrix(&w), &SolverConfig::default()).unwrap();
        prop_assert!((found.q.pmf()[0] - 0.5).abs() <= 1e-4);
    }
}
