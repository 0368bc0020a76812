//! Property tests for the invariants the solvers promise on arbitrary valid
//! input, not just the worked instances.

use proptest::prelude::*;

use sumprox::lcc::{
    lipschitz_upper_bound, locality_weights, reconstruction_gradient, solve_lcc,
};
use sumprox::oracle::certify;
use sumprox::{
    bisection_solve, enumeration_solve, lcc_objective, shifted_bounds, solve_projection,
    sum_residual, FistaConfig, LccProblem, Matrix, ProjectionProblem, SolverConfig,
};

/// A point/weights pair of matching length.
fn instances(max_dim: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max_dim).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(0.0..10.0f64, n),
        )
    })
}

fn solve(point: &[f64], weights: &[f64]) -> sumprox::ProjectionSolution {
    let problem = ProjectionProblem::new(point.to_vec(), weights.to_vec()).unwrap();
    solve_projection(&problem, &SolverConfig::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // The solution sums to one, its multiplier is a root of the residual,
    // and every coordinate follows the sign rule implied by the multiplier.
    #[test]
    fn solution_satisfies_structure((point, weights) in instances(60)) {
        let problem = ProjectionProblem::new(point, weights).unwrap();
        let s = solve_projection(&problem, &SolverConfig::default()).unwrap();

        let total: f64 = s.x.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);

        let bounds = shifted_bounds(&problem);
        prop_assert!(sum_residual(s.multiplier, &bounds).abs() <= 1e-9);

        for ((&xi, &lo), &up) in s.x.iter().zip(bounds.lower()).zip(bounds.upper()) {
            if xi > 0.0 {
                prop_assert!(lo > s.multiplier);
            } else if xi < 0.0 {
                prop_assert!(up < s.multiplier);
            } else {
                prop_assert!(lo <= s.multiplier && up >= s.multiplier);
            }
        }
    }

    // The optimality certificate independently accepts every solver output.
    #[test]
    fn solution_passes_certificate((point, weights) in instances(60)) {
        let problem = ProjectionProblem::new(point, weights).unwrap();
        let s = solve_projection(&problem, &SolverConfig::default()).unwrap();
        let report = certify(&problem, &s, 1e-9).unwrap();
        prop_assert!(report.passed, "{report:?}");
    }

    // All three solvers give the same answer.
    #[test]
    fn solvers_agree((point, weights) in instances(30)) {
        let problem = ProjectionProblem::new(point, weights).unwrap();
        let fast = solve_projection(&problem, &SolverConfig::default()).unwrap();
        let slow = enumeration_solve(&problem).unwrap();
        let bisected = bisection_solve(&problem, 200).unwrap();
        prop_assert!((fast.multiplier - slow.multiplier).abs() <= 1e-8);
        prop_assert!((fast.multiplier - bisected.multiplier).abs() <= 1e-8);
        for (a, b) in fast.x.iter().zip(&slow.x) {
            prop_assert!((a - b).abs() <= 1e-8);
        }
        for (a, b) in fast.x.iter().zip(&bisected.x) {
            prop_assert!((a - b).abs() <= 1e-8);
        }
    }

    // When the multiplier is comfortably far from every breakpoint, the
    // fast solver and the enumeration solver see the exact same sign
    // pattern, not merely close values.
    #[test]
    fn sign_patterns_match_away_from_breakpoints((point, weights) in instances(30)) {
        let problem = ProjectionProblem::new(point, weights).unwrap();
        let fast = solve_projection(&problem, &SolverConfig::default()).unwrap();
        let bounds = shifted_bounds(&problem);
        let near_breakpoint = bounds
            .lower()
            .iter()
            .chain(bounds.upper())
            .any(|z| (z - fast.multiplier).abs() < 1e-6);
        prop_assume!(!near_breakpoint);
        let slow = enumeration_solve(&problem).unwrap();
        for (&a, &b) in fast.x.iter().zip(&slow.x) {
            prop_assert_eq!(a > 0.0, b > 0.0);
            prop_assert_eq!(a < 0.0, b < 0.0);
        }
    }

    // The residual the bisection oracle leaves behind is bounded.
    #[test]
    fn bisection_residual_is_small((point, weights) in instances(40)) {
        let problem = ProjectionProblem::new(point.clone(), weights).unwrap();
        let s = bisection_solve(&problem, 200).unwrap();
        let bounds = shifted_bounds(&problem);
        let bound = 1e-8 * point.len() as f64 * 10.0;
        prop_assert!(sum_residual(s.multiplier, &bounds).abs() <= bound);
    }

    // The residual function never increases.
    #[test]
    fn residual_is_nonincreasing((point, weights) in instances(40), a in -30.0..30.0f64, b in -30.0..30.0f64) {
        let problem = ProjectionProblem::new(point, weights).unwrap();
        let bounds = shifted_bounds(&problem);
        let (first, second) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(
            sum_residual(first, &bounds) >= sum_residual(second, &bounds) - 1e-12
        );
    }

    // Zero weights reduce the problem to projecting onto the hyperplane.
    #[test]
    fn zero_weights_give_closed_form(point in prop::collection::vec(-10.0..10.0f64, 1..100)) {
        let n = point.len();
        let problem = ProjectionProblem::new(point.clone(), vec![0.0; n]).unwrap();
        let s = solve_projection(&problem, &SolverConfig::default()).unwrap();
        let shift = (1.0 - point.iter().sum::<f64>()) / n as f64;
        for (xi, yi) in s.x.iter().zip(&point) {
            prop_assert!((xi - (yi + shift)).abs() <= 1e-10);
        }
    }

    // Translating the input translates the multiplier and nothing else.
    #[test]
    fn translation_covariance((point, weights) in instances(40), c in -10.0..10.0f64) {
        let base = solve(&point, &weights);
        let moved: Vec<f64> = point.iter().map(|y| y + c).collect();
        let shifted = solve(&moved, &weights);
        prop_assert!((shifted.multiplier - (base.multiplier + c)).abs() <= 1e-10);
        for (a, b) in shifted.x.iter().zip(&base.x) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    // Reversing the dimensions reverses the solution.
    #[test]
    fn permutation_equivariance((point, weights) in instances(40)) {
        let base = solve(&point, &weights);
        let point_rev: Vec<f64> = point.iter().rev().copied().collect();
        let weights_rev: Vec<f64> = weights.iter().rev().copied().collect();
        let reversed = solve(&point_rev, &weights_rev);
        prop_assert!((reversed.multiplier - base.multiplier).abs() <= 1e-12);
        for (a, b) in reversed.x.iter().zip(base.x.iter().rev()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    // The projection never moves two points further apart.
    #[test]
    fn nonexpansive_in_the_point((point, weights) in instances(40), other in prop::collection::vec(-10.0..10.0f64, 60)) {
        let second: Vec<f64> = point
            .iter()
            .zip(&other)
            .map(|(_, &o)| o)
            .collect();
        let x1 = solve(&point, &weights).x;
        let x2 = solve(&second, &weights).x;
        let dist = |a: &[f64], b: &[f64]| {
            a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
        };
        prop_assert!(dist(&x1, &x2) <= dist(&point, &second) + 1e-10);
    }
}

/// A coding instance: sample, landmark columns, and trade-off.
fn coding_instances() -> impl Strategy<Value = (Vec<f64>, Vec<Vec<f64>>, f64)> {
    (1..=4usize, 1..=5usize).prop_flat_map(|(m, c)| {
        (
            prop::collection::vec(-5.0..5.0f64, m),
            prop::collection::vec(prop::collection::vec(-5.0..5.0f64, m), c),
            0.0..3.0f64,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // The analytic gradient matches central finite differences.
    #[test]
    fn gradient_matches_finite_differences((sample, columns, tradeoff) in coding_instances()) {
        let problem = LccProblem::new(
            sample,
            Matrix::from_columns(&columns).unwrap(),
            tradeoff,
        )
        .unwrap();
        let c = problem.landmark_count();
        let w: Vec<f64> = (0..c).map(|j| 0.3 + 0.1 * j as f64).collect();
        let grad = reconstruction_gradient(&w, &problem).unwrap();

        // Differentiate only the smooth reconstruction term.
        let smooth = |w: &[f64]| -> f64 {
            let r = problem.landmarks().matvec(w);
            problem
                .sample()
                .iter()
                .zip(&r)
                .map(|(u, v)| (u - v) * (u - v))
                .sum()
        };
        let h = 1e-6;
        for j in 0..c {
            let mut plus = w.clone();
            plus[j] += h;
            let mut minus = w.clone();
            minus[j] -= h;
            let numeric = (smooth(&plus) - smooth(&minus)) / (2.0 * h);
            let scale = grad[j].abs().max(1.0);
            prop_assert!(
                (grad[j] - numeric).abs() <= 1e-5 * scale,
                "coordinate {j}: analytic {} vs numeric {numeric}",
                grad[j]
            );
        }
    }

    // The spectral bound is safe: gradient steps of size 1/L never expand
    // along the landmark operator (checked via the defining inequality
    // ||V w||^2 <= (L/2)||w||^2 on random directions).
    #[test]
    fn lipschitz_bound_dominates_rayleigh((sample, columns, tradeoff) in coding_instances(), direction in prop::collection::vec(-1.0..1.0f64, 5)) {
        let problem = LccProblem::new(
            sample,
            Matrix::from_columns(&columns).unwrap(),
            tradeoff,
        )
        .unwrap();
        let c = problem.landmark_count();
        let w: Vec<f64> = direction.iter().take(c).copied().collect();
        let norm2: f64 = w.iter().map(|v| v * v).sum();
        prop_assume!(norm2 > 1e-12);
        let image = problem.landmarks().matvec(&w);
        let image2: f64 = image.iter().map(|v| v * v).sum();
        let bound = lipschitz_upper_bound(&problem);
        prop_assert!(image2 <= 0.5 * bound * norm2 * (1.0 + 1e-9));
    }

    // Returned coding weights are feasible and no worse than the start.
    #[test]
    fn coding_solution_is_feasible_and_nonworsening((sample, columns, tradeoff) in coding_instances()) {
        let problem = LccProblem::new(
            sample,
            Matrix::from_columns(&columns).unwrap(),
            tradeoff,
        )
        .unwrap();
        let s = solve_lcc(&problem, &FistaConfig::default()).unwrap();
        let total: f64 = s.weights.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);

        let c = problem.landmark_count();
        let uniform = lcc_objective(&vec![1.0 / c as f64; c], &problem).unwrap();
        prop_assert!(s.objective <= uniform + 1e-9);
    }

    // Shifting the sample and all landmarks together changes nothing the
    // solver reports.
    #[test]
    fn coding_is_translation_invariant((sample, columns, tradeoff) in coding_instances(), shift in -5.0..5.0f64) {
        let problem = LccProblem::new(
            sample.clone(),
            Matrix::from_columns(&columns).unwrap(),
            tradeoff,
        )
        .unwrap();
        let moved_columns: Vec<Vec<f64>> = columns
            .iter()
            .map(|col| col.iter().map(|v| v + shift).collect())
            .collect();
        let moved = LccProblem::new(
            sample.iter().map(|v| v + shift).collect(),
            Matrix::from_columns(&moved_columns).unwrap(),
            tradeoff,
        )
        .unwrap();
        let d_base = locality_weights(&problem);
        let d_moved = locality_weights(&moved);
        for (a, b) in d_base.iter().zip(&d_moved) {
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
        }
    }
}
