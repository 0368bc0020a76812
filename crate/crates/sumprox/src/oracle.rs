//! Independent checks for the projection solver: a KKT certificate, two
//! slower solvers that share as little structure with the merge scan as
//! possible, a seeded instance generator, and a cross-solver comparison.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::projection::{
    candidate_multiplier, shifted_bounds, solution_from_multiplier, sum_residual,
    BreakpointBounds, ProjectionProblem, ProjectionSolution,
};
use crate::util::KahanSum;

/// First-order optimality diagnostics for a claimed solution.
///
/// A point solves the projection problem exactly when every residual here is
/// zero: the stationarity equations on nonzero coordinates, the subgradient
/// interval condition on zero coordinates, and the sum constraint.
#[derive(Debug, Clone, Copy)]
pub struct KktReport {
    /// Worst violation of `x_i - y_i + d_i + alpha = 0` (over `x_i > 0`) and
    /// `x_i - y_i - d_i + alpha = 0` (over `x_i < 0`).
    pub max_stationarity_residual: f64,
    /// Worst violation of `|y_i - alpha| <= d_i` over `x_i = 0`.
    pub max_subgradient_violation: f64,
    /// `|sum(x) - 1|`.
    pub feasibility_residual: f64,
    /// Whether all three residuals are within the supplied tolerance.
    pub passed: bool,
}

impl KktReport {
    /// Largest of the three residuals.
    pub fn max_residual(&self) -> f64 {
        self.max_stationarity_residual
            .max(self.max_subgradient_violation)
            .max(self.feasibility_residual)
    }
}

/// Evaluates the optimality conditions of `(x, alpha)` for `problem`.
pub fn kkt_residual(
    problem: &ProjectionProblem,
    x: &[f64],
    alpha: f64,
    tolerance: f64,
) -> Result<KktReport> {
    if x.len() != problem.dim() {
        return Err(Error::Invalid(format!(
            "solution has {} entries but the problem has {}",
            x.len(),
            problem.dim()
        )));
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::Invalid(format!("x[{i}] is not finite")));
    }
    if !alpha.is_finite() {
        return Err(Error::Invalid("multiplier is not finite".into()));
    }
    if !tolerance.is_finite() || tolerance < 0.0 {
        return Err(Error::Invalid(format!(
            "tolerance must be finite and nonnegative, got {tolerance}"
        )));
    }

    let mut stationarity = 0.0f64;
    let mut subgradient = 0.0f64;
    let mut sum = KahanSum::new();
    for ((&xi, &yi), &di) in x.iter().zip(problem.point()).zip(problem.weights()) {
        sum.add(xi);
        if xi > 0.0 {
            stationarity = stationarity.max((xi - yi + di + alpha).abs());
        } else if xi < 0.0 {
            stationarity = stationarity.max((xi - yi - di + alpha).abs());
        } else {
            subgradient = subgradient.max(((yi - alpha).abs() - di).max(0.0));
        }
    }
    let feasibility = (sum.value() - 1.0).abs();
    Ok(KktReport {
        max_stationarity_residual: stationarity,
        max_subgradient_violation: subgradient,
        feasibility_residual: feasibility,
        passed: stationarity <= tolerance && subgradient <= tolerance && feasibility <= tolerance,
    })
}

/// Solves a projection instance by bisecting the sum residual.
///
/// The residual is strictly positive at `min(lower) - 2` (every dimension
/// contributes at least 2) and strictly negative at `max(upper) + 2`, so that
/// bracket always contains the root. Bisection stops when the bracket is
/// narrower than `1e-13 * (1 + bracket magnitude)` or after `max_iterations`
/// halvings. Because the residual can reach zero exactly at a breakpoint and
/// stay on a sloped segment only on one side, the midpoint is snapped to the
/// nearest breakpoint when one lies within 1e-12 and the snap strictly
/// shrinks the residual.
pub fn bisection_solve(
    problem: &ProjectionProblem,
    max_iterations: usize,
) -> Result<ProjectionSolution> {
    if max_iterations == 0 {
        return Err(Error::Invalid("max_iterations must be at least 1".into()));
    }
    let bounds = shifted_bounds(problem);
    let mut lo = bounds.sorted_lower()[0] - 2.0;
    let mut hi = bounds.sorted_upper()[bounds.dim() - 1] + 2.0;
    if !(sum_residual(lo, &bounds) > 0.0 && sum_residual(hi, &bounds) < 0.0) {
        return Err(Error::ContractViolation(
            "bisection bracket does not straddle the root".into(),
        ));
    }
    let width_target = 1e-13 * (1.0 + lo.abs().max(hi.abs()));
    for _ in 0..max_iterations {
        if hi - lo < width_target {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if sum_residual(mid, &bounds) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut alpha = 0.5 * (lo + hi);
    if let Some(snapped) = snap_to_breakpoint(alpha, &bounds) {
        alpha = snapped;
    }
    Ok(solution_from_multiplier(&bounds, alpha).0)
}

fn snap_to_breakpoint(alpha: f64, bounds: &BreakpointBounds) -> Option<f64> {
    let nearest = |sorted: &[f64]| -> Option<f64> {
        let idx = sorted.partition_point(|&z| z < alpha);
        let mut best: Option<f64> = None;
        for candidate in [idx.checked_sub(1).map(|k| sorted[k]), sorted.get(idx).copied()]
            .into_iter()
            .flatten()
        {
            match best {
                Some(b) if (b - alpha).abs() <= (candidate - alpha).abs() => {}
                _ => best = Some(candidate),
            }
        }
        best
    };
    let candidate = match (nearest(bounds.sorted_lower()), nearest(bounds.sorted_upper())) {
        (Some(a), Some(b)) => {
            if (a - alpha).abs() <= (b - alpha).abs() {
                a
            } else {
                b
            }
        }
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => return None,
    };
    if (candidate - alpha).abs() <= 1e-12
        && sum_residual(candidate, bounds).abs() < sum_residual(alpha, bounds).abs()
    {
        Some(candidate)
    } else {
        None
    }
}

/// Solves a projection instance by testing every candidate set directly.
///
/// The sorted merged breakpoint list splits the real axis into open
/// intervals, single breakpoints, and two unbounded rays; the multiplier
/// lies in exactly one of these sets. For each set this walks the problem
/// once, conjectures the sign of every dimension from a representative point
/// of the set, forms the implied multiplier, and accepts it if it falls in
/// the set it was derived from (interval endpoints included; a multiplier at
/// a shared endpoint coincides with the breakpoint answer). Plain
/// accumulation recomputed from scratch for every set, `O(n^2)` total: this
/// solver deliberately shares no bookkeeping with the merge scan.
pub fn enumeration_solve(problem: &ProjectionProblem) -> Result<ProjectionSolution> {
    let bounds = shifted_bounds(problem);
    let n = bounds.dim();
    let mut breakpoints: Vec<f64> = Vec::with_capacity(2 * n);
    breakpoints.extend_from_slice(bounds.sorted_lower());
    breakpoints.extend_from_slice(bounds.sorted_upper());
    breakpoints.sort_unstable_by(f64::total_cmp);

    // Each candidate set is described by a probe point (to conjecture signs)
    // and the acceptance bounds for the implied multiplier.
    let mut candidates: Vec<(f64, f64, f64)> = Vec::with_capacity(4 * n + 1);
    candidates.push((breakpoints[0] - 1.0, f64::NEG_INFINITY, breakpoints[0]));
    for k in 0..breakpoints.len() {
        let z = breakpoints[k];
        candidates.push((z, z, z));
        let (probe, right) = match breakpoints.get(k + 1) {
            Some(&next) => (z + 0.5 * (next - z), next),
            None => (z + 1.0, f64::INFINITY),
        };
        candidates.push((probe, z, right));
    }

    for (probe, left, right) in candidates {
        let mut sum_pos = 0.0;
        let mut sum_neg = 0.0;
        let mut active = 0usize;
        for (&lo, &up) in bounds.lower().iter().zip(bounds.upper()) {
            if lo > probe {
                sum_pos += lo;
                active += 1;
            } else if up < probe {
                sum_neg += up;
                active += 1;
            }
        }
        if active == 0 {
            continue;
        }
        let alpha = candidate_multiplier(sum_pos, sum_neg, active)?;
        let inside = if left == right {
            alpha == left
        } else {
            alpha >= left && alpha <= right
        };
        if inside {
            let (solution, sum) = solution_from_multiplier(&bounds, alpha);
            crate::projection::check_feasibility(sum, 1e-9, "enumeration")?;
            return Ok(solution);
        }
    }
    Err(Error::ContractViolation(
        "enumeration tested every candidate set without accepting a multiplier".into(),
    ))
}

/// Generates a deterministic random instance: `point` uniform in
/// `[-value_scale, value_scale]`, weights uniform in `[0, value_scale]` with
/// `zero_weight_fraction` of them forced to exactly zero.
pub fn random_problem(
    seed: u64,
    n: usize,
    value_scale: f64,
    zero_weight_fraction: f64,
) -> Result<ProjectionProblem> {
    random_problem_with_ties(seed, n, value_scale, zero_weight_fraction, 0.0)
}

/// Like [`random_problem`], but additionally overwrites roughly
/// `tie_fraction` of the dimensions with copies of other dimensions, so the
/// instance carries exactly duplicated breakpoints.
pub fn random_problem_with_ties(
    seed: u64,
    n: usize,
    value_scale: f64,
    zero_weight_fraction: f64,
    tie_fraction: f64,
) -> Result<ProjectionProblem> {
    if n == 0 {
        return Err(Error::Invalid("instance size must be at least 1".into()));
    }
    if !value_scale.is_finite() || value_scale <= 0.0 {
        return Err(Error::Invalid(format!(
            "value_scale must be finite and positive, got {value_scale}"
        )));
    }
    for (name, f) in [
        ("zero_weight_fraction", zero_weight_fraction),
        ("tie_fraction", tie_fraction),
    ] {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::Invalid(format!(
                "{name} must lie in [0, 1], got {f}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for _ in 0..n {
        point.push(rng.gen_range(-value_scale..=value_scale));
        let zero = zero_weight_fraction > 0.0 && rng.gen_bool(zero_weight_fraction);
        weights.push(if zero {
            0.0
        } else {
            rng.gen_range(0.0..=value_scale)
        });
    }
    if tie_fraction > 0.0 {
        for i in 1..n {
            if rng.gen_bool(tie_fraction) {
                let source = rng.gen_range(0..i);
                point[i] = point[source];
                weights[i] = weights[source];
            }
        }
    }
    ProjectionProblem::new(point, weights)
}

/// Agreement diagnostics across the three solvers.
#[derive(Debug, Clone)]
pub struct OracleComparison {
    /// Largest pairwise multiplier difference.
    pub alpha_gap: f64,
    /// Largest pairwise infinity-norm difference between solutions.
    pub x_gap: f64,
    /// Multiplier reported by each solver.
    pub per_solver_alpha: BTreeMap<String, f64>,
}

/// Runs the merge scan, the enumeration solver, and the bisection solver on
/// one instance and reports the largest pairwise disagreements.
pub fn compare_solvers(problem: &ProjectionProblem) -> Result<OracleComparison> {
    let fast = crate::projection::solve_projection(problem, &Default::default())?;
    let enumerated = enumeration_solve(problem)?;
    let bisected = bisection_solve(problem, 200)?;

    let solutions = [
        ("merge_scan", &fast),
        ("enumeration", &enumerated),
        ("bisection", &bisected),
    ];
    let mut alpha_gap = 0.0f64;
    let mut x_gap = 0.0f64;
    for (i, (_, a)) in solutions.iter().enumerate() {
        for (_, b) in solutions.iter().skip(i + 1) {
            alpha_gap = alpha_gap.max((a.multiplier - b.multiplier).abs());
            let gap = a
                .x
                .iter()
                .zip(&b.x)
                .map(|(p, q)| (p - q).abs())
                .fold(0.0f64, f64::max);
            x_gap = x_gap.max(gap);
        }
    }
    let per_solver_alpha = solutions
        .iter()
        .map(|(name, s)| (name.to_string(), s.multiplier))
        .collect();
    Ok(OracleComparison {
        alpha_gap,
        x_gap,
        per_solver_alpha,
    })
}

/// Convenience wrapper: checks one solution against the instance it claims
/// to solve. Used by callers that only need a pass/fail with residuals.
pub fn certify(
    problem: &ProjectionProblem,
    solution: &ProjectionSolution,
    tolerance: f64,
) -> Result<KktReport> {
    kkt_residual(problem, &solution.x, solution.multiplier, tolerance)
}
