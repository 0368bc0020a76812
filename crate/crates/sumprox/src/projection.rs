//! Exact minimization of `(1/2)·||x - y||^2 + Σ d_i·|x_i|` subject to `Σ x_i = 1`.
//!
//! The objective is strictly convex, so the minimizer is unique. Writing the
//! optimality conditions in terms of the constraint's Lagrange multiplier
//! `alpha` gives a componentwise recovery rule driven by the shifted values
//! `y_i - d_i` and `y_i + d_i`: a coordinate is positive exactly when
//! `alpha < y_i - d_i`, negative exactly when `alpha > y_i + d_i`, and zero
//! otherwise. The multiplier itself is the unique root of a piecewise-linear,
//! nonincreasing residual whose slope changes only at the `2n` shifted values,
//! so it can be located by sorting those values and sweeping the merged
//! sequence once. Total cost: two sorts plus a linear scan, `O(n log n)`.

use crate::error::{Error, Result};
use crate::util::KahanSum;

/// A projection instance: the point to project and the per-dimension weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionProblem {
    point: Vec<f64>,
    weights: Vec<f64>,
}

impl ProjectionProblem {
    /// Validates and wraps a problem instance.
    ///
    /// Rejects empty vectors (the sum constraint is infeasible over zero
    /// dimensions), length mismatches, non-finite entries, and negative
    /// weights.
    pub fn new(point: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if point.is_empty() {
            return Err(Error::Invalid(
                "the sum constraint cannot be met by an empty vector".into(),
            ));
        }
        if point.len() != weights.len() {
            return Err(Error::Invalid(format!(
                "point has {} entries but weights has {}",
                point.len(),
                weights.len()
            )));
        }
        if let Some(i) = point.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!("point[{i}] is not finite")));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Invalid(format!(
                "weights[{i}] must be finite and nonnegative, got {}",
                weights[i]
            )));
        }
        Ok(Self { point, weights })
    }

    /// Convenience constructor for a constant weight across all dimensions.
    pub fn with_uniform_weight(point: Vec<f64>, weight: f64) -> Result<Self> {
        let weights = vec![weight; point.len()];
        Self::new(point, weights)
    }

    pub fn dim(&self) -> usize {
        self.point.len()
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// The per-dimension shifted values `point ± weights` and their sorted copies.
///
/// The merged ascending sequence of `lower` and `upper` is the breakpoint
/// list of the multiplier residual: between consecutive breakpoints the
/// residual is affine.
#[derive(Debug, Clone)]
pub struct BreakpointBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
    sorted_lower: Vec<f64>,
    sorted_upper: Vec<f64>,
}

impl BreakpointBounds {
    /// Computes `lower_i = point_i - weight_i`, `upper_i = point_i + weight_i`
    /// and sorts each vector ascending. Sorting is the only superlinear step.
    pub fn from_problem(problem: &ProjectionProblem) -> Self {
        let lower: Vec<f64> = problem
            .point
            .iter()
            .zip(&problem.weights)
            .map(|(y, d)| y - d)
            .collect();
        let upper: Vec<f64> = problem
            .point
            .iter()
            .zip(&problem.weights)
            .map(|(y, d)| y + d)
            .collect();
        let mut sorted_lower = lower.clone();
        let mut sorted_upper = upper.clone();
        sorted_lower.sort_unstable_by(f64::total_cmp);
        sorted_upper.sort_unstable_by(f64::total_cmp);
        Self {
            lower,
            upper,
            sorted_lower,
            sorted_upper,
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// `point - weights`, in input order.
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// `point + weights`, in input order.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// `lower` sorted ascending.
    pub fn sorted_lower(&self) -> &[f64] {
        &self.sorted_lower
    }

    /// `upper` sorted ascending.
    pub fn sorted_upper(&self) -> &[f64] {
        &self.sorted_upper
    }
}

/// Shorthand for [`BreakpointBounds::from_problem`].
pub fn shifted_bounds(problem: &ProjectionProblem) -> BreakpointBounds {
    BreakpointBounds::from_problem(problem)
}

/// The solution of a projection instance.
#[derive(Debug, Clone)]
pub struct ProjectionSolution {
    /// The unique minimizer.
    pub x: Vec<f64>,
    /// The Lagrange multiplier of the sum constraint.
    pub multiplier: f64,
    /// Number of strictly positive entries of `x`.
    pub positive_count: usize,
    /// Number of strictly negative entries of `x`.
    pub negative_count: usize,
}

/// Tolerances for the multiplier search.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Slack allowed when testing whether a candidate multiplier lies in a
    /// candidate interval. Zero keeps the closed-interval test exact, which
    /// is correct in exact arithmetic because the solution is unique.
    pub membership_tolerance: f64,
    /// Allowed deviation of the recovered solution's sum from one. Exceeding
    /// it is reported as a contract violation.
    pub feasibility_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            membership_tolerance: 0.0,
            feasibility_tolerance: 1e-9,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !self.membership_tolerance.is_finite() || self.membership_tolerance < 0.0 {
            return Err(Error::Invalid(format!(
                "membership_tolerance must be finite and nonnegative, got {}",
                self.membership_tolerance
            )));
        }
        if !self.feasibility_tolerance.is_finite() || self.feasibility_tolerance < 0.0 {
            return Err(Error::Invalid(format!(
                "feasibility_tolerance must be finite and nonnegative, got {}",
                self.feasibility_tolerance
            )));
        }
        Ok(())
    }
}

/// Residual of the sum constraint as a function of the multiplier:
///
/// `sum_residual(a) = Σ_{lower_i > a} (lower_i - a) + Σ_{upper_i < a} (upper_i - a) - 1`
///
/// This equals `Σ recover_primal(bounds, a) - 1`. It is continuous, piecewise
/// linear, and nonincreasing; its unique root is the optimal multiplier.
pub fn sum_residual(alpha: f64, bounds: &BreakpointBounds) -> f64 {
    assert!(alpha.is_finite(), "multiplier must be finite");
    let mut total = KahanSum::new();
    for &lo in &bounds.lower {
        if lo > alpha {
            total.add(lo - alpha);
        }
    }
    for &up in &bounds.upper {
        if up < alpha {
            total.add(up - alpha);
        }
    }
    total.value() - 1.0
}

/// The multiplier implied by a conjectured sign pattern: given the sum of
/// `lower` values over conjectured-positive dimensions, the sum of `upper`
/// values over conjectured-negative ones, and the active count `t`, the sum
/// constraint forces the multiplier `(sum_pos_lower + sum_neg_upper - 1) / t`.
pub fn candidate_multiplier(sum_pos_lower: f64, sum_neg_upper: f64, active: usize) -> Result<f64> {
    if active == 0 {
        return Err(Error::Invalid(
            "a sign pattern with no active dimensions cannot sum to one".into(),
        ));
    }
    Ok((sum_pos_lower + sum_neg_upper - 1.0) / active as f64)
}

/// Recovers the minimizer from a multiplier value:
/// `x_i = lower_i - alpha` where `lower_i > alpha`, `x_i = upper_i - alpha`
/// where `upper_i < alpha`, and `x_i = 0` otherwise.
pub fn recover_primal(bounds: &BreakpointBounds, alpha: f64) -> Vec<f64> {
    assert!(alpha.is_finite(), "multiplier must be finite");
    bounds
        .lower
        .iter()
        .zip(&bounds.upper)
        .map(|(&lo, &up)| {
            if lo > alpha {
                lo - alpha
            } else if up < alpha {
                up - alpha
            } else {
                0.0
            }
        })
        .collect()
}

pub(crate) fn solution_from_multiplier(
    bounds: &BreakpointBounds,
    alpha: f64,
) -> (ProjectionSolution, f64) {
    let x = recover_primal(bounds, alpha);
    let positive_count = x.iter().filter(|&&v| v > 0.0).count();
    let negative_count = x.iter().filter(|&&v| v < 0.0).count();
    let mut sum = KahanSum::new();
    for &v in &x {
        sum.add(v);
    }
    let sum = sum.value();
    (
        ProjectionSolution {
            x,
            multiplier: alpha,
            positive_count,
            negative_count,
        },
        sum,
    )
}

pub(crate) fn check_feasibility(sum: f64, tolerance: f64, solver: &str) -> Result<()> {
    if (sum - 1.0).abs() > tolerance {
        return Err(Error::ContractViolation(format!(
            "{solver}: recovered solution sums to {sum:.17e}, off by more than {tolerance:.3e}"
        )));
    }
    Ok(())
}

/// Solves a projection instance by the sorted-breakpoint merge scan.
///
/// The `2n` shifted values partition the real axis into `4n + 1` candidate
/// sets (each breakpoint, plus the open intervals between and around them),
/// and the multiplier lies in exactly one of them. The scan walks the merged
/// ascending breakpoint sequence once, maintaining the sum of `lower` values
/// still above the scan point (`above_sum`), the sum of `upper` values
/// already below it (`below_sum`), and the active count, and accepts the
/// first candidate multiplier that falls inside its own interval. Blocks of
/// identical breakpoints are consumed in one step.
///
/// Interval membership is tested against the closed interval (widened by
/// `membership_tolerance`) rather than by the exact equality a breakpoint
/// candidate would require; uniqueness of the solution makes a multiplier
/// accepted at a shared endpoint equal to the breakpoint answer.
pub fn solve_projection(
    problem: &ProjectionProblem,
    config: &SolverConfig,
) -> Result<ProjectionSolution> {
    config.validate()?;
    let bounds = BreakpointBounds::from_problem(problem);
    let accepted = scan_candidates(&bounds, config.membership_tolerance).ok_or_else(|| {
        Error::ContractViolation(
            "merge scan exhausted every candidate set without accepting a multiplier".into(),
        )
    })?;

    // Re-derive the multiplier from single fresh sums over the accepted index
    // ranges; this discards the rounding drift the incremental scan updates
    // accumulate on large inputs.
    let above_sum = KahanSum::of(&bounds.sorted_lower[accepted.lower_consumed..]);
    let below_sum = KahanSum::of(&bounds.sorted_upper[..accepted.upper_consumed]);
    let alpha = candidate_multiplier(above_sum, below_sum, accepted.active)?;

    let (solution, sum) = solution_from_multiplier(&bounds, alpha);
    check_feasibility(sum, config.feasibility_tolerance, "merge scan")?;
    Ok(solution)
}

struct AcceptedCandidate {
    /// Entries of `sorted_lower` at or past this index are conjectured positive.
    lower_consumed: usize,
    /// Entries of `sorted_upper` before this index are conjectured negative.
    upper_consumed: usize,
    active: usize,
}

fn scan_candidates(bounds: &BreakpointBounds, tolerance: f64) -> Option<AcceptedCandidate> {
    let lower = &bounds.sorted_lower;
    let upper = &bounds.sorted_upper;
    let n = lower.len();

    let mut i = 0; // lower[i..] are conjectured positive
    let mut j = 0; // upper[..j] are conjectured negative
    let mut above_sum = KahanSum::of(lower);
    let mut below_sum = 0.0;
    let mut active = n;
    let mut left = f64::NEG_INFINITY;

    loop {
        let right = match (lower.get(i), upper.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => f64::INFINITY,
        };
        if active >= 1 {
            let alpha = (above_sum + below_sum - 1.0) / active as f64;
            if alpha >= left - tolerance && alpha <= right + tolerance {
                return Some(AcceptedCandidate {
                    lower_consumed: i,
                    upper_consumed: j,
                    active,
                });
            }
        }
        if right == f64::INFINITY {
            return None;
        }
        // Step past the breakpoint, consuming the whole block of entries
        // equal to it in either sorted vector.
        while i < n && lower[i] == right {
            above_sum -= lower[i];
            active -= 1;
            i += 1;
        }
        while j < n && upper[j] == right {
            below_sum += upper[j];
            active += 1;
            j += 1;
        }
        left = right;
    }
}
