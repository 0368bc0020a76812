//! Cross-check the merge-scan solver against the two independent oracles on
//! a batch of random instances.
//!
//! Run with: cargo run --example oracle_cross_check

use sumprox::oracle::random_problem_with_ties;
use sumprox::{compare_solvers, kkt_residual, solve_projection, SolverConfig};

fn main() -> sumprox::Result<()> {
    let instances = 500;
    let mut max_alpha_gap = 0.0f64;
    let mut max_x_gap = 0.0f64;
    let mut max_kkt = 0.0f64;

    for index in 0..instances {
        let n = 1 + (index % 40);
        // Every other instance duplicates dimensions or zeroes the weights,
        // the two layouts that stress breakpoint ties.
        let (zero_weight_fraction, tie_fraction) = match index % 3 {
            1 => (1.0, 0.0),
            2 => (0.25, 0.5),
            _ => (0.1, 0.0),
        };
        let problem =
            random_problem_with_ties(index as u64, n, 10.0, zero_weight_fraction, tie_fraction)?;

        let comparison = compare_solvers(&problem)?;
        max_alpha_gap = max_alpha_gap.max(comparison.alpha_gap);
        max_x_gap = max_x_gap.max(comparison.x_gap);

        let fast = solve_projection(&problem, &SolverConfig::default())?;
        let report = kkt_residual(&problem, &fast.x, fast.multiplier, 1e-9)?;
        max_kkt = max_kkt.max(report.max_residual());
        assert!(report.passed, "instance {index} failed the optimality check");
    }

    println!("instances:        {instances}");
    println!("max alpha gap:    {max_alpha_gap:e}");
    println!("max x gap:        {max_x_gap:e}");
    println!("max kkt residual: {max_kkt:e}");
    assert!(max_alpha_gap <= 1e-8 && max_x_gap <= 1e-8);
    println!("all three solvers agree");
    Ok(())
}
