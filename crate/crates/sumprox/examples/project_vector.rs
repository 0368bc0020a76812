//! Solve one projection instance and print the solution together with its
//! optimality certificate.
//!
//! Run with: cargo run --example project_vector

use sumprox::{kkt_residual, solve_projection, ProjectionProblem, SolverConfig};

fn main() -> sumprox::Result<()> {
    // Project a point that is neither feasible nor sparse; the penalty
    // weights push the smallest coordinate to exactly zero.
    let point = vec![0.9, 0.6, 0.1];
    let weights = vec![0.1, 0.1, 0.1];
    let problem = ProjectionProblem::new(point.clone(), weights.clone())?;
    let solution = solve_projection(&problem, &SolverConfig::default())?;

    println!("point:      {point:?}");
    println!("weights:    {weights:?}");
    println!("solution:   {:?}", solution.x);
    println!("multiplier: {}", solution.multiplier);
    println!(
        "signs:      {} positive, {} negative, {} zero",
        solution.positive_count,
        solution.negative_count,
        solution.x.len() - solution.positive_count - solution.negative_count
    );
    println!("sum:        {}", solution.x.iter().sum::<f64>());

    // The report certifies the output independently of how it was computed:
    // stationarity on the active coordinates, the subgradient interval on
    // the zero ones, and the sum constraint.
    let report = kkt_residual(&problem, &solution.x, solution.multiplier, 1e-9)?;
    println!("optimality residual: {:e}", report.max_residual());
    assert!(report.passed);
    Ok(())
}
