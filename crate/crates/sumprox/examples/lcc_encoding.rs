//! Encode a sample against a set of landmarks, sweeping the locality
//! trade-off to show how weight concentrates on nearby landmarks.
//!
//! Run with: cargo run --example lcc_encoding

use sumprox::lcc::locality_weights;
use sumprox::{solve_lcc, FistaConfig, LccProblem, Matrix};

fn main() -> sumprox::Result<()> {
    // Four landmarks in the plane; the sample sits close to the first two.
    let landmarks = Matrix::from_columns(&[
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![4.0, 3.0],
        vec![-3.0, 5.0],
    ])?;
    let sample = vec![0.4, 0.2];

    println!("sample: {sample:?}");
    for tradeoff in [0.0, 0.1, 1.0, 10.0] {
        let problem = LccProblem::new(sample.clone(), landmarks.clone(), tradeoff)?;
        let penalties = locality_weights(&problem);
        let solution = solve_lcc(&problem, &FistaConfig::default())?;
        let rounded: Vec<f64> = solution
            .weights
            .iter()
            .map(|w| (w * 1e6).round() / 1e6)
            .collect();
        println!(
            "tradeoff {tradeoff:>5}: weights {rounded:?} objective {:.6} \
             iterations {} converged {}",
            solution.objective, solution.iterations, solution.converged
        );
        assert!(solution.converged);
        assert!((solution.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-9);

        // Stronger locality: distant landmarks carry larger penalties, so
        // their weights shrink toward zero.
        if tradeoff >= 1.0 {
            let far = penalties
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(j, _)| j)
                .unwrap();
            assert!(solution.weights[far].abs() <= 0.1);
        }
    }
    Ok(())
}
