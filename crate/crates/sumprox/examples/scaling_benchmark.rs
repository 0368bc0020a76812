//! Time the projection solver across instance sizes and print the scaling
//! table. The normalized column divides by n·log2(n); a roughly constant
//! value across rows is the loglinear-cost signature.
//!
//! Run with: cargo run --release --example scaling_benchmark

use sumprox::cli::run_bench;

fn main() {
    let sizes = [10_000, 100_000, 1_000_000];
    let rows = run_bench(&sizes, 3, 42, 10.0).expect("benchmark runs");

    println!("{:>12} {:>16} {:>18}", "n", "median_seconds", "per_n_log2n");
    for row in &rows {
        println!(
            "{:>12} {:>16.6} {:>18.3e}",
            row.n, row.median_seconds, row.normalized
        );
    }

    let ratios: Vec<f64> = rows.iter().map(|r| r.normalized).collect();
    let spread = ratios.iter().cloned().fold(f64::MIN, f64::max)
        / ratios.iter().cloned().fold(f64::MAX, f64::min);
    println!("normalized spread across sizes: {spread:.2}x");
}
