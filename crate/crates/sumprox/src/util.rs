//! Numeric helpers shared across the solvers.

/// Kahan compensated accumulator. The solver's feasibility check compares a
/// million-term sum against a 1e-9 tolerance, which plain summation drift
/// would trip on its own; compensation keeps the error near one ulp.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sums a slice in one pass.
    pub fn of(values: &[f64]) -> f64 {
        let mut acc = Self::new();
        for &v in values {
            acc.add(v);
        }
        acc.value()
    }

    pub fn add(&mut self, value: f64) {
        let adjusted = value - self.compensation;
        let next = self.sum + adjusted;
        self.compensation = (next - self.sum) - adjusted;
        self.sum = next;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}
