//! Shared instance builders for the benchmarks.

use std::sync::Arc;

use wassalg::{Measure, RealLine, Result};

/// `n` equally weighted atoms `offset + k/n`, `k = 0..n`.
pub fn uniform_line(n: usize, offset: f64) -> Result<Measure<f64, RealLine>> {
    let atoms = (0..n).map(|k| offset + k as f64 / n as f64).collect();
    Measure::new(Arc::new(RealLine), atoms, vec![1.0 / n as f64; n])
}
