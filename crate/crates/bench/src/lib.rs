//! Shared inputs for the benchmarks.

use krull_core::{KrullPresentation, MonoidSpec};

pub fn pyramid() -> Vec<Vec<i64>> {
    vec![vec![1, 1, 1], vec![1, -1, 1], vec![-1, 1, 1], vec![-1, -1, 1]]
}

pub fn circle(n: i64) -> Vec<Vec<i64>> {
    (0..=n).map(|k| vec![k * k - 1, 2 * k, k * k + 1]).collect()
}

pub fn hilbert(bound: u64) -> MonoidSpec {
    MonoidSpec::Krull(KrullPresentation::hilbert(bound).expect("hilbert preset"))
}
