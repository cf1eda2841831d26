//! Shared helpers for the integration suites. Each suite compiles its own
//! copy, so not every helper is used everywhere.
#![allow(dead_code)]

use cliquebound::graph::VertexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Least-squares slope of `y` against `x`.
pub fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    num / den
}

/// Balanced random side: ranks the vertices by seeded random keys and takes
/// the first half.
pub fn balanced_side(n: usize, seed: u64) -> VertexSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keyed: Vec<(u64, u32)> = (0..n as u32).map(|v| (rng.random(), v)).collect();
    keyed.sort_unstable();
    keyed[..n / 2].iter().map(|&(_, v)| v).collect()
}
