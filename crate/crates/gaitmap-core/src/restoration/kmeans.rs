//! Seeded k-means with farthest-point initialization.
//!
//! Determinism matters more than raw clustering quality here: the same
//! seed must reproduce the same reference set on every run. Initialization
//! picks a seeded random first centroid, then greedily adds the point
//! farthest from the chosen set (ties to the lower index). Lloyd iterations
//! run to assignment convergence or [`MAX_ITERATIONS`]; an empty cluster
//! restarts the whole attempt with an offset seed, up to [`MAX_RESTARTS`]
//! times.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Lloyd iteration cap per attempt.
pub const MAX_ITERATIONS: usize = 300;

/// Empty-cluster restart budget.
pub const MAX_RESTARTS: usize = 10;

/// A fitted clustering of feature points.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    /// Number of clusters requested.
    pub k: usize,
    /// Cluster centroids, `k` rows of the point dimension.
    pub centroids: Vec<Vec<f64>>,
    /// Cluster id of every input point.
    pub assignments: Vec<usize>,
    /// Seed that produced this model (before restart offsets).
    pub seed: u64,
    /// Within-cluster sum of squares after each assignment step of the
    /// successful attempt; non-increasing by construction.
    pub wcss_trace: Vec<f64>,
    /// Lloyd iterations used by the successful attempt.
    pub iterations: usize,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Clusters `points` into `k` groups.
///
/// Errors with [`Error::TooFewSamples`] when `points.len() < k`, with
/// [`Error::InvalidParams`] for `k == 0` or mixed dimensions, and with
/// [`Error::EmptyCluster`] when every restart attempt produced an empty
/// cluster (fewer than `k` distinct points, typically).
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Result<ClusterModel> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if points.len() < k {
        return Err(Error::TooFewSamples {
            needed: k,
            got: points.len(),
        });
    }
    let dim = points[0].len();
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidParams(
            "points must share one non-zero dimension".into(),
        ));
    }

    for attempt in 0..=MAX_RESTARTS {
        let attempt_seed = seed.wrapping_add(attempt as u64);
        match lloyd(points, k, seed, attempt_seed) {
            Some(model) => return Ok(model),
            None => continue,
        }
    }
    Err(Error::EmptyCluster {
        restarts: MAX_RESTARTS,
    })
}

/// One full k-means attempt; `None` signals an empty cluster.
fn lloyd(points: &[Vec<f64>], k: usize, seed: u64, attempt_seed: u64) -> Option<ClusterModel> {
    let n = points.len();
    let mut rng = ChaCha8Rng::seed_from_u64(attempt_seed);

    // Farthest-point init: seeded first pick, then greedy max-min distance.
    let first = rng.random_range(0..n);
    let mut centroids: Vec<Vec<f64>> = vec![points[first].clone()];
    let mut min_dist: Vec<f64> = points
        .iter()
        .map(|p| squared_distance(p, &centroids[0]))
        .collect();
    while centroids.len() < k {
        let mut best = 0;
        let mut best_dist = f64::NEG_INFINITY;
        for (i, &d) in min_dist.iter().enumerate() {
            if d > best_dist {
                best_dist = d;
                best = i;
            }
        }
        centroids.push(points[best].clone());
        for (i, p) in points.iter().enumerate() {
            let d = squared_distance(p, centroids.last().unwrap());
            if d < min_dist[i] {
                min_dist[i] = d;
            }
        }
    }

    let dim = points[0].len();
    let mut assignments = vec![0usize; n];
    let mut wcss_trace = Vec::new();
    let mut iterations = 0;
    for iter in 0..MAX_ITERATIONS {
        iterations = iter + 1;
        // Assignment step (ties to the lower cluster id).
        let mut changed = false;
        let mut wcss = 0.0;
        for (i, p) in points.iter().enumerate() {
            let mut best = 0;
            let mut best_dist = squared_distance(p, &centroids[0]);
            for (c, centroid) in centroids.iter().enumerate().skip(1) {
                let d = squared_distance(p, centroid);
                if d < best_dist {
                    best_dist = d;
                    best = c;
                }
            }
            if assignments[i] != best {
                assignments[i] = best;
                changed = true;
            }
            wcss += best_dist;
        }
        wcss_trace.push(wcss);
        if iter > 0 && !changed {
            break;
        }

        // Update step; an empty cluster aborts the attempt.
        let mut sums = vec![vec![0.0f64; dim]; k];
        let mut counts = vec![0usize; k];
        for (i, p) in points.iter().enumerate() {
            counts[assignments[i]] += 1;
            for (s, v) in sums[assignments[i]].iter_mut().zip(p) {
                *s += v;
            }
        }
        if counts.contains(&0) {
            return None;
        }
        for (c, sum) in sums.into_iter().enumerate() {
            centroids[c] = sum.into_iter().map(|s| s / counts[c] as f64).collect();
        }
    }

    Some(ClusterModel {
        k,
        centroids,
        assignments,
        seed,
        wcss_trace,
        iterations,
    })
}
