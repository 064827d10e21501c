//! k-Means clustering with silhouette-based selection of k.
//!
//! Deterministic throughout: k-means++ restarts draw sub-seeds from the
//! config seed and the restart index, ties (nearest centroid, best restart,
//! best k) always resolve to the lowest index.

use std::collections::BTreeMap;

use ndarray::Array2;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::rng::{derive_seed, seeded_rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmeansConfig {
    pub k: usize,
    pub max_iterations: usize,
    /// Convergence threshold on the maximum centroid displacement per
    /// iteration.
    pub tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl KmeansConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            max_iterations: 300,
            tolerance: 1e-6,
            restarts: 10,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }
}

/// Result of one k-means fit. Assignments are consistent with the returned
/// centroids under the lowest-index tie rule, and every cluster is non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult<S: Scalar> {
    pub assignments: Vec<usize>,
    pub centroids: Array2<S>,
    pub inertia: S,
    pub iterations_run: usize,
}

fn squared_distance<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

fn nearest_centroid<S: Scalar>(point: &[S], centroids: &Array2<S>) -> (usize, S) {
    let mut best = 0;
    let mut best_dist = squared_distance(point, centroids.row(0).as_slice().unwrap());
    for c in 1..centroids.nrows() {
        let dist = squared_distance(point, centroids.row(c).as_slice().unwrap());
        if dist < best_dist {
            best = c;
            best_dist = dist;
        }
    }
    (best, best_dist)
}

fn kmeanspp_init<S: Scalar, R: Rng>(points: &Array2<S>, k: usize, rng: &mut R) -> Array2<S> {
    let n = points.nrows();
    let dim = points.ncols();
    let mut centroids = Array2::zeros((k, dim));

    let first = rng.gen_range(0..n);
    centroids.row_mut(0).assign(&points.row(first));

    let mut dist2: Vec<S> = (0..n)
        .map(|i| {
            squared_distance(
                points.row(i).as_slice().unwrap(),
                centroids.row(0).as_slice().unwrap(),
            )
        })
        .collect();

    for c in 1..k {
        let total: S = dist2.iter().copied().sum();
        let chosen = if total > S::zero() {
            let mut target = S::from_f64_lossy(rng.gen::<f64>()) * total;
            let mut chosen = n - 1;
            for (i, &d) in dist2.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            // All remaining distances are zero (duplicate points); fall back
            // to a uniform pick.
            rng.gen_range(0..n)
        };
        centroids.row_mut(c).assign(&points.row(chosen));
        for i in 0..n {
            let d = squared_distance(
                points.row(i).as_slice().unwrap(),
                centroids.row(c).as_slice().unwrap(),
            );
            if d < dist2[i] {
                dist2[i] = d;
            }
        }
    }
    centroids
}

/// Move each empty cluster's centroid onto the point currently farthest from
/// its assigned centroid, seizing that point.
fn repair_empty_clusters<S: Scalar>(
    points: &Array2<S>,
    centroids: &mut Array2<S>,
    assignments: &mut [usize],
    k: usize,
) {
    let mut sizes = vec![0usize; k];
    for &a in assignments.iter() {
        sizes[a] += 1;
    }
    for j in 0..k {
        if sizes[j] > 0 {
            continue;
        }
        let mut victim = None;
        let mut worst = S::neg_infinity();
        for (i, &a) in assignments.iter().enumerate() {
            if sizes[a] < 2 {
                continue;
            }
            let d = squared_distance(
                points.row(i).as_slice().unwrap(),
                centroids.row(a).as_slice().unwrap(),
            );
            if d > worst {
                worst = d;
                victim = Some(i);
            }
        }
        let victim = victim.expect("a cluster with at least two points exists");
        let old = assignments[victim];
        sizes[old] -= 1;
        sizes[j] = 1;
        assignments[victim] = j;
        let row = points.row(victim).to_owned();
        centroids.row_mut(j).assign(&row);
    }
}

struct LloydOutcome<S: Scalar> {
    result: ClusteringResult<S>,
    inertia_trace: Vec<S>,
}

fn lloyd<S: Scalar>(
    points: &Array2<S>,
    mut centroids: Array2<S>,
    max_iterations: usize,
    tolerance: f64,
) -> LloydOutcome<S> {
    let n = points.nrows();
    let dim = points.ncols();
    let k = centroids.nrows();
    let tolerance = S::from_f64_lossy(tolerance);
    let mut inertia_trace = Vec::new();
    let mut iterations_run = 0;

    loop {
        let mut assignments = vec![0usize; n];
        for i in 0..n {
            assignments[i] = nearest_centroid(points.row(i).as_slice().unwrap(), &centroids).0;
        }
        repair_empty_clusters(points, &mut centroids, &mut assignments, k);

        let inertia: S = (0..n)
            .map(|i| {
                squared_distance(
                    points.row(i).as_slice().unwrap(),
                    centroids.row(assignments[i]).as_slice().unwrap(),
                )
            })
            .sum();
        inertia_trace.push(inertia);
        iterations_run += 1;

        let mut means = Array2::<S>::zeros((k, dim));
        let mut sizes = vec![0usize; k];
        for i in 0..n {
            let a = assignments[i];
            sizes[a] += 1;
            for (col, &value) in points.row(i).iter().enumerate() {
                means[[a, col]] += value;
            }
        }
        for c in 0..k {
            let size = S::from_usize(sizes[c]).unwrap();
            for col in 0..dim {
                means[[c, col]] /= size;
            }
        }

        let displacement = (0..k)
            .map(|c| {
                squared_distance(
                    centroids.row(c).as_slice().unwrap(),
                    means.row(c).as_slice().unwrap(),
                )
                .sqrt()
            })
            .fold(S::zero(), S::max);

        if displacement <= tolerance || iterations_run >= max_iterations {
            return LloydOutcome {
                result: ClusteringResult {
                    assignments,
                    centroids,
                    inertia,
                    iterations_run,
                },
                inertia_trace,
            };
        }
        centroids = means;
    }
}

fn validate_points<S: Scalar>(points: &Array2<S>) -> Result<()> {
    if points.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    Ok(())
}

/// k-means++ initialization plus Lloyd iterations, best of `restarts`
/// restarts by inertia.
pub fn kmeans_fit<S: Scalar>(
    points: &Array2<S>,
    config: &KmeansConfig,
) -> Result<ClusteringResult<S>> {
    Ok(kmeans_fit_traced(points, config)?.0)
}

/// Like [`kmeans_fit`], also returning the winning restart's per-iteration
/// inertia trace (measured after each assignment step).
pub fn kmeans_fit_traced<S: Scalar>(
    points: &Array2<S>,
    config: &KmeansConfig,
) -> Result<(ClusteringResult<S>, Vec<S>)> {
    let n = points.nrows();
    if config.k < 1 || config.k > n {
        return Err(Error::InvalidClusterCount { k: config.k, n });
    }
    if points.ncols() < 1 {
        return Err(Error::InvalidConfig("points must have dim ≥ 1".into()));
    }
    if config.restarts < 1 {
        return Err(Error::InvalidConfig("restarts must be ≥ 1".into()));
    }
    validate_points(points)?;

    let mut best: Option<LloydOutcome<S>> = None;
    for restart in 0..config.restarts {
        let mut rng = seeded_rng(derive_seed(config.seed, restart as u64));
        let init = kmeanspp_init(points, config.k, &mut rng);
        let outcome = lloyd(points, init, config.max_iterations, config.tolerance);
        let better = match &best {
            None => true,
            Some(current) => outcome.result.inertia < current.result.inertia,
        };
        if better {
            best = Some(outcome);
        }
    }
    let best = best.expect("restarts ≥ 1");
    Ok((best.result, best.inertia_trace))
}

/// Mean silhouette over all points. Euclidean distances; a singleton's
/// silhouette is 0, as is the 0/0 case.
pub fn silhouette_mean<S: Scalar>(points: &Array2<S>, assignments: &[usize]) -> Result<S> {
    let n = points.nrows();
    if n != assignments.len() {
        return Err(Error::InvalidConfig(
            "assignments length must match point count".into(),
        ));
    }
    validate_points(points)?;

    // Densify arbitrary cluster ids.
    let mut dense: BTreeMap<usize, usize> = BTreeMap::new();
    for &a in assignments {
        let next = dense.len();
        dense.entry(a).or_insert(next);
    }
    let num_clusters = dense.len();
    if num_clusters < 2 || n < 2 {
        return Err(Error::TooFewClusters);
    }
    let labels: Vec<usize> = assignments.iter().map(|a| dense[a]).collect();
    let mut sizes = vec![0usize; num_clusters];
    for &l in &labels {
        sizes[l] += 1;
    }

    let mut total = S::zero();
    let mut cluster_dist = vec![S::zero(); num_clusters];
    for i in 0..n {
        if sizes[labels[i]] == 1 {
            continue; // singleton: s(i) = 0
        }
        cluster_dist.iter_mut().for_each(|d| *d = S::zero());
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = squared_distance(
                points.row(i).as_slice().unwrap(),
                points.row(j).as_slice().unwrap(),
            )
            .sqrt();
            cluster_dist[labels[j]] += d;
        }
        let own = labels[i];
        let a = cluster_dist[own] / S::from_usize(sizes[own] - 1).unwrap();
        let mut b = S::infinity();
        for c in 0..num_clusters {
            if c == own {
                continue;
            }
            let mean = cluster_dist[c] / S::from_usize(sizes[c]).unwrap();
            if mean < b {
                b = mean;
            }
        }
        let denom = a.max(b);
        if denom > S::zero() {
            total += (b - a) / denom;
        }
    }
    Ok(total / S::from_usize(n).unwrap())
}

/// Per-k silhouette sweep with the selected best k.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SilhouetteReport<S> {
    /// (k, mean silhouette) for each candidate k.
    pub scores: Vec<(usize, S)>,
    pub best_k: usize,
}

/// Run k-means for each k in `[k_min, k_max]` and pick the k with the highest
/// mean silhouette (ties to the smallest k). Per-k sub-seeds derive from the
/// base seed and k.
pub fn select_k<S: Scalar>(
    points: &Array2<S>,
    k_min: usize,
    k_max: usize,
    base_config: &KmeansConfig,
) -> Result<SilhouetteReport<S>> {
    let n = points.nrows();
    if k_min < 2 || k_min > k_max || k_max + 1 > n {
        return Err(Error::InvalidConfig(format!(
            "k range [{k_min}, {k_max}] invalid for {n} points"
        )));
    }
    let mut scores = Vec::with_capacity(k_max - k_min + 1);
    let mut best_k = k_min;
    let mut best_score = S::neg_infinity();
    for k in k_min..=k_max {
        let config = KmeansConfig {
            k,
            seed: derive_seed(base_config.seed, k as u64),
            ..base_config.clone()
        };
        let result = kmeans_fit(points, &config)?;
        let score = silhouette_mean(points, &result.assignments)?;
        scores.push((k, score));
        if score > best_score {
            best_score = score;
            best_k = k;
        }
    }
    Ok(SilhouetteReport { scores, best_k })
}

/// Chance-corrected agreement between two partitions of the same items.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "partitions must cover the same items");
    let n = a.len();
    if n == 0 {
        return 1.0;
    }
    let mut contingency: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut row_sums: BTreeMap<usize, usize> = BTreeMap::new();
    let mut col_sums: BTreeMap<usize, usize> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *contingency.entry((x, y)).or_insert(0) += 1;
        *row_sums.entry(x).or_insert(0) += 1;
        *col_sums.entry(y).or_insert(0) += 1;
    }
    fn comb2(x: usize) -> f64 {
        (x as f64) * (x as f64 - 1.0) / 2.0
    }
    let index: f64 = contingency.values().map(|&v| comb2(v)).sum();
    let row_comb: f64 = row_sums.values().map(|&v| comb2(v)).sum();
    let col_comb: f64 = col_sums.values().map(|&v| comb2(v)).sum();
    let expected = row_comb * col_comb / comb2(n);
    let max_index = (row_comb + col_comb) / 2.0;
    let denom = max_index - expected;
    if denom.abs() < f64::EPSILON {
        // Both partitions are trivial (all singletons or one cluster).
        1.0
    } else {
        (index - expected) / denom
    }
}
