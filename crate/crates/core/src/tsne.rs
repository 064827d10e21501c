//! Exact (O(n²)) t-SNE projection to 2-D.
//!
//! High-dimensional affinities use Gaussian kernels with per-point bandwidths
//! found by bisection against the target perplexity; the map is optimized by
//! gradient descent on KL(P‖Q) with Student-t map affinities, early
//! exaggeration, and a momentum schedule.

use ndarray::Array2;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::rng::seeded_rng;

/// Iterations during which P is multiplied by `early_exaggeration` and the
/// lower momentum applies.
const EARLY_PHASE_ITERS: usize = 250;
const MOMENTUM_EARLY: f64 = 0.5;
const MOMENTUM_LATE: f64 = 0.8;
/// Floor applied to joint affinities before renormalization.
const P_FLOOR: f64 = 1e-12;
/// Bisection budget and tolerance on the log2-perplexity.
const BISECTION_STEPS: usize = 50;
const BISECTION_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TsneConfig {
    pub perplexity: f64,
    pub learning_rate: f64,
    pub iterations: usize,
    pub early_exaggeration: f64,
    pub seed: u64,
}

impl Default for TsneConfig {
    fn default() -> Self {
        Self {
            perplexity: 30.0,
            learning_rate: 200.0,
            iterations: 1000,
            early_exaggeration: 12.0,
            seed: 0,
        }
    }
}

impl TsneConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_perplexity(mut self, perplexity: f64) -> Self {
        self.perplexity = perplexity;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if n < 4 {
            return Err(Error::InvalidConfig(format!(
                "t-SNE needs at least 4 points, got {n}"
            )));
        }
        if !(self.perplexity > 0.0) {
            return Err(Error::InvalidConfig("perplexity must be > 0".into()));
        }
        if self.perplexity >= (n as f64 - 1.0) / 3.0 {
            return Err(Error::InvalidConfig(format!(
                "perplexity {} too large for {n} points (must be < (n-1)/3)",
                self.perplexity
            )));
        }
        if self.iterations < EARLY_PHASE_ITERS {
            return Err(Error::InvalidConfig(format!(
                "iterations must be ≥ {EARLY_PHASE_ITERS}"
            )));
        }
        if !(self.learning_rate > 0.0) || !(self.early_exaggeration > 0.0) {
            return Err(Error::InvalidConfig(
                "learning_rate and early_exaggeration must be > 0".into(),
            ));
        }
        Ok(())
    }
}

/// 2-D map coordinates plus the final (unexaggerated) KL divergence.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding2D<S: Scalar> {
    pub coordinates: Array2<S>,
    pub final_kl: S,
}

fn pairwise_squared_distances<S: Scalar>(points: &Array2<S>) -> Array2<S> {
    let n = points.nrows();
    let mut distances = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let d: S = points
                .row(i)
                .iter()
                .zip(points.row(j).iter())
                .map(|(&a, &b)| {
                    let diff = a - b;
                    diff * diff
                })
                .sum();
            distances[[i, j]] = d;
            distances[[j, i]] = d;
        }
    }
    distances
}

/// Shannon entropy in bits of a normalized row.
fn entropy_bits<S: Scalar>(row: &[S]) -> S {
    let ln2 = S::from_f64_lossy(std::f64::consts::LN_2);
    let mut h = S::zero();
    for &p in row {
        if p > S::zero() {
            h -= p * p.ln();
        }
    }
    h / ln2
}

/// Conditional affinities p(j|i): each row is a Gaussian kernel over squared
/// distances whose bandwidth is bisected so the row's perplexity matches the
/// target. Diagonal entries are zero.
pub fn conditional_affinities<S: Scalar>(
    points: &Array2<S>,
    perplexity: f64,
) -> Result<Array2<S>> {
    let n = points.nrows();
    if points.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let distances = pairwise_squared_distances(points);
    let target = S::from_f64_lossy(perplexity.log2());
    let tol = S::from_f64_lossy(BISECTION_TOL);
    let two = S::from_f64_lossy(2.0);

    let mut p = Array2::zeros((n, n));
    let mut row = vec![S::zero(); n];
    for i in 0..n {
        let degenerate = (0..n).all(|j| j == i || distances[[i, j]] == S::zero());
        if degenerate {
            // A point at zero distance from every other point: bandwidth has
            // no effect, fall back to the uniform conditional distribution.
            log::warn!("t-SNE: point {i} is equidistant-zero from all others; using uniform affinities");
            let uniform = S::one() / S::from_usize(n - 1).unwrap();
            for j in 0..n {
                p[[i, j]] = if j == i { S::zero() } else { uniform };
            }
            continue;
        }

        let mut beta = S::one();
        let mut beta_min = S::neg_infinity();
        let mut beta_max = S::infinity();
        for _step in 0..BISECTION_STEPS {
            let mut sum = S::zero();
            for j in 0..n {
                row[j] = if j == i {
                    S::zero()
                } else {
                    (-beta * distances[[i, j]]).exp()
                };
                sum += row[j];
            }
            let entropy = if sum > S::zero() {
                for value in row.iter_mut() {
                    *value /= sum;
                }
                entropy_bits(&row)
            } else {
                // Kernel underflowed everywhere; entropy 0 forces beta down.
                for value in row.iter_mut() {
                    *value = S::zero();
                }
                S::zero()
            };

            let diff = entropy - target;
            if diff.abs() <= tol {
                break;
            }
            if diff > S::zero() {
                beta_min = beta;
                beta = if beta_max.is_infinite() {
                    beta * two
                } else {
                    (beta + beta_max) / two
                };
            } else {
                beta_max = beta;
                beta = if beta_min.is_infinite() {
                    beta / two
                } else {
                    (beta + beta_min) / two
                };
            }
        }
        for j in 0..n {
            p[[i, j]] = row[j];
        }
    }
    Ok(p)
}

/// Symmetrized joint affinities: `(p(j|i) + p(i|j)) / 2n`, floored at 1e-12
/// off the diagonal and renormalized to sum to 1.
pub fn joint_affinities<S: Scalar>(points: &Array2<S>, perplexity: f64) -> Result<Array2<S>> {
    let conditional = conditional_affinities(points, perplexity)?;
    let n = conditional.nrows();
    let two_n = S::from_usize(2 * n).unwrap();
    let floor = S::from_f64_lossy(P_FLOOR);

    let mut joint = Array2::zeros((n, n));
    let mut sum = S::zero();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let value = ((conditional[[i, j]] + conditional[[j, i]]) / two_n).max(floor);
            joint[[i, j]] = value;
            sum += value;
        }
    }
    joint.mapv_inplace(|v| v / sum);
    Ok(joint)
}

fn kl_divergence<S: Scalar>(p: &Array2<S>, y: &Array2<S>) -> S {
    let n = p.nrows();
    let floor = S::from_f64_lossy(P_FLOOR);
    let mut w = Array2::zeros((n, n));
    let mut total = S::zero();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dx = y[[i, 0]] - y[[j, 0]];
            let dy = y[[i, 1]] - y[[j, 1]];
            let value = S::one() / (S::one() + dx * dx + dy * dy);
            w[[i, j]] = value;
            total += value;
        }
    }
    let mut kl = S::zero();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let p_ij = p[[i, j]];
            if p_ij > S::zero() {
                let q_ij = (w[[i, j]] / total).max(floor);
                kl += p_ij * (p_ij / q_ij).ln();
            }
        }
    }
    kl
}

/// Project points to 2-D.
pub fn tsne_embed<S: Scalar>(points: &Array2<S>, config: &TsneConfig) -> Result<Embedding2D<S>> {
    let n = points.nrows();
    config.validate(n)?;
    let p = joint_affinities(points, config.perplexity)?;

    let mut rng = seeded_rng(config.seed);
    let init = Normal::new(0.0f64, 1e-4).expect("valid normal");
    let mut y: Array2<S> =
        Array2::from_shape_fn((n, 2), |_| S::from_f64_lossy(init.sample(&mut rng)));
    let mut velocity: Array2<S> = Array2::zeros((n, 2));

    let learning_rate = S::from_f64_lossy(config.learning_rate);
    let exaggeration = S::from_f64_lossy(config.early_exaggeration);
    let four = S::from_f64_lossy(4.0);
    let mut w = Array2::zeros((n, n));
    let mut gradient = Array2::zeros((n, 2));

    for iter in 0..config.iterations {
        // Student-t map affinities (unnormalized) and their sum.
        let mut w_total = S::zero();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    w[[i, j]] = S::zero();
                    continue;
                }
                let dx = y[[i, 0]] - y[[j, 0]];
                let dy = y[[i, 1]] - y[[j, 1]];
                let value = S::one() / (S::one() + dx * dx + dy * dy);
                w[[i, j]] = value;
                w_total += value;
            }
        }

        let exaggerate = iter < EARLY_PHASE_ITERS;
        gradient.fill(S::zero());
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let p_ij = if exaggerate {
                    p[[i, j]] * exaggeration
                } else {
                    p[[i, j]]
                };
                let q_ij = w[[i, j]] / w_total;
                let factor = four * (p_ij - q_ij) * w[[i, j]];
                gradient[[i, 0]] += factor * (y[[i, 0]] - y[[j, 0]]);
                gradient[[i, 1]] += factor * (y[[i, 1]] - y[[j, 1]]);
            }
        }

        let momentum = S::from_f64_lossy(if iter < EARLY_PHASE_ITERS {
            MOMENTUM_EARLY
        } else {
            MOMENTUM_LATE
        });
        for i in 0..n {
            for d in 0..2 {
                velocity[[i, d]] = momentum * velocity[[i, d]] - learning_rate * gradient[[i, d]];
                y[[i, d]] += velocity[[i, d]];
            }
        }
    }

    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let final_kl = kl_divergence(&p, &y);
    Ok(Embedding2D {
        coordinates: y,
        final_kl,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::silhouette_mean;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn planted_clusters(
        seed: u64,
        per_cluster: usize,
        dim: usize,
        spread: f64,
    ) -> (Array2<f64>, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let centers = [5.0, -5.0, 12.0];
        let n = per_cluster * centers.len();
        let mut points = Array2::zeros((n, dim));
        let mut labels = Vec::with_capacity(n);
        for (c, &center) in centers.iter().enumerate() {
            for i in 0..per_cluster {
                let row = c * per_cluster + i;
                for d in 0..dim {
                    points[[row, d]] = center + rng.gen_range(-spread..spread);
                }
                labels.push(c);
            }
        }
        (points, labels)
    }

    #[test]
    fn joint_affinities_are_symmetric_and_normalized() {
        let (points, _) = planted_clusters(3, 8, 5, 0.5);
        let p = joint_affinities(&points, 5.0).unwrap();
        let n = p.nrows();
        let mut sum = 0.0;
        for i in 0..n {
            assert_eq!(p[[i, i]], 0.0);
            for j in 0..n {
                assert!((p[[i, j]] - p[[j, i]]).abs() < 1e-15);
                assert!(p[[i, j]] >= 0.0);
                sum += p[[i, j]];
            }
        }
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn conditional_rows_hit_target_perplexity() {
        let (points, _) = planted_clusters(11, 10, 4, 1.0);
        let target = 7.0f64;
        let p = conditional_affinities(&points, target).unwrap();
        for i in 0..p.nrows() {
            let row: Vec<f64> = p.row(i).to_vec();
            let perplexity = 2f64.powf(entropy_bits(&row));
            assert!(
                (perplexity - target).abs() < 1e-3,
                "row {i} perplexity {perplexity}"
            );
        }
    }

    #[test]
    fn deterministic_and_shaped() {
        let (points, _) = planted_clusters(5, 5, 3, 0.3);
        let config = TsneConfig {
            perplexity: 3.0,
            iterations: 260,
            seed: 42,
            ..TsneConfig::default()
        };
        let a = tsne_embed(&points, &config).unwrap();
        let b = tsne_embed(&points, &config).unwrap();
        assert_eq!(a.coordinates, b.coordinates);
        assert_eq!(a.final_kl, b.final_kl);
        assert_eq!(a.coordinates.nrows(), 15);
        assert_eq!(a.coordinates.ncols(), 2);
        assert!(a.final_kl >= 0.0);
    }

    #[test]
    fn kl_drops_after_early_phase() {
        let (points, _) = planted_clusters(9, 6, 4, 1.0);
        let early = tsne_embed(
            &points,
            &TsneConfig {
                perplexity: 4.0,
                iterations: 250,
                seed: 3,
                ..TsneConfig::default()
            },
        )
        .unwrap();
        let late = tsne_embed(
            &points,
            &TsneConfig {
                perplexity: 4.0,
                iterations: 700,
                seed: 3,
                ..TsneConfig::default()
            },
        )
        .unwrap();
        assert!(
            late.final_kl < early.final_kl,
            "KL did not decrease: {} vs {}",
            late.final_kl,
            early.final_kl
        );
    }

    #[test]
    fn planted_structure_survives_embedding() {
        let (points, labels) = planted_clusters(21, 30, 10, 0.05);
        let config = TsneConfig {
            perplexity: 20.0,
            iterations: 1000,
            seed: 4,
            ..TsneConfig::default()
        };
        let embedding = tsne_embed(&points, &config).unwrap();
        let s = silhouette_mean(&embedding.coordinates, &labels).unwrap();
        assert!(s > 0.5, "silhouette {s}");
    }

    #[test]
    fn validation_errors() {
        let tiny = array![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]];
        assert!(tsne_embed(&tiny, &TsneConfig::default()).is_err());

        let (points, _) = planted_clusters(2, 4, 2, 0.5);
        let too_big = TsneConfig {
            perplexity: 5.0,
            ..TsneConfig::default()
        };
        assert!(tsne_embed(&points, &too_big).is_err());

        let short = TsneConfig {
            perplexity: 2.0,
            iterations: 100,
            ..TsneConfig::default()
        };
        assert!(tsne_embed(&points, &short).is_err());

        let mut bad = points.clone();
        bad[[0, 0]] = f64::NAN;
        let config = TsneConfig {
            perplexity: 2.0,
            iterations: 250,
            ..TsneConfig::default()
        };
        assert!(matches!(
            tsne_embed(&bad, &config),
            Err(Error::NonFiniteInput)
        ));
    }

    #[test]
    fn degenerate_rows_fall_back_to_uniform() {
        let points: Array2<f64> =
            array![[1.0, 1.0], [1.0, 1.0], [1.0, 1.0], [1.0, 1.0], [1.0, 1.0]];
        let config = TsneConfig {
            perplexity: 1.2,
            iterations: 250,
            seed: 1,
            ..TsneConfig::default()
        };
        let embedding = tsne_embed(&points, &config).unwrap();
        assert!(embedding.coordinates.iter().all(|v| v.is_finite()));
        assert!(embedding.final_kl >= 0.0);
    }
}
