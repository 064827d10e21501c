//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line. Expected values come from independent oracles computed in
//! this file (exhaustive enumeration, brute force, planted constructions),
//! never from the implementation under test.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use common::{assert_dirs_identical_except_manifest, assert_success, drmine, read_int_pairs};
use drmine_core::cluster::{
    adjusted_rand_index, kmeans_fit, kmeans_fit_traced, select_k, silhouette_mean, KmeansConfig,
};
use drmine_core::ingest::{
    extract_unique, DateValue, InitiatedBy, Location, ReportRecord, TriState,
};
use drmine_core::lda::{dominant_topic, fit_lda, format_percent, LdaConfig};
use drmine_core::report::{drill_down, merge_back, CategoryRule, CategoryRules};
use drmine_core::textprep::{
    build_vocabulary, to_bow, tokenize_normalize, BowDoc, StopwordSet, TokenizedDoc, Vocabulary,
};
use drmine_core::tsne::{conditional_affinities, joint_affinities, tsne_embed, TsneConfig};

fn pass(criterion: u32, detail: &str) {
    println!("criterion {criterion:02}: PASS — {detail}");
}

fn make_record(description: &str) -> ReportRecord {
    ReportRecord {
        manufacturer: "Acme".into(),
        permit_number: "P-1".into(),
        date: DateValue::parse("2023-06-01"),
        vin: "VIN0".into(),
        operates_driverless: TriState::No,
        driver_present: TriState::Yes,
        initiated_by: InitiatedBy::TestDriver,
        location: Location::Street,
        description: description.into(),
        source_file: "synth.csv".into(),
        source_row: 1,
    }
}

// ---------------------------------------------------------------------------
// 1. Tokenizer golden test
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_tokenizer_golden() {
    let start = Instant::now();
    let before = "Safety Driver disengaged autonomous mode upon judging that vehicle was too \
close to road/lane boundary. Root cause: object, lane detection or other issue. Conditions: \
Non-inclement weather, dry roads, no other factors involved.";
    let expected = [
        "safety", "driver", "disengaged", "autonomous", "mode", "upon", "judging", "vehicle",
        "close", "boundary", "root", "cause", "object", "lane", "detection", "issue",
        "conditions", "weather", "dry", "roads", "factors", "involved",
    ];
    let tokens = tokenize_normalize(before, &StopwordSet::default_english());
    assert_eq!(tokens, expected);
    assert_eq!(tokens.len(), 22);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(1, &format!("22-token golden sequence in {elapsed:?}"));
}

// ---------------------------------------------------------------------------
// 2. Summary rendering
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_summary_format() {
    let theta_row = [0.2f64, 0.15, 0.5027, 0.1473];
    let dominant = dominant_topic(&theta_row);
    assert_eq!(dominant, 2);
    assert_eq!(format_percent(theta_row[dominant]), "50.27%");
    pass(2, "dominant topic 2 rendered as 50.27%");
}

// ---------------------------------------------------------------------------
// 3. LDA invariants over random corpora
// ---------------------------------------------------------------------------

fn random_corpus(rng: &mut ChaCha8Rng) -> (Vec<BowDoc>, Vocabulary) {
    let num_docs = rng.gen_range(1..=30);
    let vocab_size = rng.gen_range(2..=50);
    let words: Vec<String> = (0..vocab_size).map(|i| format!("w{i:02}")).collect();
    loop {
        let docs: Vec<TokenizedDoc> = (0..num_docs)
            .map(|d| TokenizedDoc {
                description_id: d,
                tokens: (0..rng.gen_range(0..=20))
                    .map(|_| words[rng.gen_range(0..vocab_size)].clone())
                    .collect(),
            })
            .collect();
        if docs.iter().all(|d| d.tokens.is_empty()) {
            continue; // need at least one token somewhere
        }
        let vocab = build_vocabulary(&docs);
        let corpus = docs
            .iter()
            .map(|d| to_bow(d.description_id, &d.tokens, &vocab))
            .collect();
        return (corpus, vocab);
    }
}

#[test]
fn criterion_03_lda_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..100u64 {
        let (corpus, vocab) = random_corpus(&mut rng);
        let k = rng.gen_range(1..=5);
        let config = LdaConfig::new(k).with_iterations(30).with_seed(trial);
        let model = fit_lda::<f64>(&corpus, &vocab, &config).unwrap();
        for d in 0..model.num_docs() {
            let sum: f64 = model.theta.row(d).sum();
            assert!((sum - 1.0).abs() <= 1e-9, "theta row {d} sums to {sum}");
        }
        for t in 0..k {
            let sum: f64 = model.phi.row(t).sum();
            assert!((sum - 1.0).abs() <= 1e-9, "phi row {t} sums to {sum}");
        }
        assert!(model.theta.iter().all(|&x| x > 0.0));
        assert!(model.phi.iter().all(|&x| x > 0.0));

        let again = fit_lda::<f64>(&corpus, &vocab, &config).unwrap();
        assert_eq!(model.theta, again.theta, "theta not bitwise deterministic");
        assert_eq!(model.phi, again.phi, "phi not bitwise deterministic");
    }
    pass(3, "100 random corpora: stochastic rows, positivity, bitwise determinism");
}

// ---------------------------------------------------------------------------
// 4. Gibbs sampling vs the exhaustively enumerated posterior
// ---------------------------------------------------------------------------

/// Exact joint P(z, w) for a corpus of single-token docs, by the sequential
/// predictive product (token i contributes its conditional prior times its
/// word likelihood given all earlier tokens).
fn enumerate_posterior(
    doc_words: &[usize],
    num_topics: usize,
    vocab_size: usize,
    alpha: f64,
    beta: f64,
) -> Vec<f64> {
    let tokens = doc_words.len();
    let states = num_topics.pow(tokens as u32);
    let mut weights = vec![0.0; states];
    for (state, weight) in weights.iter_mut().enumerate() {
        let mut assignment = Vec::with_capacity(tokens);
        let mut rest = state;
        for _ in 0..tokens {
            assignment.push(rest % num_topics);
            rest /= num_topics;
        }
        let mut n_dk = vec![vec![0usize; num_topics]; tokens];
        let mut n_kw = vec![vec![0usize; vocab_size]; num_topics];
        let mut n_k = vec![0usize; num_topics];
        let mut n_d = vec![0usize; tokens];
        let mut joint = 1.0;
        for (doc, (&word, &topic)) in doc_words.iter().zip(&assignment).enumerate() {
            joint *= (n_dk[doc][topic] as f64 + alpha)
                / (n_d[doc] as f64 + num_topics as f64 * alpha);
            joint *= (n_kw[topic][word] as f64 + beta)
                / (n_k[topic] as f64 + vocab_size as f64 * beta);
            n_dk[doc][topic] += 1;
            n_kw[topic][word] += 1;
            n_k[topic] += 1;
            n_d[doc] += 1;
        }
        *weight = joint;
    }
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).collect()
}

#[test]
fn criterion_04_gibbs_posterior_oracle() {
    // Two docs, one token each: doc 0 holds word 0, doc 1 holds word 1.
    let docs = vec![
        TokenizedDoc {
            description_id: 0,
            tokens: vec!["apple".into()],
        },
        TokenizedDoc {
            description_id: 1,
            tokens: vec!["brake".into()],
        },
    ];
    let vocab = build_vocabulary(&docs);
    let corpus: Vec<BowDoc> = docs
        .iter()
        .map(|d| to_bow(d.description_id, &d.tokens, &vocab))
        .collect();
    let word_ids = [vocab.id_of("apple").unwrap(), vocab.id_of("brake").unwrap()];

    let base = LdaConfig::new(2).with_iterations(200);
    let exact = enumerate_posterior(&word_ids, 2, 2, base.alpha, base.beta);

    const RUNS: usize = 2000;
    let mut counts = [0usize; 4];
    for run in 0..RUNS as u64 {
        let model = fit_lda::<f64>(&corpus, &vocab, &base.clone().with_seed(run)).unwrap();
        let state = model.assignments[0][0] + 2 * model.assignments[1][0];
        counts[state] += 1;
    }
    let tv: f64 = counts
        .iter()
        .zip(&exact)
        .map(|(&c, &p)| (c as f64 / RUNS as f64 - p).abs())
        .sum::<f64>()
        / 2.0;
    assert!(tv <= 0.05, "total variation {tv} exceeds 0.05 (exact {exact:?}, counts {counts:?})");
    pass(4, &format!("total variation {tv:.4} ≤ 0.05 over {RUNS} seeded runs"));
}

// ---------------------------------------------------------------------------
// 5. Planted topic separation
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_planted_topic_separation() {
    let start = Instant::now();
    let mut successes = 0;
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let side_a: Vec<String> = (0..5).map(|i| format!("left{i}")).collect();
        let side_b: Vec<String> = (0..5).map(|i| format!("right{i}")).collect();
        let docs: Vec<TokenizedDoc> = (0..20)
            .map(|d| {
                let side = if d < 10 { &side_a } else { &side_b };
                TokenizedDoc {
                    description_id: d,
                    tokens: (0..30).map(|_| side[rng.gen_range(0..5)].clone()).collect(),
                }
            })
            .collect();
        let vocab = build_vocabulary(&docs);
        let corpus: Vec<BowDoc> = docs
            .iter()
            .map(|d| to_bow(d.description_id, &d.tokens, &vocab))
            .collect();
        let config = LdaConfig::new(2).with_seed(seed);
        let model = fit_lda::<f64>(&corpus, &vocab, &config).unwrap();

        let dominants: Vec<usize> = (0..20)
            .map(|d| dominant_topic(&model.theta.row(d).to_vec()))
            .collect();
        let majority = |group: &[usize]| -> (usize, f64) {
            let ones = group.iter().filter(|&&t| t == 1).count();
            let zeros = group.len() - ones;
            if ones >= zeros {
                (1, ones as f64 / group.len() as f64)
            } else {
                (0, zeros as f64 / group.len() as f64)
            }
        };
        let (topic_a, agree_a) = majority(&dominants[..10]);
        let (topic_b, agree_b) = majority(&dominants[10..]);
        if topic_a != topic_b && agree_a >= 0.95 && agree_b >= 0.95 {
            successes += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(successes >= 9, "only {successes}/10 seeds separated");
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    pass(5, &format!("{successes}/10 seeds separated in {elapsed:?}"));
}

// ---------------------------------------------------------------------------
// 6. k-Means: Lloyd monotonicity and the planted-pair oracle
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_kmeans_monotone_and_planted_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..100u64 {
        let n = rng.gen_range(6..40);
        let dim = rng.gen_range(1..=4);
        let k = rng.gen_range(2..=5.min(n));
        let points = Array2::from_shape_fn((n, dim), |_| rng.gen_range(-10.0..10.0));
        let config = KmeansConfig {
            k,
            restarts: 2,
            seed: trial,
            ..KmeansConfig::new(k)
        };
        let (_, trace) = kmeans_fit_traced(&points, &config).unwrap();
        for pair in trace.windows(2) {
            assert!(
                pair[1] <= pair[0] + 1e-12,
                "inertia increased: {} -> {}",
                pair[0],
                pair[1]
            );
        }
    }

    // Planted pairs: exhaustive check over all 2-partitions of the 4 points
    // shows {0,1} | {2,3} is the unique inertia minimizer.
    let points =
        Array2::from_shape_vec((4, 2), vec![0.0, 0.0, 0.0, 0.1, 10.0, 10.0, 10.0, 10.1]).unwrap();
    let inertia_of = |mask: u32| -> f64 {
        let groups: [Vec<usize>; 2] = [
            (0..4).filter(|i| mask & (1 << i) == 0).collect(),
            (0..4).filter(|i| mask & (1 << i) != 0).collect(),
        ];
        groups
            .iter()
            .map(|members| {
                let m = members.len() as f64;
                let mean: Vec<f64> = (0..2)
                    .map(|d| members.iter().map(|&i| points[[i, d]]).sum::<f64>() / m)
                    .collect();
                members
                    .iter()
                    .map(|&i| {
                        (0..2)
                            .map(|d| (points[[i, d]] - mean[d]).powi(2))
                            .sum::<f64>()
                    })
                    .sum::<f64>()
            })
            .sum()
    };
    let mut best_mask = 0;
    let mut best = f64::INFINITY;
    let mut second = f64::INFINITY;
    for mask in 1..15u32 {
        // skip empty/full partitions (0 and 15)
        let inertia = inertia_of(mask);
        if inertia < best {
            second = best;
            best = inertia;
            best_mask = mask;
        } else if inertia < second && (mask != best_mask && mask != 15 - best_mask) {
            // complement masks describe the same partition
            second = inertia;
        }
    }
    assert!(best < second, "planted partition is not the unique minimizer");
    assert!(best_mask == 0b1100 || best_mask == 0b0011, "oracle found {best_mask:b}");

    let result = kmeans_fit(&points, &KmeansConfig::new(2).with_seed(0)).unwrap();
    assert_eq!(result.assignments[0], result.assignments[1]);
    assert_eq!(result.assignments[2], result.assignments[3]);
    assert_ne!(result.assignments[0], result.assignments[2]);
    pass(6, "inertia monotone on 100 instances; planted pairs recovered (exhaustive oracle)");
}

// ---------------------------------------------------------------------------
// 7. Silhouette vs brute force
// ---------------------------------------------------------------------------

/// Straight-from-the-formula silhouette, independent of the library path.
fn brute_force_silhouette(points: &Array2<f64>, labels: &[usize]) -> f64 {
    let n = points.nrows();
    let dist = |i: usize, j: usize| -> f64 {
        (0..points.ncols())
            .map(|d| (points[[i, d]] - points[[j, d]]).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let clusters: std::collections::BTreeSet<usize> = labels.iter().copied().collect();
    let mut total = 0.0;
    for i in 0..n {
        let own = labels[i];
        let own_size = labels.iter().filter(|&&l| l == own).count();
        if own_size == 1 {
            continue;
        }
        let a = (0..n)
            .filter(|&j| j != i && labels[j] == own)
            .map(|j| dist(i, j))
            .sum::<f64>()
            / (own_size - 1) as f64;
        let b = clusters
            .iter()
            .filter(|&&c| c != own)
            .map(|&c| {
                let size = labels.iter().filter(|&&l| l == c).count();
                (0..n)
                    .filter(|&j| labels[j] == c)
                    .map(|j| dist(i, j))
                    .sum::<f64>()
                    / size as f64
            })
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    total / n as f64
}

#[test]
fn criterion_07_silhouette_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.gen_range(4..=50);
        let dim = rng.gen_range(1..=4);
        let num_clusters = rng.gen_range(2..=4.min(n));
        let points = Array2::from_shape_fn((n, dim), |_| rng.gen_range(-5.0..5.0));
        // Ensure every cluster id is present.
        let labels: Vec<usize> = (0..n)
            .map(|i| {
                if i < num_clusters {
                    i
                } else {
                    rng.gen_range(0..num_clusters)
                }
            })
            .collect();
        let ours = silhouette_mean(&points, &labels).unwrap();
        let brute = brute_force_silhouette(&points, &labels);
        assert!(
            (ours - brute).abs() <= 1e-12,
            "silhouette {ours} vs brute force {brute}"
        );
    }

    let points: Array2<f64> =
        Array2::from_shape_vec((4, 1), vec![0.0, 0.1, 1.0, 1.1]).unwrap();
    let s = silhouette_mean(&points, &[0, 0, 1, 1]).unwrap();
    assert!((s - 0.899749).abs() < 1e-6, "hand-derived instance gave {s}");
    pass(7, "matches brute force within 1e-12 on 100 instances; 1-D instance ≈ 0.899749");
}

// ---------------------------------------------------------------------------
// 8. Silhouette-based k selection on planted Gaussians
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_select_k_planted_gaussians() {
    let start = Instant::now();
    let centers: [[f64; 4]; 3] = [
        [0.0, 0.0, 0.0, 0.0],
        [6.0, 0.0, 0.0, 0.0],
        [0.0, 6.0, 0.0, 0.0],
    ];
    let mut successes = 0;
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x8888);
        let normal = rand_distr::Normal::new(0.0f64, 0.05).unwrap();
        let mut points: Array2<f64> = Array2::zeros((60, 4));
        for (c, center) in centers.iter().enumerate() {
            for i in 0..20 {
                for d in 0..4 {
                    points[[c * 20 + i, d]] =
                        center[d] + rand_distr::Distribution::sample(&normal, &mut rng);
                }
            }
        }
        let base = KmeansConfig::new(2).with_seed(seed);
        let report = select_k(&points, 2, 10, &base).unwrap();
        if report.best_k == 3 {
            successes += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(successes >= 9, "best_k=3 for only {successes}/10 seeds");
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    pass(8, &format!("best_k=3 for {successes}/10 seeds over k=2..10 in {elapsed:?}"));
}

// ---------------------------------------------------------------------------
// 9. t-SNE affinities, optimization progress, and planted structure
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_tsne() {
    let start = Instant::now();

    // Symmetry and normalization of P; per-point conditional perplexity.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let points: Array2<f64> = Array2::from_shape_fn((40, 8), |_| rng.gen_range(-1.0..1.0));
    let target = 10.0f64;
    let p = joint_affinities(&points, target).unwrap();
    let mut sum = 0.0;
    for i in 0..40 {
        for j in 0..40 {
            assert!((p[[i, j]] - p[[j, i]]).abs() < 1e-15, "asymmetric P");
            assert!(p[[i, j]] >= 0.0);
            sum += p[[i, j]];
        }
    }
    assert!((sum - 1.0).abs() <= 1e-9, "P sums to {sum}");

    let conditional = conditional_affinities(&points, target).unwrap();
    for i in 0..40 {
        let entropy: f64 = (0..40)
            .map(|j| conditional[[i, j]])
            .filter(|&v| v > 0.0)
            .map(|v| -v * v.log2())
            .sum();
        let perplexity = 2f64.powf(entropy);
        assert!(
            (perplexity - target).abs() <= 1e-3,
            "row {i} perplexity {perplexity}"
        );
    }

    // KL keeps improving after the exaggeration phase.
    for seed in [1u64, 2, 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed * 31);
        let cloud: Array2<f64> = Array2::from_shape_fn((40, 6), |_| rng.gen_range(-2.0..2.0));
        let at_250 = tsne_embed(
            &cloud,
            &TsneConfig {
                perplexity: 10.0,
                iterations: 250,
                seed,
                ..TsneConfig::default()
            },
        )
        .unwrap();
        let at_end = tsne_embed(
            &cloud,
            &TsneConfig {
                perplexity: 10.0,
                iterations: 1000,
                seed,
                ..TsneConfig::default()
            },
        )
        .unwrap();
        assert!(
            at_end.final_kl < at_250.final_kl,
            "seed {seed}: KL {} !< {}",
            at_end.final_kl,
            at_250.final_kl
        );
        assert!(at_end.final_kl >= 0.0);
    }

    // Planted 3 clusters in 10-D embed with silhouette > 0.5 w.r.t. labels.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let normal = rand_distr::Normal::new(0.0f64, 0.05).unwrap();
    let centers = [5.0, -5.0, 12.0];
    let mut planted: Array2<f64> = Array2::zeros((90, 10));
    let mut labels = Vec::with_capacity(90);
    for (c, &center) in centers.iter().enumerate() {
        for i in 0..30 {
            for d in 0..10 {
                planted[[c * 30 + i, d]] =
                    center + rand_distr::Distribution::sample(&normal, &mut rng);
            }
            labels.push(c);
        }
    }
    let embedding = tsne_embed(
        &planted,
        &TsneConfig {
            perplexity: 20.0,
            iterations: 1000,
            seed: 0,
            ..TsneConfig::default()
        },
    )
    .unwrap();
    assert!(embedding.coordinates.iter().all(|v| v.is_finite()));
    let s = silhouette_mean(&embedding.coordinates, &labels).unwrap();
    assert!(s > 0.5, "embedding silhouette {s}");

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    pass(9, &format!("P valid, KL decreasing, planted silhouette {s:.3} in {elapsed:?}"));
}

// ---------------------------------------------------------------------------
// 10. End-to-end pipeline over the bundled fixture, via the binary
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_end_to_end_fixture() {
    let start = Instant::now();
    let input_dir = TempDir::new().unwrap();
    assert_success(&drmine(input_dir.path(), &["fixture", "--seed", "42"]));
    let input = input_dir.path().join("fixture_reports.csv");

    let out = TempDir::new().unwrap();
    assert_success(&drmine(out.path(), &["run", input.to_str().unwrap(), "--seed", "42"]));

    // Dedup count exactly 40.
    let unique: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("unique.json")).unwrap())
            .unwrap();
    let entries = unique["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 40, "dedup count");

    // Adjusted Rand index of recovered clusters vs planted themes ≥ 0.9.
    let truth: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(input_dir.path().join("fixture_ground_truth.json")).unwrap(),
    )
    .unwrap();
    let theme_of_text = truth["theme_of_text"].as_object().unwrap();
    let assignments = read_int_pairs(&out.path().join("assignments.csv"));
    let mut recovered = Vec::new();
    let mut planted = Vec::new();
    for entry in entries {
        let id = entry["description_id"].as_u64().unwrap() as usize;
        let text = entry["text"].as_str().unwrap();
        recovered.push(assignments[&id]);
        planted.push(theme_of_text[text].as_u64().unwrap() as usize);
    }
    let ari = adjusted_rand_index(&recovered, &planted);
    assert!(ari >= 0.9, "adjusted Rand index {ari}");

    // Merge-back counts sum to 600.
    let frequencies = read_int_pairs(&out.path().join("frequencies.csv"));
    let total: usize = frequencies.values().sum();
    assert_eq!(total, 600, "merge-back total");

    // Byte-identical artifacts across two runs.
    let out2 = TempDir::new().unwrap();
    assert_success(&drmine(out2.path(), &["run", input.to_str().unwrap(), "--seed", "42"]));
    assert_dirs_identical_except_manifest(out.path(), out2.path());

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    pass(
        10,
        &format!("dedup 40, ARI {ari:.3}, Σ=600, byte-identical reruns in {elapsed:?}"),
    );
}

// ---------------------------------------------------------------------------
// 11. Conservation under randomized inputs
// ---------------------------------------------------------------------------

#[test]
fn criterion_11_conservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pool = [
        "sensor glitch near the onramp",
        "prediction missed a cyclist",
        "motion plan overshot the lane",
        "hardware watchdog restarted",
        "driver takeover on the freeway",
        "map data was stale",
        "planning hesitation at a merge",
        "unclassified roadside event",
        "",
        "perception dropout in fog",
    ];
    for trial in 0..1000u64 {
        let record_count = rng.gen_range(1..=50);
        let records: Vec<ReportRecord> = (0..record_count)
            .map(|_| make_record(pool[rng.gen_range(0..pool.len())]))
            .collect();
        let table = extract_unique(&records);
        let assignments: BTreeMap<usize, usize> = table
            .entries
            .iter()
            .map(|e| (e.description_id, rng.gen_range(0..4)))
            .collect();

        let frequency = merge_back(&records, &table, &assignments).unwrap();
        assert_eq!(
            frequency.counts.iter().sum::<usize>(),
            records.len(),
            "trial {trial}: merge-back not conserved"
        );

        let cluster = *assignments.values().next().unwrap();
        let expected_cluster_total: usize = table
            .entries
            .iter()
            .filter(|e| assignments[&e.description_id] == cluster)
            .map(|e| e.occurrence_count)
            .sum();
        let patterns = ["sensor", "prediction", "plan", "map", "fog", "driver"];
        let categories: Vec<CategoryRule> = (0..rng.gen_range(1..=4))
            .map(|i| CategoryRule {
                name: format!("cat{i}"),
                patterns: vec![patterns[rng.gen_range(0..patterns.len())].to_string()],
            })
            .collect();
        let rules = CategoryRules {
            hybrid_enabled: rng.gen_bool(0.5),
            categories,
        };
        let drill = drill_down(cluster, &table, &assignments, &rules).unwrap();
        assert_eq!(
            drill.accounted(),
            expected_cluster_total,
            "trial {trial}: drill-down not conserved"
        );
        assert_eq!(drill.total, expected_cluster_total);
    }
    pass(11, "merge-back and drill-down conserved over 1000 randomized trials");
}

// ---------------------------------------------------------------------------
// 12. Documented optional reproduction with real data (not run in CI)
// ---------------------------------------------------------------------------

#[test]
fn criterion_12_real_data_reproduction() {
    let Some(dir) = std::env::var_os("DRMINE_CDMV_DIR") else {
        pass(
            12,
            "SKIPPED — set DRMINE_CDMV_DIR to a directory of 2023 report CSVs to run \
(expects 6,584 records, 21 manufacturers, 312 unique descriptions, largest cluster ≈54%)",
        );
        return;
    };
    let dir = std::path::PathBuf::from(dir);
    let mut inputs: Vec<String> = std::fs::read_dir(&dir)
        .expect("reading DRMINE_CDMV_DIR")
        .filter_map(|e| {
            let path = e.ok()?.path();
            (path.extension()? == "csv").then(|| path.to_string_lossy().into_owned())
        })
        .collect();
    inputs.sort();
    assert!(!inputs.is_empty(), "no CSV files in {}", dir.display());

    let out = TempDir::new().unwrap();
    let mut args = vec!["run"];
    args.extend(inputs.iter().map(String::as_str));
    assert_success(&drmine(out.path(), &args));

    let merged = std::fs::read_to_string(out.path().join("merged.csv")).unwrap();
    let mut record_count = 0usize;
    let mut manufacturers = std::collections::BTreeSet::new();
    for row in csv::Reader::from_reader(merged.as_bytes()).into_records() {
        let row = row.unwrap();
        manufacturers.insert(row.get(0).unwrap().trim().to_string());
        record_count += 1;
    }
    assert_eq!(record_count, 6584, "record count");
    assert_eq!(manufacturers.len(), 21, "manufacturer count");

    let unique: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("unique.json")).unwrap())
            .unwrap();
    assert_eq!(unique["entries"].as_array().unwrap().len(), 312, "unique descriptions");

    // The largest-cluster share and k selection depend on the backend and
    // seed; report them as reproduction targets rather than asserting.
    let frequencies = read_int_pairs(&out.path().join("frequencies.csv"));
    let largest = frequencies.values().copied().max().unwrap();
    let share = 100.0 * largest as f64 / 6584.0;
    pass(
        12,
        &format!(
            "real data: 6,584 records, 21 manufacturers, 312 unique; largest cluster {share:.1}% (target ≈54%)"
        ),
    );
}
