//! Latent Dirichlet allocation fitted by collapsed Gibbs sampling.
//!
//! The sampler runs a fixed number of full sweeps with a deterministic RNG;
//! point estimates come from the final sweep's counts with Dirichlet
//! smoothing, so identical inputs and seeds produce bitwise-identical models.

use ndarray::Array2;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::rng::seeded_rng;
use crate::textprep::{BowDoc, Vocabulary};

/// Sampler configuration. `alpha` defaults to `1/num_topics` when not set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub num_topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl LdaConfig {
    pub fn new(num_topics: usize) -> Self {
        Self {
            num_topics,
            alpha: 1.0 / num_topics as f64,
            beta: 0.01,
            iterations: 1000,
            seed: 0,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.num_topics < 1 {
            return Err(Error::InvalidConfig("num_topics must be ≥ 1".into()));
        }
        if !(self.alpha > 0.0) || !(self.beta > 0.0) {
            return Err(Error::InvalidConfig("alpha and beta must be > 0".into()));
        }
        if self.iterations < 1 {
            return Err(Error::InvalidConfig("iterations must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// Fitted model: row-stochastic doc-topic matrix `theta` (D×K) and
/// topic-word matrix `phi` (K×V).
#[derive(Debug, Clone)]
pub struct LdaModel<S: Scalar> {
    pub theta: Array2<S>,
    pub phi: Array2<S>,
    pub config: LdaConfig,
    pub vocab: Vocabulary,
    /// description_id of each theta row, in corpus order.
    pub doc_ids: Vec<usize>,
    /// Final-sweep token-topic assignments, one entry per token in corpus
    /// expansion order.
    pub assignments: Vec<Vec<usize>>,
}

impl<S: Scalar> LdaModel<S> {
    pub fn num_topics(&self) -> usize {
        self.config.num_topics
    }

    pub fn num_docs(&self) -> usize {
        self.theta.nrows()
    }

    fn row_of(&self, description_id: usize) -> Result<usize> {
        self.doc_ids
            .iter()
            .position(|&id| id == description_id)
            .ok_or(Error::DescriptionIdOutOfRange(description_id))
    }
}

/// Expand a bag-of-words doc into its token list (word ids ascending, each
/// repeated by its count). This order defines the sweep's token positions.
fn expand_tokens(doc: &BowDoc) -> Vec<usize> {
    let mut tokens = Vec::with_capacity(doc.token_count());
    for &(word_id, count) in &doc.counts {
        tokens.extend(std::iter::repeat(word_id).take(count));
    }
    tokens
}

/// Fit LDA on a bag-of-words corpus with collapsed Gibbs sampling.
///
/// Sweep order is doc index then token position; each token is resampled from
/// the collapsed conditional `(n_dk + α)·(n_kw + β)/(n_k + Vβ)` with its own
/// assignment excluded.
pub fn fit_lda<S: Scalar>(
    corpus: &[BowDoc],
    vocab: &Vocabulary,
    config: &LdaConfig,
) -> Result<LdaModel<S>> {
    config.validate()?;
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let num_docs = corpus.len();
    let num_topics = config.num_topics;
    let vocab_size = vocab.len();

    let tokens: Vec<Vec<usize>> = corpus.iter().map(expand_tokens).collect();
    if tokens.iter().all(Vec::is_empty) {
        return Err(Error::EmptyCorpus);
    }

    let alpha = S::from_f64_lossy(config.alpha);
    let beta = S::from_f64_lossy(config.beta);
    let v_beta = S::from_usize(vocab_size).unwrap() * beta;

    let mut n_dk = vec![0usize; num_docs * num_topics];
    let mut n_kw = vec![0usize; num_topics * vocab_size];
    let mut n_k = vec![0usize; num_topics];
    let mut z: Vec<Vec<usize>> = tokens.iter().map(|t| vec![0; t.len()]).collect();

    let mut rng = seeded_rng(config.seed);

    // Uniform random initial assignments.
    for (d, doc_tokens) in tokens.iter().enumerate() {
        for (i, &w) in doc_tokens.iter().enumerate() {
            let topic = rng.gen_range(0..num_topics);
            z[d][i] = topic;
            n_dk[d * num_topics + topic] += 1;
            n_kw[topic * vocab_size + w] += 1;
            n_k[topic] += 1;
        }
    }

    let mut weights: Vec<S> = vec![S::zero(); num_topics];
    for _sweep in 0..config.iterations {
        for (d, doc_tokens) in tokens.iter().enumerate() {
            for (i, &w) in doc_tokens.iter().enumerate() {
                let old = z[d][i];
                n_dk[d * num_topics + old] -= 1;
                n_kw[old * vocab_size + w] -= 1;
                n_k[old] -= 1;

                let mut total = S::zero();
                for (topic, weight) in weights.iter_mut().enumerate() {
                    let doc_part = S::from_usize(n_dk[d * num_topics + topic]).unwrap() + alpha;
                    let word_part = (S::from_usize(n_kw[topic * vocab_size + w]).unwrap() + beta)
                        / (S::from_usize(n_k[topic]).unwrap() + v_beta);
                    let value = doc_part * word_part;
                    *weight = value;
                    total += value;
                }

                let mut target = S::from_f64_lossy(rng.gen::<f64>()) * total;
                let mut new = num_topics - 1;
                for (topic, &weight) in weights.iter().enumerate() {
                    if target < weight {
                        new = topic;
                        break;
                    }
                    target -= weight;
                }

                z[d][i] = new;
                n_dk[d * num_topics + new] += 1;
                n_kw[new * vocab_size + w] += 1;
                n_k[new] += 1;
            }
        }
    }

    // Point estimates with Dirichlet smoothing from the final sweep's counts.
    let k_alpha = S::from_usize(num_topics).unwrap() * alpha;
    let mut theta = Array2::zeros((num_docs, num_topics));
    for d in 0..num_docs {
        let n_d = S::from_usize(tokens[d].len()).unwrap();
        for topic in 0..num_topics {
            theta[[d, topic]] =
                (S::from_usize(n_dk[d * num_topics + topic]).unwrap() + alpha) / (n_d + k_alpha);
        }
    }
    let mut phi = Array2::zeros((num_topics, vocab_size));
    for topic in 0..num_topics {
        let denom = S::from_usize(n_k[topic]).unwrap() + v_beta;
        for w in 0..vocab_size {
            phi[[topic, w]] =
                (S::from_usize(n_kw[topic * vocab_size + w]).unwrap() + beta) / denom;
        }
    }

    Ok(LdaModel {
        theta,
        phi,
        config: config.clone(),
        vocab: vocab.clone(),
        doc_ids: corpus.iter().map(|doc| doc.description_id).collect(),
        assignments: z,
    })
}

/// The clustering input: one row of topic proportions per document.
pub fn doc_topic_matrix<S: Scalar>(model: &LdaModel<S>) -> &Array2<S> {
    &model.theta
}

/// Argmax with ties resolved to the lowest index.
pub fn dominant_topic<S: Scalar>(theta_row: &[S]) -> usize {
    let mut best = 0;
    for (idx, &value) in theta_row.iter().enumerate().skip(1) {
        if value > theta_row[best] {
            best = idx;
        }
    }
    best
}

/// Render a probability as a percentage with two decimals, rounding half up.
pub fn format_percent<S: Scalar>(value: S) -> String {
    let hundredths = (value.to_f64().unwrap() * 10_000.0 + 0.5).floor() as i64;
    format!("{}.{:02}%", hundredths / 100, hundredths.rem_euclid(100))
}

/// Top-`top_n` words of a topic-word row, ties broken lexicographically.
pub fn top_keywords<S: Scalar>(phi_row: &[S], vocab: &Vocabulary, top_n: usize) -> Vec<String> {
    let mut ranked: Vec<(usize, S)> = phi_row.iter().copied().enumerate().collect();
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .expect("phi entries are finite")
            .then_with(|| vocab.word(a.0).cmp(vocab.word(b.0)))
    });
    ranked
        .into_iter()
        .take(top_n)
        .map(|(id, _)| vocab.word(id).to_string())
        .collect()
}

/// Dominant topic, percentage contribution, and topic keywords for one
/// description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicSummary {
    pub description_id: usize,
    pub dominant_topic: usize,
    pub percent_contribution: String,
    pub keywords: Vec<String>,
}

/// Summarize one document's dominant topic.
pub fn summarize_topics<S: Scalar>(
    model: &LdaModel<S>,
    description_id: usize,
    top_n: usize,
) -> Result<TopicSummary> {
    let row = model.row_of(description_id)?;
    let theta_row: Vec<S> = model.theta.row(row).to_vec();
    let dominant = dominant_topic(&theta_row);
    let phi_row: Vec<S> = model.phi.row(dominant).to_vec();
    Ok(TopicSummary {
        description_id,
        dominant_topic: dominant,
        percent_contribution: format_percent(theta_row[dominant]),
        keywords: top_keywords(&phi_row, &model.vocab, top_n),
    })
}
