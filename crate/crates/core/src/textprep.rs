//! Text preprocessing: tokenization, stopword filtering, vocabulary
//! construction, and bag-of-words conversion.
//!
//! The tokenizer splits on whitespace, strips surrounding punctuation, and
//! rejects any piece still containing a non-letter character. Pieces joined
//! by internal punctuation (`road/lane`, `Non-inclement`) are dropped whole
//! rather than split.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default English stopword list bundled with the crate (179 words).
pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// A set of lowercase stopwords.
#[derive(Debug, Clone, Default)]
pub struct StopwordSet {
    words: HashSet<String>,
}

impl StopwordSet {
    /// The bundled default list.
    pub fn default_english() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }

    /// Parse a stopword file: one word per line, `#` starts a comment,
    /// blank lines ignored. Words are lowercased.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|line| !line.is_empty() && !line.starts_with('#'))
            .map(|w| w.to_lowercase())
            .collect();
        Self { words }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// A tokenized description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedDoc {
    pub description_id: usize,
    pub tokens: Vec<String>,
}

/// Tokenize one text: split on whitespace, trim non-letter edges, drop pieces
/// containing any non-ASCII-letter character, lowercase, drop stopwords.
pub fn tokenize_normalize(text: &str, stopwords: &StopwordSet) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|piece| {
            let trimmed = piece.trim_matches(|c: char| !c.is_alphabetic());
            if trimmed.is_empty() || !trimmed.chars().all(|c| c.is_ascii_alphabetic()) {
                return None;
            }
            let word = trimmed.to_ascii_lowercase();
            if stopwords.contains(&word) {
                None
            } else {
                Some(word)
            }
        })
        .collect()
}

/// Tokenize a batch of (description_id, text) pairs, logging each distinct
/// rejected piece that contained a non-ASCII letter once.
pub fn tokenize_corpus<'a, I>(texts: I, stopwords: &StopwordSet) -> Vec<TokenizedDoc>
where
    I: IntoIterator<Item = (usize, &'a str)>,
{
    let mut rejected_non_ascii: BTreeSet<String> = BTreeSet::new();
    let docs = texts
        .into_iter()
        .map(|(description_id, text)| {
            for piece in text.split_whitespace() {
                let trimmed = piece.trim_matches(|c: char| !c.is_alphabetic());
                if !trimmed.is_empty()
                    && trimmed.chars().all(char::is_alphabetic)
                    && !trimmed.chars().all(|c| c.is_ascii_alphabetic())
                {
                    rejected_non_ascii.insert(trimmed.to_string());
                }
            }
            TokenizedDoc {
                description_id,
                tokens: tokenize_normalize(text, stopwords),
            }
        })
        .collect();
    for token in rejected_non_ascii {
        log::warn!("rejected token with non-ASCII letters: {token:?}");
    }
    docs
}

/// Word-to-id bijection with per-word document frequencies.
///
/// Ids are assigned in ascending lexicographic order of the word, so the
/// mapping is deterministic across runs and platforms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    words: Vec<String>,
    doc_freq: Vec<usize>,
    #[serde(skip)]
    index: HashMap<String, usize>,
    doc_count: usize,
}

impl Vocabulary {
    fn from_sorted(words: Vec<String>, doc_freq: Vec<usize>, doc_count: usize) -> Self {
        let index = words
            .iter()
            .enumerate()
            .map(|(id, w)| (w.clone(), id))
            .collect();
        Self {
            words,
            doc_freq,
            index,
            doc_count,
        }
    }

    /// Rebuild the word→id index after deserialization.
    pub fn rebuild_index(&mut self) {
        self.index = self
            .words
            .iter()
            .enumerate()
            .map(|(id, w)| (w.clone(), id))
            .collect();
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Total number of documents the vocabulary was built from.
    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn id_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: usize) -> &str {
        &self.words[id]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// Document frequency of a word id.
    pub fn doc_freq(&self, id: usize) -> usize {
        self.doc_freq[id]
    }
}

/// Collect a vocabulary over tokenized docs. Document frequency counts each
/// doc at most once per word.
pub fn build_vocabulary(docs: &[TokenizedDoc]) -> Vocabulary {
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in docs {
        let distinct: BTreeSet<&str> = doc.tokens.iter().map(String::as_str).collect();
        for word in distinct {
            *df.entry(word).or_insert(0) += 1;
        }
    }
    // BTreeMap iteration is already in lexicographic order.
    let (words, doc_freq): (Vec<String>, Vec<usize>) =
        df.into_iter().map(|(w, n)| (w.to_string(), n)).unzip();
    Vocabulary::from_sorted(words, doc_freq, docs.len())
}

/// Drop words with document frequency below `min_doc_count` or above
/// `⌊max_doc_fraction · D⌋`. Survivor ids are reassigned lexicographically.
pub fn filter_vocabulary(
    vocab: &Vocabulary,
    min_doc_count: usize,
    max_doc_fraction: f64,
) -> Result<Vocabulary> {
    if !(0.0..=1.0).contains(&max_doc_fraction) {
        return Err(Error::InvalidConfig(format!(
            "max_doc_fraction must be in [0, 1], got {max_doc_fraction}"
        )));
    }
    let max_df = (max_doc_fraction * vocab.doc_count as f64).floor() as usize;
    let (words, doc_freq): (Vec<String>, Vec<usize>) = vocab
        .words
        .iter()
        .zip(&vocab.doc_freq)
        .filter(|(_, &df)| df >= min_doc_count && df <= max_df)
        .map(|(w, &df)| (w.clone(), df))
        .unzip();
    Ok(Vocabulary::from_sorted(words, doc_freq, vocab.doc_count))
}

/// Sparse word counts for one document, sorted by word id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BowDoc {
    pub description_id: usize,
    /// (word_id, count) pairs with strictly increasing word_id and count ≥ 1.
    pub counts: Vec<(usize, usize)>,
}

impl BowDoc {
    pub fn token_count(&self) -> usize {
        self.counts.iter().map(|&(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Count in-vocabulary tokens; out-of-vocabulary tokens are dropped.
pub fn to_bow(description_id: usize, tokens: &[String], vocab: &Vocabulary) -> BowDoc {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for token in tokens {
        if let Some(id) = vocab.id_of(token) {
            *counts.entry(id).or_insert(0) += 1;
        }
    }
    BowDoc {
        description_id,
        counts: counts.into_iter().collect(),
    }
}
