//! Analysis artifacts over a finished clustering: cluster/word heatmap,
//! merged-back cluster frequencies, rule-based cluster labels, and
//! single-cluster drill-down with hybrid combinations.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{ReportRecord, UniqueDescriptionTable};
use crate::textprep::TokenizedDoc;

/// Default labeling rules for whole clusters (matched against heatmap words).
pub const DEFAULT_CLUSTER_RULES: &str = include_str!("../data/cluster-categories.toml");
/// Default rules for drill-down inside one cluster (matched against raw
/// description text).
pub const DEFAULT_DRILL_RULES: &str = include_str!("../data/drill-categories.toml");

/// Token-occurrence counts of the globally most frequent words, per cluster.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterWordHeatmap {
    /// Rows, ordered by descending total frequency (ties lexicographic).
    pub words: Vec<String>,
    /// `counts[row][cluster]`, same row order as `words`.
    pub counts: Vec<Vec<usize>>,
    pub num_clusters: usize,
}

impl ClusterWordHeatmap {
    /// Up to `n` words with a nonzero count in `cluster`, ranked by that
    /// cluster's counts (ties lexicographic).
    pub fn top_words_of_cluster(&self, cluster: usize, n: usize) -> Vec<&str> {
        let mut ranked: Vec<(usize, &str)> = self
            .words
            .iter()
            .enumerate()
            .filter(|&(row, _)| self.counts[row][cluster] > 0)
            .map(|(row, word)| (self.counts[row][cluster], word.as_str()))
            .collect();
        ranked.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
        ranked.into_iter().take(n).map(|(_, w)| w).collect()
    }
}

/// Count token occurrences of the `top_n` globally most frequent words,
/// split by the cluster of each unique description. `weights` switches from
/// per-description to report-weighted counting.
pub fn heatmap_counts(
    tokenized_docs: &[TokenizedDoc],
    assignments: &BTreeMap<usize, usize>,
    top_n: usize,
    weights: Option<&BTreeMap<usize, usize>>,
) -> Result<ClusterWordHeatmap> {
    let mut num_clusters = 0;
    for doc in tokenized_docs {
        let cluster = *assignments
            .get(&doc.description_id)
            .ok_or(Error::MissingAssignment(doc.description_id))?;
        num_clusters = num_clusters.max(cluster + 1);
    }

    // Total and per-cluster counts in one pass.
    let mut totals: BTreeMap<&str, usize> = BTreeMap::new();
    let mut per_cluster: HashMap<(&str, usize), usize> = HashMap::new();
    for doc in tokenized_docs {
        let cluster = assignments[&doc.description_id];
        let weight = weights
            .map(|w| w.get(&doc.description_id).copied().unwrap_or(1))
            .unwrap_or(1);
        for token in &doc.tokens {
            *totals.entry(token).or_insert(0) += weight;
            *per_cluster.entry((token, cluster)).or_insert(0) += weight;
        }
    }

    let mut ranked: Vec<(&str, usize)> = totals.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(top_n);

    let words: Vec<String> = ranked.iter().map(|(w, _)| (*w).to_string()).collect();
    let counts = ranked
        .iter()
        .map(|(word, _)| {
            (0..num_clusters)
                .map(|c| per_cluster.get(&(*word, c)).copied().unwrap_or(0))
                .collect()
        })
        .collect();

    Ok(ClusterWordHeatmap {
        words,
        counts,
        num_clusters,
    })
}

/// Per-cluster report counts after merging cluster labels back onto the full
/// record set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterFrequency {
    /// Count per cluster id.
    pub counts: Vec<usize>,
    pub total: usize,
}

impl ClusterFrequency {
    /// Cluster with the highest count (ties to the lowest id).
    pub fn largest_cluster(&self) -> Option<usize> {
        self.counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(&a.0)))
            .map(|(id, _)| id)
    }
}

/// Give each record the cluster of its deduplicated description and count
/// records per cluster.
pub fn merge_back(
    records: &[ReportRecord],
    unique_table: &UniqueDescriptionTable,
    assignments: &BTreeMap<usize, usize>,
) -> Result<ClusterFrequency> {
    let key_index = unique_table.key_index();
    let num_clusters = assignments.values().map(|&c| c + 1).max().unwrap_or(0);
    let mut counts = vec![0usize; num_clusters];
    for record in records {
        let description_id = *key_index.get(record.description.trim()).ok_or_else(|| {
            Error::UnknownDescription {
                file: record.source_file.clone(),
                row: record.source_row,
            }
        })?;
        let cluster = *assignments
            .get(&description_id)
            .ok_or(Error::MissingAssignment(description_id))?;
        counts[cluster] += 1;
    }
    Ok(ClusterFrequency {
        counts,
        total: records.len(),
    })
}

/// One labeling rule: a category name plus case-insensitive substring
/// patterns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryRule {
    pub name: String,
    pub patterns: Vec<String>,
}

impl CategoryRule {
    fn matches(&self, lowercase_haystack: &str) -> bool {
        self.patterns
            .iter()
            .any(|p| lowercase_haystack.contains(&p.to_lowercase()))
    }
}

/// Ordered category rules. First match wins for whole-cluster labels; for
/// drill-down, multiple matches form a hybrid bucket when enabled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryRules {
    #[serde(default = "default_hybrid", rename = "hybrid_enabled")]
    pub hybrid_enabled: bool,
    #[serde(rename = "category")]
    pub categories: Vec<CategoryRule>,
}

fn default_hybrid() -> bool {
    true
}

impl CategoryRules {
    /// Parse rules from TOML text.
    pub fn parse(text: &str) -> Result<Self> {
        let rules: CategoryRules =
            toml::from_str(text).map_err(|e| Error::Rules(e.to_string()))?;
        rules.validate()?;
        Ok(rules)
    }

    /// The bundled whole-cluster labeling rules.
    pub fn default_cluster_rules() -> Self {
        Self::parse(DEFAULT_CLUSTER_RULES).expect("bundled cluster rules parse")
    }

    /// The bundled drill-down rules.
    pub fn default_drill_rules() -> Self {
        Self::parse(DEFAULT_DRILL_RULES).expect("bundled drill rules parse")
    }

    /// Empty rule set: everything becomes uncategorized.
    pub fn empty() -> Self {
        Self {
            hybrid_enabled: true,
            categories: Vec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for rule in &self.categories {
            if !seen.insert(&rule.name) {
                return Err(Error::Rules(format!("duplicate category '{}'", rule.name)));
            }
            if rule.patterns.is_empty() {
                return Err(Error::Rules(format!(
                    "category '{}' has no patterns",
                    rule.name
                )));
            }
        }
        Ok(())
    }
}

/// Name for clusters no rule matched.
pub const UNCATEGORIZED: &str = "uncategorized";

/// Label each cluster with the first rule whose patterns match any of the
/// cluster's top-10 heatmap words.
pub fn categorize_clusters(
    heatmap: &ClusterWordHeatmap,
    rules: &CategoryRules,
) -> BTreeMap<usize, String> {
    (0..heatmap.num_clusters)
        .map(|cluster| {
            let top_words: Vec<String> = heatmap
                .top_words_of_cluster(cluster, 10)
                .iter()
                .map(|w| w.to_lowercase())
                .collect();
            let label = rules
                .categories
                .iter()
                .find(|rule| top_words.iter().any(|w| rule.matches(w)))
                .map(|rule| rule.name.clone())
                .unwrap_or_else(|| UNCATEGORIZED.to_string());
            (cluster, label)
        })
        .collect()
}

/// Drill-down counts for one cluster, weighted by occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrillReport {
    pub cluster_id: usize,
    /// Per-category counts in rule order (zero counts included).
    pub category_counts: Vec<(String, usize)>,
    /// Hybrid buckets keyed by the sorted set of matched category names.
    pub hybrid_counts: Vec<(Vec<String>, usize)>,
    pub uncategorized: usize,
    pub total: usize,
}

/// Categorize every unique description of `cluster_id` against the rules.
/// Descriptions matching one rule count toward that category; two or more
/// matches form a hybrid bucket (when enabled, otherwise the first rule in
/// file order wins); no match counts as uncategorized. All counts are
/// weighted by `occurrence_count`.
pub fn drill_down(
    cluster_id: usize,
    unique_table: &UniqueDescriptionTable,
    assignments: &BTreeMap<usize, usize>,
    rules: &CategoryRules,
) -> Result<DrillReport> {
    if !assignments.values().any(|&c| c == cluster_id) {
        return Err(Error::UnknownCluster(cluster_id));
    }

    let mut category_counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut hybrid: BTreeMap<Vec<String>, usize> = BTreeMap::new();
    let mut uncategorized = 0usize;
    let mut total = 0usize;

    for entry in &unique_table.entries {
        let cluster = *assignments
            .get(&entry.description_id)
            .ok_or(Error::MissingAssignment(entry.description_id))?;
        if cluster != cluster_id {
            continue;
        }
        total += entry.occurrence_count;
        let haystack = entry.text.to_lowercase();
        let matched: Vec<&CategoryRule> = rules
            .categories
            .iter()
            .filter(|rule| rule.matches(&haystack))
            .collect();
        match matched.len() {
            0 => uncategorized += entry.occurrence_count,
            1 => {
                *category_counts.entry(matched[0].name.as_str()).or_insert(0) +=
                    entry.occurrence_count
            }
            _ if rules.hybrid_enabled => {
                let mut names: Vec<String> =
                    matched.iter().map(|rule| rule.name.clone()).collect();
                names.sort();
                *hybrid.entry(names).or_insert(0) += entry.occurrence_count;
            }
            _ => {
                *category_counts.entry(matched[0].name.as_str()).or_insert(0) +=
                    entry.occurrence_count
            }
        }
    }

    Ok(DrillReport {
        cluster_id,
        category_counts: rules
            .categories
            .iter()
            .map(|rule| {
                (
                    rule.name.clone(),
                    category_counts.get(rule.name.as_str()).copied().unwrap_or(0),
                )
            })
            .collect(),
        hybrid_counts: hybrid.into_iter().collect(),
        uncategorized,
        total,
    })
}

impl DrillReport {
    /// Conservation check: categories + hybrids + uncategorized.
    pub fn accounted(&self) -> usize {
        let categories: usize = self.category_counts.iter().map(|(_, n)| n).sum();
        let hybrids: usize = self.hybrid_counts.iter().map(|(_, n)| n).sum();
        categories + hybrids + self.uncategorized
    }
}
