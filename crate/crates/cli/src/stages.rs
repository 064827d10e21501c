//! Pipeline stages behind the subcommands. Each stage reads prior artifacts
//! from the output directory and writes its own, so `run` and stage-by-stage
//! invocations produce identical bytes.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;

use drmine_core::cluster::{kmeans_fit, select_k, KmeansConfig};
use drmine_core::fixture;
use drmine_core::ingest::{
    extract_unique, load_reports, merge_datasets, LoadOutcome, SchemaMode,
};
use drmine_core::lda::{fit_lda, summarize_topics, LdaConfig};
use drmine_core::plot;
use drmine_core::report::{
    categorize_clusters, drill_down, heatmap_counts, merge_back, CategoryRules, ClusterFrequency,
};
use drmine_core::rng::{derive_seed, stream};
use drmine_core::textprep::{
    build_vocabulary, filter_vocabulary, to_bow, tokenize_corpus, StopwordSet,
};
use drmine_core::tsne::{tsne_embed, TsneConfig};

use crate::artifacts::{self, OutDir};

/// Options shared by all stages (the CLI's global flags).
#[derive(Debug, Clone)]
pub struct PipelineOpts {
    pub seed: u64,
    pub topics: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub alpha: Option<f64>,
    pub beta: f64,
    pub lda_iterations: usize,
    pub stopwords: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub json_siblings: bool,
    pub strict: bool,
    pub min_doc_count: usize,
    pub max_doc_fraction: f64,
    pub top_n: usize,
    pub weighted: bool,
    pub perplexity: Option<f64>,
    pub tsne_iterations: usize,
}

impl PipelineOpts {
    fn schema_mode(&self) -> SchemaMode {
        if self.strict {
            SchemaMode::Strict
        } else {
            SchemaMode::Lenient
        }
    }

    fn lda_config(&self) -> LdaConfig {
        let mut config = LdaConfig::new(self.topics)
            .with_beta(self.beta)
            .with_iterations(self.lda_iterations)
            .with_seed(derive_seed(self.seed, stream::LDA));
        if let Some(alpha) = self.alpha {
            config = config.with_alpha(alpha);
        }
        config
    }

    fn kmeans_base(&self) -> KmeansConfig {
        KmeansConfig::new(self.k_min).with_seed(derive_seed(self.seed, stream::KMEANS))
    }

    fn stopword_set(&self) -> Result<(StopwordSet, String)> {
        match &self.stopwords {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading stopword file {}", path.display()))?;
                Ok((StopwordSet::parse(&text), path.display().to_string()))
            }
            None => Ok((StopwordSet::default_english(), "builtin".to_string())),
        }
    }

    fn rules_from(&self, default_text: &str) -> Result<(CategoryRules, String)> {
        match &self.rules {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading rules file {}", path.display()))?;
                Ok((CategoryRules::parse(&text)?, path.display().to_string()))
            }
            None => Ok((CategoryRules::parse(default_text)?, "builtin".to_string())),
        }
    }

    /// Default perplexity clamped into the valid range for n points; an
    /// explicit flag value is used verbatim (and may fail validation).
    fn effective_perplexity(&self, n: usize) -> f64 {
        match self.perplexity {
            Some(p) => p,
            None => {
                let default = TsneConfig::default().perplexity;
                let limit = (n as f64 - 1.0) / 3.0 - 1e-3;
                if default > limit {
                    log::info!(
                        "perplexity {default} too large for {n} points; clamping to {limit:.3}"
                    );
                    limit
                } else {
                    default
                }
            }
        }
    }
}

fn report_load_issues(outcome: &LoadOutcome) {
    for warning in &outcome.warnings {
        log::warn!("{warning}");
    }
    for error in &outcome.row_errors {
        log::warn!("{}:{}: row skipped: {}", error.file, error.row, error.message);
    }
}

pub fn stage_merge(opts: &PipelineOpts, out: &mut OutDir, inputs: &[PathBuf]) -> Result<()> {
    if inputs.is_empty() {
        bail!("merge needs at least one input CSV file");
    }
    let mut batches = Vec::new();
    let mut warnings = 0;
    let mut row_errors = 0;
    for input in inputs {
        let outcome = load_reports(input, opts.schema_mode())?;
        report_load_issues(&outcome);
        warnings += outcome.warnings.len();
        row_errors += outcome.row_errors.len();
        batches.push(outcome.records);
    }
    let records = merge_datasets(batches);
    artifacts::write_records_csv(out, artifacts::MERGED_CSV, &records)?;
    let manufacturers: std::collections::BTreeSet<&str> =
        records.iter().map(|r| r.manufacturer.as_str()).collect();
    println!(
        "merged {} records from {} files ({} manufacturers, {} warnings, {} row errors)",
        records.len(),
        inputs.len(),
        manufacturers.len(),
        warnings,
        row_errors
    );
    Ok(())
}

pub fn stage_dedupe(opts: &PipelineOpts, out: &mut OutDir) -> Result<()> {
    let merged = out.path(artifacts::MERGED_CSV);
    let outcome = load_reports(&merged, opts.schema_mode())
        .with_context(|| "reading merged.csv (run `merge` first)")?;
    report_load_issues(&outcome);
    let table = extract_unique(&outcome.records);
    artifacts::write_unique(out, &table)?;
    println!(
        "deduplicated {} records into {} unique descriptions",
        outcome.records.len(),
        table.len()
    );
    Ok(())
}

pub fn stage_prep(
    opts: &PipelineOpts,
    out: &mut OutDir,
    dump_tokens: bool,
    dump_vocab: bool,
) -> Result<serde_json::Value> {
    let table = artifacts::read_unique(out)?;
    let (stopwords, stopwords_source) = opts.stopword_set()?;
    let docs = tokenize_corpus(
        table
            .entries
            .iter()
            .map(|e| (e.description_id, e.text.as_str())),
        &stopwords,
    );
    let vocab = build_vocabulary(&docs);
    let vocab = filter_vocabulary(&vocab, opts.min_doc_count, opts.max_doc_fraction)?;
    let corpus: Vec<_> = docs
        .iter()
        .map(|d| to_bow(d.description_id, &d.tokens, &vocab))
        .collect();

    out.write_json(artifacts::TOKENS_JSON, &docs)?;
    out.write_json(artifacts::VOCABULARY_JSON, &vocab)?;
    out.write_json(artifacts::CORPUS_JSON, &corpus)?;

    if dump_tokens {
        println!("{}", serde_json::to_string_pretty(&docs)?);
    }
    if dump_vocab {
        println!("{}", serde_json::to_string_pretty(&vocab)?);
    }
    println!(
        "tokenized {} descriptions; vocabulary {} words after df filter",
        docs.len(),
        vocab.len()
    );
    Ok(json!({
        "stopwords_source": stopwords_source,
        "min_doc_count": opts.min_doc_count,
        "max_doc_fraction": opts.max_doc_fraction,
    }))
}

pub fn stage_topics(opts: &PipelineOpts, out: &mut OutDir) -> Result<LdaConfig> {
    let vocab = artifacts::read_vocabulary(out)?;
    let corpus: Vec<drmine_core::textprep::BowDoc> = out.read_json(artifacts::CORPUS_JSON)?;
    let table = artifacts::read_unique(out)?;
    let config = opts.lda_config();
    let model = fit_lda::<f64>(&corpus, &vocab, &config)?;

    artifacts::write_model(out, &model)?;
    let mut summaries = Vec::with_capacity(table.entries.len());
    for entry in &table.entries {
        let summary = summarize_topics(&model, entry.description_id, 10)?;
        summaries.push((summary, entry.text.clone()));
    }
    artifacts::write_topic_summaries(out, &summaries, opts.json_siblings)?;
    println!(
        "fitted {} topics over {} documents ({} Gibbs sweeps)",
        config.num_topics,
        model.num_docs(),
        config.iterations
    );
    Ok(config)
}

pub fn stage_select_k(
    opts: &PipelineOpts,
    out: &mut OutDir,
) -> Result<drmine_core::SilhouetteReport> {
    let model = artifacts::read_model(out)?;
    let theta = model.theta_matrix()?;
    let base = opts.kmeans_base();
    let report = select_k(&theta, opts.k_min, opts.k_max, &base)
        .map_err(|e| anyhow!("silhouette sweep failed: {e}"))?;

    let rows: Vec<Vec<String>> = report
        .scores
        .iter()
        .map(|(k, s)| vec![k.to_string(), s.to_string()])
        .collect();
    out.write_csv(artifacts::SILHOUETTE_CSV, &["k", "mean_silhouette"], &rows)?;
    out.write_json(artifacts::SILHOUETTE_JSON, &report)?;
    let points: Vec<(f64, f64)> = report
        .scores
        .iter()
        .map(|&(k, s)| (k as f64, s))
        .collect();
    out.write_text(
        artifacts::SILHOUETTE_SVG,
        &plot::scatter(
            &points,
            None,
            "Mean silhouette by cluster count",
            "k",
            "mean silhouette",
        ),
    )?;
    println!("best k by mean silhouette: {}", report.best_k);
    Ok(report)
}

pub fn stage_cluster(opts: &PipelineOpts, out: &mut OutDir, k: Option<usize>) -> Result<usize> {
    let model = artifacts::read_model(out)?;
    let theta = model.theta_matrix()?;
    let k = match k {
        Some(k) => k,
        None => {
            let report: drmine_core::SilhouetteReport = out
                .read_json(artifacts::SILHOUETTE_JSON)
                .context("no --k given and no silhouette sweep found; run `select-k` or pass --k")?;
            report.best_k
        }
    };
    let base = opts.kmeans_base();
    let config = KmeansConfig {
        k,
        seed: derive_seed(base.seed, k as u64),
        ..base
    };
    let result = kmeans_fit(&theta, &config)?;
    let assignments: BTreeMap<usize, usize> = model
        .doc_ids
        .iter()
        .copied()
        .zip(result.assignments.iter().copied())
        .collect();
    artifacts::write_assignments(out, &assignments, opts.json_siblings)?;
    println!(
        "clustered {} documents into {} clusters (inertia {:.6}, {} iterations)",
        theta.nrows(),
        k,
        result.inertia,
        result.iterations_run
    );
    Ok(k)
}

pub fn stage_embed(opts: &PipelineOpts, out: &mut OutDir) -> Result<TsneConfig> {
    let model = artifacts::read_model(out)?;
    let theta = model.theta_matrix()?;
    let assignments = artifacts::read_assignments(out)?;
    let config = TsneConfig {
        perplexity: opts.effective_perplexity(theta.nrows()),
        iterations: opts.tsne_iterations,
        seed: derive_seed(opts.seed, stream::TSNE),
        ..TsneConfig::default()
    };
    let embedding = tsne_embed(&theta, &config)?;

    let mut rows = Vec::with_capacity(model.doc_ids.len());
    let mut points = Vec::with_capacity(model.doc_ids.len());
    let mut labels = Vec::with_capacity(model.doc_ids.len());
    for (row, &description_id) in model.doc_ids.iter().enumerate() {
        let cluster = *assignments
            .get(&description_id)
            .ok_or(drmine_core::Error::MissingAssignment(description_id))?;
        let (x, y) = (embedding.coordinates[[row, 0]], embedding.coordinates[[row, 1]]);
        rows.push(vec![
            description_id.to_string(),
            x.to_string(),
            y.to_string(),
            cluster.to_string(),
        ]);
        points.push((x, y));
        labels.push(cluster);
    }
    out.write_csv(
        artifacts::EMBEDDING_CSV,
        &["description_id", "x", "y", "cluster"],
        &rows,
    )?;
    if opts.json_siblings {
        #[derive(serde::Serialize)]
        struct Row {
            description_id: usize,
            x: f64,
            y: f64,
            cluster: usize,
        }
        let json_rows: Vec<Row> = model
            .doc_ids
            .iter()
            .enumerate()
            .map(|(row, &description_id)| Row {
                description_id,
                x: embedding.coordinates[[row, 0]],
                y: embedding.coordinates[[row, 1]],
                cluster: labels[row],
            })
            .collect();
        out.write_json("embedding.json", &json_rows)?;
    }
    out.write_text(
        artifacts::EMBEDDING_SVG,
        &plot::scatter(
            &points,
            Some(&labels),
            "2-D map of topic distributions",
            "x",
            "y",
        ),
    )?;
    println!(
        "embedded {} documents (final KL divergence {:.6})",
        points.len(),
        embedding.final_kl
    );
    Ok(config)
}

pub fn stage_report(opts: &PipelineOpts, out: &mut OutDir) -> Result<ClusterFrequency> {
    let merged = out.path(artifacts::MERGED_CSV);
    let outcome = load_reports(&merged, SchemaMode::Lenient)
        .with_context(|| "reading merged.csv (run `merge` first)")?;
    let table = artifacts::read_unique(out)?;
    let docs = artifacts::read_tokens(out)?;
    let assignments = artifacts::read_assignments(out)?;

    let weights: BTreeMap<usize, usize> = table
        .entries
        .iter()
        .map(|e| (e.description_id, e.occurrence_count))
        .collect();
    let heatmap = heatmap_counts(
        &docs,
        &assignments,
        opts.top_n,
        opts.weighted.then_some(&weights),
    )?;

    let mut header: Vec<String> = vec!["word".to_string()];
    header.extend((0..heatmap.num_clusters).map(|c| format!("cluster_{c}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = heatmap
        .words
        .iter()
        .zip(&heatmap.counts)
        .map(|(word, counts)| {
            let mut row = vec![word.clone()];
            row.extend(counts.iter().map(|c| c.to_string()));
            row
        })
        .collect();
    out.write_csv(artifacts::HEATMAP_CSV, &header_refs, &rows)?;
    out.write_text(
        artifacts::HEATMAP_SVG,
        &plot::heatmap(&heatmap.words, &heatmap.counts, "Most common words per cluster"),
    )?;
    if opts.json_siblings {
        out.write_json("heatmap.json", &heatmap)?;
    }

    let frequency = merge_back(&outcome.records, &table, &assignments)?;
    let rows: Vec<Vec<String>> = frequency
        .counts
        .iter()
        .enumerate()
        .map(|(c, n)| vec![c.to_string(), n.to_string()])
        .collect();
    out.write_csv(artifacts::FREQUENCIES_CSV, &["cluster", "count"], &rows)?;
    let labels: Vec<String> = (0..frequency.counts.len())
        .map(|c| format!("cluster {c}"))
        .collect();
    out.write_text(
        artifacts::FREQUENCIES_SVG,
        &plot::bar_chart(&labels, &frequency.counts, "Cluster frequency", "reports"),
    )?;
    if opts.json_siblings {
        out.write_json("frequencies.json", &frequency)?;
    }

    let (rules, _source) = opts.rules_from(drmine_core::report::DEFAULT_CLUSTER_RULES)?;
    let categories = categorize_clusters(&heatmap, &rules);
    let rows: Vec<Vec<String>> = categories
        .iter()
        .map(|(c, name)| vec![c.to_string(), name.clone()])
        .collect();
    out.write_csv(artifacts::CATEGORIES_CSV, &["cluster", "category"], &rows)?;
    if opts.json_siblings {
        out.write_json("categories.json", &categories)?;
    }

    for (cluster, name) in &categories {
        println!(
            "cluster {cluster}: {} reports, {name}",
            frequency.counts.get(*cluster).copied().unwrap_or(0)
        );
    }
    Ok(frequency)
}

pub fn stage_drill(
    opts: &PipelineOpts,
    out: &mut OutDir,
    cluster: usize,
    recluster: bool,
) -> Result<()> {
    let table = artifacts::read_unique(out)?;
    let assignments = artifacts::read_assignments(out)?;
    let (rules, _source) = opts.rules_from(drmine_core::report::DEFAULT_DRILL_RULES)?;
    let report = drill_down(cluster, &table, &assignments, &rules)?;

    let mut rows: Vec<Vec<String>> = Vec::new();
    for (name, count) in &report.category_counts {
        rows.push(vec!["category".into(), name.clone(), count.to_string()]);
    }
    for (names, count) in &report.hybrid_counts {
        rows.push(vec!["hybrid".into(), names.join(" + "), count.to_string()]);
    }
    rows.push(vec![
        "uncategorized".into(),
        "uncategorized".into(),
        report.uncategorized.to_string(),
    ]);
    out.write_csv(&artifacts::drill_csv(cluster), &["kind", "label", "count"], &rows)?;
    if opts.json_siblings {
        out.write_json(&format!("drill_cluster_{cluster}.json"), &report)?;
    }

    let hybrid_labels: Vec<String> = report
        .hybrid_counts
        .iter()
        .map(|(names, _)| names.join(" + "))
        .collect();
    let hybrid_values: Vec<usize> = report.hybrid_counts.iter().map(|(_, n)| *n).collect();
    out.write_text(
        &artifacts::drill_pie_svg(cluster),
        &plot::pie_chart(
            &hybrid_labels,
            &hybrid_values,
            &format!("Combined factors in cluster {cluster}"),
        ),
    )?;

    let mut bar_labels: Vec<String> =
        report.category_counts.iter().map(|(n, _)| n.clone()).collect();
    let mut bar_values: Vec<usize> =
        report.category_counts.iter().map(|(_, c)| *c).collect();
    bar_labels.push("hybrid".to_string());
    bar_values.push(hybrid_values.iter().sum());
    bar_labels.push("uncategorized".to_string());
    bar_values.push(report.uncategorized);
    out.write_text(
        &artifacts::drill_bar_svg(cluster),
        &plot::bar_chart(
            &bar_labels,
            &bar_values,
            &format!("Category frequency in cluster {cluster}"),
            "reports",
        ),
    )?;

    println!(
        "cluster {cluster}: {} reports ({} uncategorized, {} hybrid buckets)",
        report.total,
        report.uncategorized,
        report.hybrid_counts.len()
    );

    if recluster {
        recluster_subset(opts, out, cluster, &table, &assignments)?;
    }
    Ok(())
}

/// Re-run preprocessing, topic fitting, and silhouette-selected clustering on
/// just the drilled cluster's descriptions.
fn recluster_subset(
    opts: &PipelineOpts,
    out: &mut OutDir,
    cluster: usize,
    table: &drmine_core::ingest::UniqueDescriptionTable,
    assignments: &BTreeMap<usize, usize>,
) -> Result<()> {
    let subset: Vec<_> = table
        .entries
        .iter()
        .filter(|e| assignments.get(&e.description_id) == Some(&cluster))
        .collect();
    let n = subset.len();
    if n < 4 {
        bail!("cluster {cluster} has only {n} unique descriptions; too few to recluster");
    }
    let (stopwords, _) = opts.stopword_set()?;
    let docs = tokenize_corpus(
        subset.iter().map(|e| (e.description_id, e.text.as_str())),
        &stopwords,
    );
    let vocab = build_vocabulary(&docs);
    let vocab = filter_vocabulary(&vocab, opts.min_doc_count, opts.max_doc_fraction)?;
    let corpus: Vec<_> = docs
        .iter()
        .map(|d| to_bow(d.description_id, &d.tokens, &vocab))
        .collect();

    let mut lda_config = opts.lda_config();
    lda_config.seed = derive_seed(lda_config.seed, cluster as u64 + 1);
    let model = fit_lda::<f64>(&corpus, &vocab, &lda_config)?;

    let k_max = opts.k_max.min(n - 1);
    let k_min = opts.k_min.min(k_max);
    let base = KmeansConfig {
        seed: derive_seed(opts.kmeans_base().seed, cluster as u64 + 1),
        ..opts.kmeans_base()
    };
    let sweep = select_k(&model.theta, k_min, k_max, &base)?;
    let rows: Vec<Vec<String>> = sweep
        .scores
        .iter()
        .map(|(k, s)| vec![k.to_string(), s.to_string()])
        .collect();
    out.write_csv(
        &artifacts::drill_subsilhouette_csv(cluster),
        &["k", "mean_silhouette"],
        &rows,
    )?;

    let config = KmeansConfig {
        k: sweep.best_k,
        seed: derive_seed(base.seed, sweep.best_k as u64),
        ..base
    };
    let result = kmeans_fit(&model.theta, &config)?;
    let rows: Vec<Vec<String>> = model
        .doc_ids
        .iter()
        .zip(&result.assignments)
        .map(|(id, sub)| vec![id.to_string(), sub.to_string()])
        .collect();
    out.write_csv(
        &artifacts::drill_subassignments_csv(cluster),
        &["description_id", "subcluster"],
        &rows,
    )?;
    println!(
        "reclustered cluster {cluster}: {} descriptions into {} subclusters",
        n, sweep.best_k
    );
    Ok(())
}

pub fn stage_fixture(opts: &PipelineOpts, out: &mut OutDir) -> Result<()> {
    let fixture = fixture::generate(opts.seed);
    artifacts::write_records_csv(out, artifacts::FIXTURE_CSV, &fixture.records)?;
    out.write_json(
        artifacts::FIXTURE_TRUTH_JSON,
        &json!({
            "theme_of_text": fixture.theme_of_text,
            "theme_record_counts": fixture.theme_record_counts,
        }),
    )?;
    println!(
        "wrote synthetic corpus: {} records, {} planted themes",
        fixture.records.len(),
        fixture.theme_record_counts.len()
    );
    Ok(())
}

pub fn stage_run(opts: &PipelineOpts, out: &mut OutDir, inputs: &[PathBuf]) -> Result<()> {
    stage_merge(opts, out, inputs)?;
    stage_dedupe(opts, out)?;
    let prep_echo = stage_prep(opts, out, false, false)?;
    let lda_config = stage_topics(opts, out)?;
    let sweep = stage_select_k(opts, out)?;
    let k = stage_cluster(opts, out, None)?;
    let tsne_config = stage_embed(opts, out)?;
    let frequency = stage_report(opts, out)?;
    let largest = frequency
        .largest_cluster()
        .ok_or_else(|| anyhow!("no clusters to drill into"))?;
    stage_drill(opts, out, largest, false)?;

    let inputs_digests = inputs
        .iter()
        .map(|path| {
            Ok(artifacts::InputDigest {
                path: path.display().to_string(),
                sha256: artifacts::sha256_file(path)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let manifest = artifacts::RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        created_utc: chrono::Utc::now().to_rfc3339(),
        seed: opts.seed,
        format: if opts.json_siblings { "json" } else { "csv" }.to_string(),
        schema_mode: if opts.strict { "strict" } else { "lenient" }.to_string(),
        inputs: inputs_digests,
        stages: json!({
            "prep": prep_echo,
            "lda": lda_config,
            "select_k": {
                "k_min": opts.k_min,
                "k_max": opts.k_max,
                "kmeans_base": opts.kmeans_base(),
                "best_k": sweep.best_k,
            },
            "cluster": { "k": k },
            "tsne": tsne_config,
            "report": {
                "rules_source": opts.rules.as_ref().map(|p| p.display().to_string())
                    .unwrap_or_else(|| "builtin".to_string()),
                "top_n": opts.top_n,
                "weighted": opts.weighted,
            },
            "drill": { "cluster": largest },
        }),
        artifacts: out.written().to_vec(),
    };
    out.write_json(artifacts::MANIFEST_JSON, &manifest)?;
    println!("pipeline complete; manifest written");
    Ok(())
}
