//! Artifact files exchanged between pipeline stages.
//!
//! Every stage reads its inputs from and writes its outputs to the `--out`
//! directory, so stages compose: running them one at a time produces the same
//! bytes as `run`. CSV files are the canonical interchange; `--format json`
//! adds JSON siblings of the tabular reports.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use drmine_core::ingest::{ReportRecord, UniqueDescriptionTable, CANONICAL_HEADER};
use drmine_core::lda::{LdaConfig, TopicSummary};
use drmine_core::textprep::{TokenizedDoc, Vocabulary};

pub const MERGED_CSV: &str = "merged.csv";
pub const UNIQUE_CSV: &str = "unique.csv";
pub const UNIQUE_JSON: &str = "unique.json";
pub const TOKENS_JSON: &str = "tokens.json";
pub const VOCABULARY_JSON: &str = "vocabulary.json";
pub const CORPUS_JSON: &str = "corpus.json";
pub const LDA_MODEL_JSON: &str = "lda_model.json";
pub const TOPIC_SUMMARY_CSV: &str = "topic_summary.csv";
pub const SILHOUETTE_CSV: &str = "silhouette.csv";
pub const SILHOUETTE_JSON: &str = "silhouette.json";
pub const SILHOUETTE_SVG: &str = "silhouette.svg";
pub const ASSIGNMENTS_CSV: &str = "assignments.csv";
pub const EMBEDDING_CSV: &str = "embedding.csv";
pub const EMBEDDING_SVG: &str = "embedding.svg";
pub const HEATMAP_CSV: &str = "heatmap.csv";
pub const HEATMAP_SVG: &str = "heatmap.svg";
pub const FREQUENCIES_CSV: &str = "frequencies.csv";
pub const FREQUENCIES_SVG: &str = "frequencies.svg";
pub const CATEGORIES_CSV: &str = "categories.csv";
pub const MANIFEST_JSON: &str = "manifest.json";
pub const FIXTURE_CSV: &str = "fixture_reports.csv";
pub const FIXTURE_TRUTH_JSON: &str = "fixture_ground_truth.json";

pub fn drill_csv(cluster: usize) -> String {
    format!("drill_cluster_{cluster}.csv")
}

pub fn drill_pie_svg(cluster: usize) -> String {
    format!("drill_hybrid_{cluster}.svg")
}

pub fn drill_bar_svg(cluster: usize) -> String {
    format!("drill_categories_{cluster}.svg")
}

pub fn drill_subassignments_csv(cluster: usize) -> String {
    format!("drill_subassignments_{cluster}.csv")
}

pub fn drill_subsilhouette_csv(cluster: usize) -> String {
    format!("drill_subsilhouette_{cluster}.csv")
}

/// Tracks files written under the output directory.
pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)
            .with_context(|| format!("creating output directory {}", root.display()))?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.path(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(name.to_string());
        log::info!("wrote {}", path.display());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_text(name, &text)
    }

    pub fn read_json<T: DeserializeOwned>(&self, name: &str) -> Result<T> {
        let path = self.path(name);
        let text = fs::read_to_string(&path).with_context(|| {
            format!(
                "reading {} (run the stage that produces it first)",
                path.display()
            )
        })?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Write a CSV file from a header plus string rows.
    pub fn write_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        for row in rows {
            writer.write_record(row)?;
        }
        let bytes = writer.into_inner().context("flushing csv")?;
        self.write_text(name, std::str::from_utf8(&bytes)?)
    }
}

/// Write records as a canonical nine-column CSV.
pub fn write_records_csv(out: &mut OutDir, name: &str, records: &[ReportRecord]) -> Result<()> {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| r.canonical_fields().to_vec())
        .collect();
    out.write_csv(name, &CANONICAL_HEADER, &rows)
}

/// Write the unique-description table as CSV and JSON
/// (`description_id`, `text`, `occurrence_count`, `source_rows`).
pub fn write_unique(out: &mut OutDir, table: &UniqueDescriptionTable) -> Result<()> {
    let rows: Vec<Vec<String>> = table
        .entries
        .iter()
        .map(|e| {
            vec![
                e.description_id.to_string(),
                e.text.clone(),
                e.occurrence_count.to_string(),
                e.source_rows
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
            ]
        })
        .collect();
    out.write_csv(
        UNIQUE_CSV,
        &["description_id", "text", "occurrence_count", "source_rows"],
        &rows,
    )?;
    out.write_json(UNIQUE_JSON, table)
}

pub fn read_unique(out: &OutDir) -> Result<UniqueDescriptionTable> {
    out.read_json(UNIQUE_JSON)
}

pub fn read_tokens(out: &OutDir) -> Result<Vec<TokenizedDoc>> {
    out.read_json(TOKENS_JSON)
}

pub fn read_vocabulary(out: &OutDir) -> Result<Vocabulary> {
    let mut vocab: Vocabulary = out.read_json(VOCABULARY_JSON)?;
    vocab.rebuild_index();
    Ok(vocab)
}

/// Serialized LDA model: configuration echo, vocabulary hash, and the two
/// estimated matrices.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModelDump {
    pub config: LdaConfig,
    pub vocabulary_hash: String,
    pub vocabulary: Vec<String>,
    pub doc_ids: Vec<usize>,
    pub theta: Vec<Vec<f64>>,
    pub phi: Vec<Vec<f64>>,
}

pub fn vocabulary_hash(vocab: &Vocabulary) -> String {
    let json = serde_json::to_string(vocab.words()).expect("vocab serializes");
    hex::encode(Sha256::digest(json.as_bytes()))
}

pub fn write_model(out: &mut OutDir, model: &drmine_core::LdaModel) -> Result<()> {
    let dump = ModelDump {
        config: model.config.clone(),
        vocabulary_hash: vocabulary_hash(&model.vocab),
        vocabulary: model.vocab.words().to_vec(),
        doc_ids: model.doc_ids.clone(),
        theta: model
            .theta
            .rows()
            .into_iter()
            .map(|r| r.to_vec())
            .collect(),
        phi: model.phi.rows().into_iter().map(|r| r.to_vec()).collect(),
    };
    out.write_json(LDA_MODEL_JSON, &dump)
}

pub fn read_model(out: &OutDir) -> Result<ModelDump> {
    out.read_json(LDA_MODEL_JSON)
}

impl ModelDump {
    /// The doc-topic matrix as clustering/embedding input.
    pub fn theta_matrix(&self) -> Result<drmine_core::Matrix> {
        let rows = self.theta.len();
        let cols = self.theta.first().map(Vec::len).unwrap_or(0);
        let flat: Vec<f64> = self.theta.iter().flatten().copied().collect();
        drmine_core::Matrix::from_shape_vec((rows, cols), flat)
            .context("theta matrix shape mismatch in model file")
    }
}

pub fn write_topic_summaries(
    out: &mut OutDir,
    summaries: &[(TopicSummary, String)],
    json_sibling: bool,
) -> Result<()> {
    let rows: Vec<Vec<String>> = summaries
        .iter()
        .map(|(s, text)| {
            vec![
                s.description_id.to_string(),
                text.clone(),
                s.dominant_topic.to_string(),
                s.percent_contribution.clone(),
                s.keywords.join(", "),
            ]
        })
        .collect();
    out.write_csv(
        TOPIC_SUMMARY_CSV,
        &[
            "description_id",
            "text",
            "dominant_topic",
            "percent_contribution",
            "topic_keywords",
        ],
        &rows,
    )?;
    if json_sibling {
        #[derive(Serialize)]
        struct Row<'a> {
            description_id: usize,
            text: &'a str,
            dominant_topic: usize,
            percent_contribution: &'a str,
            topic_keywords: &'a [String],
        }
        let json_rows: Vec<Row<'_>> = summaries
            .iter()
            .map(|(s, text)| Row {
                description_id: s.description_id,
                text,
                dominant_topic: s.dominant_topic,
                percent_contribution: &s.percent_contribution,
                topic_keywords: &s.keywords,
            })
            .collect();
        out.write_json("topic_summary.json", &json_rows)?;
    }
    Ok(())
}

pub fn write_assignments(
    out: &mut OutDir,
    assignments: &BTreeMap<usize, usize>,
    json_sibling: bool,
) -> Result<()> {
    let rows: Vec<Vec<String>> = assignments
        .iter()
        .map(|(id, cluster)| vec![id.to_string(), cluster.to_string()])
        .collect();
    out.write_csv(ASSIGNMENTS_CSV, &["description_id", "cluster"], &rows)?;
    if json_sibling {
        out.write_json("assignments.json", assignments)?;
    }
    Ok(())
}

pub fn read_assignments(out: &OutDir) -> Result<BTreeMap<usize, usize>> {
    let path = out.path(ASSIGNMENTS_CSV);
    let mut reader = csv::Reader::from_path(&path).with_context(|| {
        format!(
            "reading {} (run the cluster stage first)",
            path.display()
        )
    })?;
    let mut assignments = BTreeMap::new();
    for row in reader.records() {
        let row = row?;
        let id: usize = row.get(0).context("missing description_id")?.parse()?;
        let cluster: usize = row.get(1).context("missing cluster")?.parse()?;
        assignments.insert(id, cluster);
    }
    if assignments.is_empty() {
        bail!("{} contains no assignments", path.display());
    }
    Ok(assignments)
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Everything needed to reproduce a `run` byte-for-byte (except the
/// timestamp, which is informational).
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub created_utc: String,
    pub seed: u64,
    pub format: String,
    pub schema_mode: String,
    pub inputs: Vec<InputDigest>,
    pub stages: serde_json::Value,
    pub artifacts: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}
