//! `drmine` — mine disengagement-report CSVs end to end: merge, dedupe,
//! topic-model, cluster, embed, and report.

mod artifacts;
mod stages;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use artifacts::OutDir;
use stages::PipelineOpts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "drmine",
    version,
    about = "Disengagement-report mining pipeline",
    disable_colored_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Global seed; all stage randomness derives from it.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Number of LDA topics.
    #[arg(long = "topics", value_name = "K", global = true, default_value_t = 10)]
    topics: usize,

    /// Smallest candidate cluster count for the silhouette sweep.
    #[arg(long = "k-min", global = true, default_value_t = 2)]
    k_min: usize,

    /// Largest candidate cluster count for the silhouette sweep.
    #[arg(long = "k-max", global = true, default_value_t = 10)]
    k_max: usize,

    /// Stopword list file (one word per line, # comments); default builtin.
    #[arg(long, value_name = "FILE", global = true)]
    stopwords: Option<PathBuf>,

    /// Category rules file (TOML); default builtin rules per command.
    #[arg(long, value_name = "FILE", global = true)]
    rules: Option<PathBuf>,

    /// Output directory for all artifacts.
    #[arg(long, value_name = "DIR", global = true, default_value = "out")]
    out: PathBuf,

    /// Tabular artifact format; csv always written, json adds siblings.
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    format: Format,

    /// Doc-topic Dirichlet prior; defaults to 1/K.
    #[arg(long, global = true)]
    alpha: Option<f64>,

    /// Topic-word Dirichlet prior.
    #[arg(long, global = true, default_value_t = 0.01)]
    beta: f64,

    /// Gibbs sweeps for LDA.
    #[arg(long = "lda-iterations", global = true, default_value_t = 1000)]
    lda_iterations: usize,

    /// Treat unrecognized enum values as errors when loading CSVs.
    #[arg(long, global = true)]
    strict: bool,

    /// Keep only words in at least this many descriptions.
    #[arg(long = "min-doc-count", global = true, default_value_t = 1)]
    min_doc_count: usize,

    /// Keep only words in at most this fraction of descriptions.
    #[arg(long = "max-doc-fraction", global = true, default_value_t = 0.5)]
    max_doc_fraction: f64,

    /// Words in the heatmap.
    #[arg(long = "top-n", global = true, default_value_t = 30)]
    top_n: usize,

    /// Weight heatmap counts by description occurrence.
    #[arg(long, global = true)]
    weighted: bool,

    /// t-SNE perplexity; default 30 clamped to the valid range.
    #[arg(long, global = true)]
    perplexity: Option<f64>,

    /// t-SNE gradient-descent iterations.
    #[arg(long = "tsne-iterations", global = true, default_value_t = 1000)]
    tsne_iterations: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Merge report CSV files into one canonical CSV.
    Merge {
        /// Input CSV files.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Extract the unique-description table from the merged CSV.
    Dedupe,
    /// Tokenize descriptions and build the vocabulary and bag-of-words corpus.
    Prep {
        /// Print tokenized descriptions as JSON to stdout.
        #[arg(long)]
        dump_tokens: bool,
        /// Print the vocabulary as JSON to stdout.
        #[arg(long)]
        dump_vocab: bool,
    },
    /// Fit the topic model and write the per-description summary.
    Topics,
    /// Sweep cluster counts and pick the best by mean silhouette.
    #[command(name = "select-k")]
    SelectK,
    /// Cluster documents by their topic distributions.
    Cluster {
        /// Cluster count; defaults to the silhouette sweep's best k.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Project topic distributions to 2-D for visualization.
    Embed,
    /// Produce the heatmap, cluster frequencies, and cluster categories.
    Report,
    /// Analyze a single cluster's descriptions in detail.
    Drill {
        /// Cluster id to analyze.
        #[arg(long)]
        cluster: usize,
        /// Also re-run topic modeling and clustering on just this cluster.
        #[arg(long)]
        recluster: bool,
    },
    /// Run the whole pipeline and write a reproducibility manifest.
    Run {
        /// Input CSV files.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Write a synthetic example corpus with known structure.
    Fixture,
}

impl Cli {
    fn pipeline_opts(&self) -> PipelineOpts {
        PipelineOpts {
            seed: self.seed,
            topics: self.topics,
            k_min: self.k_min,
            k_max: self.k_max,
            alpha: self.alpha,
            beta: self.beta,
            lda_iterations: self.lda_iterations,
            stopwords: self.stopwords.clone(),
            rules: self.rules.clone(),
            json_siblings: self.format == Format::Json,
            strict: self.strict,
            min_doc_count: self.min_doc_count,
            max_doc_fraction: self.max_doc_fraction,
            top_n: self.top_n,
            weighted: self.weighted,
            perplexity: self.perplexity,
            tsne_iterations: self.tsne_iterations,
        }
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<()> {
    let opts = cli.pipeline_opts();
    let mut out = OutDir::create(&cli.out)?;
    match &cli.command {
        Command::Merge { inputs } => stages::stage_merge(&opts, &mut out, inputs),
        Command::Dedupe => stages::stage_dedupe(&opts, &mut out),
        Command::Prep {
            dump_tokens,
            dump_vocab,
        } => stages::stage_prep(&opts, &mut out, *dump_tokens, *dump_vocab).map(|_| ()),
        Command::Topics => stages::stage_topics(&opts, &mut out).map(|_| ()),
        Command::SelectK => stages::stage_select_k(&opts, &mut out).map(|_| ()),
        Command::Cluster { k } => stages::stage_cluster(&opts, &mut out, *k).map(|_| ()),
        Command::Embed => stages::stage_embed(&opts, &mut out).map(|_| ()),
        Command::Report => stages::stage_report(&opts, &mut out).map(|_| ()),
        Command::Drill { cluster, recluster } => {
            stages::stage_drill(&opts, &mut out, *cluster, *recluster)
        }
        Command::Run { inputs } => stages::stage_run(&opts, &mut out, inputs),
        Command::Fixture => stages::stage_fixture(&opts, &mut out),
    }
}

fn main() -> ExitCode {
    // Exit codes: 0 success, 1 usage error, 2 data/validation error.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
