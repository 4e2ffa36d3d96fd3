use std::net::SocketAddr;
use std::path::PathBuf;

use analogy_proto::{EmbeddingFormat, EvaluationSetting, Method};
use clap::{Args, Parser, Subcommand};

/// Analogy completion benchmarks for word embeddings.
#[derive(Parser, Debug)]
#[command(name = "analogy", version)]
pub struct Cli {
    /// Use a running service instead of starting one in-process. Paths are
    /// then resolved on the server's filesystem.
    #[arg(long, global = true, value_name = "URL")]
    pub server: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Score a dataset against an embedding model.
    Evaluate(EvaluateArgs),
    /// Build an analogy dataset from relation triples.
    Generate(GenerateArgs),
    /// Summarize an outcome file written by `evaluate`.
    Report(ReportArgs),
    /// Run the HTTP service in the foreground.
    Serve(ServeArgs),
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long, default_value_t = EmbeddingFormat::Text)]
    pub embeddings_format: EmbeddingFormat,
    /// Candidate vocabulary, one term per line.
    #[arg(long)]
    pub candidates: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    /// single, multi or all-info.
    #[arg(long, default_value_t = EvaluationSetting::MultiAnswer)]
    pub setting: EvaluationSetting,
    /// cosadd, pairdist or cosmul.
    #[arg(long, default_value_t = Method::CosAdd)]
    pub method: Method,
    /// Denominator offset for cosmul.
    #[arg(long, default_value_t = 0.001)]
    pub epsilon: f64,
    /// Map cosines into [0, 1] before the cosmul combination.
    #[arg(long)]
    pub shift_cosines: bool,
    /// Use raw query vectors instead of unit-normalizing them.
    #[arg(long)]
    pub no_normalize: bool,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: u16,
    /// Write the summary table here instead of stdout.
    #[arg(long)]
    pub out_table: Option<PathBuf>,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    /// Per-analogy outcomes, readable by `report`.
    #[arg(long)]
    pub out_outcomes: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// TSV of subject, relation, object.
    #[arg(long)]
    pub triples: PathBuf,
    /// TSV of concept, term.
    #[arg(long)]
    pub lexicon: PathBuf,
    /// TSV of term, count.
    #[arg(long)]
    pub frequencies: PathBuf,
    /// Relation ids to keep, one per line.
    #[arg(long)]
    pub allowlist: Option<PathBuf>,
    #[arg(long, default_value_t = 25)]
    pub min_term_freq: u64,
    #[arg(long, default_value_t = 50)]
    pub min_one_to_one: usize,
    #[arg(long, default_value_t = 50)]
    pub pairs_per_relation: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Receives dataset.ids.tsv, dataset.terms.tsv, stats.tsv and review.tsv.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long)]
    pub outcomes: PathBuf,
    #[arg(long)]
    pub out_table: Option<PathBuf>,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:7878")]
    pub bind: SocketAddr,
}
