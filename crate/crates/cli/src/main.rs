mod args;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use analogy_client::Client;
use analogy_proto::*;
use clap::Parser;

use args::{Cli, Command, EvaluateArgs, GenerateArgs, ReportArgs};

type Failure = Box<dyn std::error::Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: cannot start runtime: {e}");
            return ExitCode::FAILURE;
        }
    };
    match runtime.block_on(run(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

async fn run(cli: Cli) -> Result<ExitCode, Failure> {
    if let Command::Serve(args) = &cli.command {
        let listener = tokio::net::TcpListener::bind(args.bind).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        analogy_service::serve(listener, analogy_service::AppState::new()).await?;
        return Ok(ExitCode::SUCCESS);
    }
    let client = match &cli.server {
        Some(url) => Client::new(url.as_str()),
        None => {
            let (addr, _server) = analogy_service::spawn(([127, 0, 0, 1], 0).into()).await?;
            Client::new(format!("http://{addr}"))
        }
    };
    match cli.command {
        Command::Evaluate(args) => evaluate(&client, args).await,
        Command::Generate(args) => generate(&client, args).await,
        Command::Report(args) => report(&client, args).await,
        Command::Serve(_) => unreachable!(),
    }
}

fn absolute(path: &Path) -> Result<String, Failure> {
    Ok(std::path::absolute(path)?.display().to_string())
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()).into())
}

/// Writes to `path` when given, stdout otherwise.
fn emit(path: Option<&PathBuf>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

async fn evaluate(client: &Client, args: EvaluateArgs) -> Result<ExitCode, Failure> {
    let scoring = ScoringMethod {
        method: args.method,
        epsilon: args.epsilon,
        shift_cosines: args.shift_cosines,
    };
    let req = EvaluateRequest {
        index: IndexRef::Load(LoadIndexRequest {
            embeddings: absolute(&args.embeddings)?,
            format: args.embeddings_format,
            candidates: absolute(&args.candidates)?,
        }),
        dataset: absolute(&args.dataset)?,
        setting: args.setting,
        scoring,
        normalize: !args.no_normalize,
        workers: args.workers.into(),
    };
    let resp = client.evaluate(&req).await?;
    let info = &resp.index;
    eprintln!(
        "index: {} candidates ({} discarded, {} duplicates), dim {}",
        info.entries, info.discarded, info.duplicates, info.dim
    );
    for s in &resp.skipped {
        eprintln!("skipped line {} ({}): {}", s.line, s.relation, s.reason);
    }

    if let Some(path) = &args.out_outcomes {
        write(path, &resp.outcomes)?;
    }
    if resp.summary.is_some() {
        emit(args.out_table.as_ref(), &resp.table)?;
        if let Some(path) = &args.out_csv {
            write(path, &resp.csv)?;
        }
    }
    eprintln!("scored {} analogies, skipped {}", resp.scored, resp.skipped.len());
    Ok(if resp.skipped.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

async fn generate(client: &Client, args: GenerateArgs) -> Result<ExitCode, Failure> {
    let req = GenerateRequest {
        triples: absolute(&args.triples)?,
        lexicon: absolute(&args.lexicon)?,
        frequencies: absolute(&args.frequencies)?,
        allowlist: args.allowlist.as_deref().map(absolute).transpose()?,
        min_term_freq: args.min_term_freq,
        min_one_to_one: args.min_one_to_one,
        pairs_per_relation: args.pairs_per_relation,
        seed: args.seed,
    };
    let resp = client.generate(&req).await?;
    fs::create_dir_all(&args.out_dir).map_err(|e| format!("{}: {e}", args.out_dir.display()))?;
    for (name, contents) in [
        ("dataset.ids.tsv", &resp.ids_tsv),
        ("dataset.terms.tsv", &resp.terms_tsv),
        ("stats.tsv", &resp.stats_tsv),
        ("review.tsv", &resp.review_tsv),
    ] {
        write(&args.out_dir.join(name), contents)?;
    }
    eprintln!(
        "{} relations, {} analogies written to {}",
        resp.relations.len(),
        resp.total_analogies,
        args.out_dir.display()
    );
    Ok(ExitCode::SUCCESS)
}

async fn report(client: &Client, args: ReportArgs) -> Result<ExitCode, Failure> {
    let outcomes = fs::read_to_string(&args.outcomes).map_err(|e| format!("{}: {e}", args.outcomes.display()))?;
    let resp = client.report(outcomes).await?;
    emit(args.out_table.as_ref(), &resp.table)?;
    if let Some(path) = &args.out_csv {
        write(path, &resp.csv)?;
    }
    Ok(ExitCode::SUCCESS)
}
