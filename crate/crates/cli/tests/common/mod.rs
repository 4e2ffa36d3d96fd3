#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

/// 2-dim analogy where b - a + c points exactly at d and every method ranks
/// d first: man:woman :: king:queen.
pub const FIXTURE_EMB: &str = "man 1 0\nwoman 0 1\nking 0 -1\nqueen -0.8 0.6\n";
pub const FIXTURE_CANDIDATES: &str = "man\nwoman\nking\nqueen\n";
pub const FIXTURE_DATASET: &str = "gender\tman\twoman\tking\tqueen\n";

pub fn analogy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_analogy"))
        .args(args)
        .output()
        .expect("run analogy binary")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn arg(path: &Path) -> String {
    path.display().to_string()
}

pub struct Fixture {
    pub embeddings: PathBuf,
    pub candidates: PathBuf,
    pub dataset: PathBuf,
}

pub fn write_fixture(dir: &Path) -> Fixture {
    let f = Fixture {
        embeddings: dir.join("fixture.emb"),
        candidates: dir.join("fixture.candidates"),
        dataset: dir.join("fixture.tsv"),
    };
    fs::write(&f.embeddings, FIXTURE_EMB).unwrap();
    fs::write(&f.candidates, FIXTURE_CANDIDATES).unwrap();
    fs::write(&f.dataset, FIXTURE_DATASET).unwrap();
    f
}

pub struct GenerationInputs {
    pub triples: PathBuf,
    pub lexicon: PathBuf,
    pub frequencies: PathBuf,
}

/// `n_relations` relations named `R0..`, each with `pairs` disjoint 1:1
/// subject-object pairs whose terms all occur 100 times.
pub fn write_generation_inputs(dir: &Path, n_relations: usize, pairs: usize) -> GenerationInputs {
    let mut triples = String::new();
    let mut lexicon = String::new();
    let mut freqs = String::new();
    for r in 0..n_relations {
        for i in 0..pairs {
            let (s, o) = (format!("R{r}S{i}"), format!("R{r}O{i}"));
            writeln!(triples, "{s}\tR{r}\t{o}").unwrap();
            for c in [&s, &o] {
                let term = format!("term {}", c.to_lowercase());
                writeln!(lexicon, "{c}\t{term}").unwrap();
                writeln!(freqs, "{term}\t100").unwrap();
            }
        }
    }
    let inputs = GenerationInputs {
        triples: dir.join("triples.tsv"),
        lexicon: dir.join("lexicon.tsv"),
        frequencies: dir.join("frequencies.tsv"),
    };
    fs::write(&inputs.triples, triples).unwrap();
    fs::write(&inputs.lexicon, lexicon).unwrap();
    fs::write(&inputs.frequencies, freqs).unwrap();
    inputs
}

pub fn generate_args(inputs: &GenerationInputs, seed: u64, out_dir: &Path) -> Vec<String> {
    vec![
        "generate".into(),
        "--triples".into(),
        arg(&inputs.triples),
        "--lexicon".into(),
        arg(&inputs.lexicon),
        "--frequencies".into(),
        arg(&inputs.frequencies),
        "--seed".into(),
        seed.to_string(),
        "--out-dir".into(),
        arg(out_dir),
    ]
}

pub fn evaluate_args(emb: &Path, format: &str, candidates: &Path, dataset: &Path) -> Vec<String> {
    vec![
        "evaluate".into(),
        "--embeddings".into(),
        arg(emb),
        "--embeddings-format".into(),
        format.into(),
        "--candidates".into(),
        arg(candidates),
        "--dataset".into(),
        arg(dataset),
    ]
}

pub fn run(args: &[String]) -> Output {
    analogy(&args.iter().map(String::as_str).collect::<Vec<_>>())
}
